#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace shotlab::csv {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_exact(double value);
/// Fixed-point with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);
/// `%.{digits}g`.
std::string format_significant(double value, int digits);

double parse_double(std::string_view text);
long long parse_int(std::string_view text);
std::uint64_t parse_uint64(std::string_view text);

/// Unquoted comma-separated table with a header row. Field values never
/// contain commas or quotes in this project's files.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of `name` in the header; throws ParseError when missing.
  std::size_t column(std::string_view name) const;
};

Table read(const std::filesystem::path& path);
Table parse(std::istream& in, const std::string& source_name);

void write(const std::filesystem::path& path, const Table& table);
void write(std::ostream& out, const Table& table);

std::vector<std::string> split(std::string_view line, char sep = ',');

}  // namespace shotlab::csv
