#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "shotlab/matrix.hpp"

namespace shotlab::doe {

enum class Unit { Kft, Mach, Km, DbSquareMeter, Percent, DegreesLongitude, Dimensionless };
enum class VariableKind { Continuous, Binary, TwoLevelCategorical };

struct VariableSpec {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  Unit unit = Unit::Dimensionless;
  VariableKind kind = VariableKind::Continuous;
};

/// Throws SpecificationError when the bounds are inconsistent with the kind.
void validate(const VariableSpec& spec);

/// The fifteen scenario variables with their native-unit bounds, in the
/// canonical column order used by design.csv.
const std::vector<VariableSpec>& scenario_variables();

/// Column indices into scenario_variables().
namespace column {
inline constexpr std::size_t blue_altitude = 0;
inline constexpr std::size_t red_altitude = 1;
inline constexpr std::size_t blue_speed = 2;
inline constexpr std::size_t red_speed = 3;
inline constexpr std::size_t blue_track_range = 4;
inline constexpr std::size_t blue_missile_range = 5;
inline constexpr std::size_t blue_rcs = 6;
inline constexpr std::size_t blue_activation = 7;
inline constexpr std::size_t blue_shot_philosophy = 8;
inline constexpr std::size_t blue_spacing = 9;
inline constexpr std::size_t red_spacing = 10;
inline constexpr std::size_t blue_cap_speed = 11;
inline constexpr std::size_t red_cap_speed = 12;
inline constexpr std::size_t blue_concept = 13;
inline constexpr std::size_t six_blue = 14;
inline constexpr std::size_t count = 15;
}  // namespace column

struct DesignMatrix {
  std::vector<std::string> columns;
  Matrix values;  // n_cases x columns.size(), native units

  std::size_t n_cases() const noexcept { return values.rows(); }
  friend bool operator==(const DesignMatrix&, const DesignMatrix&) = default;
};

/// Latin hypercube draw: per column, one uniform point inside each of the
/// n_cases equal-width strata, with strata assigned to cases by an
/// independent random permutation. Column j consumes only stream j of the
/// seeded generator.
DesignMatrix lhs_sample(std::span<const VariableSpec> specs, std::size_t n_cases,
                        std::uint64_t seed);

/// Index of the stratum that `value` falls in, for n equal strata of
/// [spec.min, spec.max).
std::size_t stratum_of(const VariableSpec& spec, std::size_t n_strata, double value);

inline constexpr double kMetersPerKft = 304.8;
inline constexpr double kMetersPerKm = 1000.0;

/// One decoded design row in SI units (Mach kept as Mach).
struct SimCase {
  double blue_alt_m = 0.0;
  double red_alt_m = 0.0;
  double blue_speed_mach = 0.0;
  double red_speed_mach = 0.0;
  double blue_track_range_m = 0.0;
  double blue_missile_range_factor = 1.0;
  double blue_rcs_delta_db = 0.0;
  double blue_missile_act_dist_m = 0.0;
  double blue_shot_philosophy_pct = 60.0;
  double blue_spacing_deg = 0.0;
  double red_spacing_deg = 0.0;
  double blue_cap_mach = 0.0;
  double red_cap_mach = 0.0;
  int blue_concept = 1;
  bool blue_six_ship = false;

  friend bool operator==(const SimCase&, const SimCase&) = default;
};

/// Decodes one row of scenario_variables() values. Binary and categorical
/// columns are thresholded at their interval midpoint. Throws DecodeError
/// naming the offending column when a value is outside its bounds.
SimCase decode_case(std::span<const double> row);

std::vector<SimCase> decode_design(const DesignMatrix& design);

void save_design(const DesignMatrix& design, const std::filesystem::path& path);
DesignMatrix load_design(const std::filesystem::path& path);

}  // namespace shotlab::doe
