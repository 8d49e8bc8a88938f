#include "shotlab/doe.hpp"

#include <algorithm>
#include <cmath>

#include "shotlab/csv.hpp"
#include "shotlab/error.hpp"
#include "shotlab/rng.hpp"

namespace shotlab::doe {

void validate(const VariableSpec& spec) {
  switch (spec.kind) {
    case VariableKind::Continuous:
      if (!(spec.min < spec.max) || !std::isfinite(spec.min) || !std::isfinite(spec.max)) {
        throw SpecificationError("variable '" + spec.name + "': min must be below max");
      }
      break;
    case VariableKind::Binary:
      if (spec.min != 0.0 || spec.max != 1.0) {
        throw SpecificationError("binary variable '" + spec.name + "' must span {0, 1}");
      }
      break;
    case VariableKind::TwoLevelCategorical:
      if (spec.min != 1.0 || spec.max != 2.0) {
        throw SpecificationError("categorical variable '" + spec.name + "' must span {1, 2}");
      }
      break;
  }
}

const std::vector<VariableSpec>& scenario_variables() {
  using enum Unit;
  using enum VariableKind;
  static const std::vector<VariableSpec> registry = {
      {"blue_altitude", 27.5, 42.5, Kft, Continuous},
      {"red_altitude", 27.5, 42.5, Kft, Continuous},
      {"blue_speed", 0.9, 1.5, Mach, Continuous},
      {"red_speed", 0.9, 1.5, Mach, Continuous},
      {"blue_radar_track_range", 150.0, 300.0, Km, Continuous},
      {"blue_missile_range_factor", 1.0, 2.0, Dimensionless, Continuous},
      {"blue_rcs", -10.0, 10.0, DbSquareMeter, Continuous},
      {"blue_missile_activation_distance", 15.0, 30.0, Km, Continuous},
      {"blue_shot_philosophy", 50.0, 70.0, Percent, Continuous},
      {"blue_initial_spacing", 0.1, 1.0, DegreesLongitude, Continuous},
      {"red_initial_spacing", 0.1, 1.0, DegreesLongitude, Continuous},
      {"blue_cap_speed", 0.7, 0.75, Mach, Continuous},
      {"red_cap_speed", 0.7, 0.75, Mach, Continuous},
      {"blue_concept", 1.0, 2.0, Dimensionless, TwoLevelCategorical},
      {"six_blue_aircraft", 0.0, 1.0, Dimensionless, Binary},
  };
  return registry;
}

namespace {

// Lower edge of stratum k. Computed the same way everywhere so that sampling
// and the stratum lookup agree bit for bit at the edges.
double stratum_edge(const VariableSpec& spec, std::size_t n, std::size_t k) {
  if (k >= n) return spec.max;
  return spec.min + (spec.max - spec.min) * (static_cast<double>(k) / static_cast<double>(n));
}

}  // namespace

std::size_t stratum_of(const VariableSpec& spec, std::size_t n_strata, double value) {
  const double t = (value - spec.min) / (spec.max - spec.min);
  auto k = static_cast<std::ptrdiff_t>(std::floor(t * static_cast<double>(n_strata)));
  const auto last = static_cast<std::ptrdiff_t>(n_strata) - 1;
  k = std::clamp<std::ptrdiff_t>(k, 0, last);
  while (k > 0 && value < stratum_edge(spec, n_strata, static_cast<std::size_t>(k))) --k;
  while (k < last && value >= stratum_edge(spec, n_strata, static_cast<std::size_t>(k) + 1)) ++k;
  return static_cast<std::size_t>(k);
}

DesignMatrix lhs_sample(std::span<const VariableSpec> specs, std::size_t n_cases,
                        std::uint64_t seed) {
  if (specs.empty()) throw SpecificationError("lhs_sample: no variables");
  if (n_cases == 0) throw SpecificationError("lhs_sample: n_cases must be at least 1");
  for (const auto& s : specs) validate(s);

  DesignMatrix design;
  design.values = Matrix(n_cases, specs.size());
  const CounterRng root(seed);
  for (std::size_t j = 0; j < specs.size(); ++j) {
    const auto& spec = specs[j];
    design.columns.push_back(spec.name);
    CounterRng stream = root.split(j);
    const auto perm = random_permutation(n_cases, stream);
    for (std::size_t i = 0; i < n_cases; ++i) {
      const std::size_t k = perm[i];
      const double lo = stratum_edge(spec, n_cases, k);
      const double hi = stratum_edge(spec, n_cases, k + 1);
      double v = lo + stream.uniform() * (hi - lo);
      if (v >= hi) v = std::nextafter(hi, lo);
      if (v < lo) v = lo;
      design.values(i, j) = v;
    }
  }
  return design;
}

SimCase decode_case(std::span<const double> row) {
  const auto& vars = scenario_variables();
  if (row.size() != vars.size()) {
    throw DecodeError("decode_case: expected " + std::to_string(vars.size()) + " values, got " +
                      std::to_string(row.size()));
  }
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (!(row[j] >= vars[j].min && row[j] <= vars[j].max)) {
      throw DecodeError("decode_case: column '" + vars[j].name + "' value " +
                        csv::format_exact(row[j]) + " outside [" + csv::format_exact(vars[j].min) +
                        ", " + csv::format_exact(vars[j].max) + "]");
    }
  }
  auto midpoint = [&](std::size_t j) { return 0.5 * (vars[j].min + vars[j].max); };

  namespace c = column;
  SimCase out;
  out.blue_alt_m = row[c::blue_altitude] * kMetersPerKft;
  out.red_alt_m = row[c::red_altitude] * kMetersPerKft;
  out.blue_speed_mach = row[c::blue_speed];
  out.red_speed_mach = row[c::red_speed];
  out.blue_track_range_m = row[c::blue_track_range] * kMetersPerKm;
  out.blue_missile_range_factor = row[c::blue_missile_range];
  out.blue_rcs_delta_db = row[c::blue_rcs];
  out.blue_missile_act_dist_m = row[c::blue_activation] * kMetersPerKm;
  out.blue_shot_philosophy_pct = row[c::blue_shot_philosophy];
  out.blue_spacing_deg = row[c::blue_spacing];
  out.red_spacing_deg = row[c::red_spacing];
  out.blue_cap_mach = row[c::blue_cap_speed];
  out.red_cap_mach = row[c::red_cap_speed];
  out.blue_concept = row[c::blue_concept] < midpoint(c::blue_concept) ? 1 : 2;
  // Level 0 of the last column means "six blue aircraft".
  out.blue_six_ship = row[c::six_blue] < midpoint(c::six_blue);
  return out;
}

std::vector<SimCase> decode_design(const DesignMatrix& design) {
  const auto& vars = scenario_variables();
  if (design.columns.size() != vars.size()) {
    throw DecodeError("design has " + std::to_string(design.columns.size()) +
                      " columns, expected " + std::to_string(vars.size()));
  }
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (design.columns[j] != vars[j].name) {
      throw DecodeError("design column " + std::to_string(j) + " is '" + design.columns[j] +
                        "', expected '" + vars[j].name + "'");
    }
  }
  std::vector<SimCase> cases;
  cases.reserve(design.n_cases());
  for (std::size_t i = 0; i < design.n_cases(); ++i) cases.push_back(decode_case(design.values.row(i)));
  return cases;
}

void save_design(const DesignMatrix& design, const std::filesystem::path& path) {
  csv::Table table;
  table.header = design.columns;
  for (std::size_t i = 0; i < design.n_cases(); ++i) {
    std::vector<std::string> fields;
    for (double v : design.values.row(i)) fields.push_back(csv::format_exact(v));
    table.rows.push_back(std::move(fields));
  }
  csv::write(path, table);
}

DesignMatrix load_design(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  DesignMatrix design;
  design.columns = table.header;
  design.values = Matrix(table.rows.size(), table.header.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      design.values(i, j) = csv::parse_double(table.rows[i][j]);
    }
  }
  return design;
}

}  // namespace shotlab::doe
