#include <doctest.h>

#include <vector>

#include "shotlab/doe.hpp"
#include "shotlab/error.hpp"
#include "test_util.hpp"

using namespace shotlab;
using namespace shotlab::doe;

namespace {

// Independent stratum count: value v of [lo, hi) lies in stratum k iff
// lo + k (hi - lo) / n <= v < lo + (k + 1)(hi - lo) / n.
bool one_per_stratum(const std::vector<double>& column, double lo, double hi) {
  const std::size_t n = column.size();
  std::vector<int> counts(n, 0);
  for (double v : column) {
    if (v < lo || v >= hi) return false;
    std::size_t hit = n;
    for (std::size_t k = 0; k < n; ++k) {
      const double a = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n);
      const double b = k + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(n);
      if (v >= a && v < b) {
        hit = k;
        break;
      }
    }
    if (hit == n) return false;
    ++counts[hit];
  }
  for (int c : counts) {
    if (c != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("registry holds the fifteen scenario variables") {
  const auto& vars = scenario_variables();
  REQUIRE(vars.size() == column::count);
  CHECK(vars[column::blue_altitude].min == 27.5);
  CHECK(vars[column::blue_altitude].max == 42.5);
  CHECK(vars[column::blue_shot_philosophy].min == 50.0);
  CHECK(vars[column::blue_shot_philosophy].max == 70.0);
  CHECK(vars[column::blue_missile_range].min == 1.0);
  CHECK(vars[column::blue_missile_range].max == 2.0);
  CHECK(vars[column::blue_concept].kind == VariableKind::TwoLevelCategorical);
  CHECK(vars[column::six_blue].kind == VariableKind::Binary);
  for (const auto& v : vars) CHECK_NOTHROW(validate(v));
}

TEST_CASE("invalid bounds are rejected") {
  CHECK_THROWS_AS(validate({"x", 2.0, 1.0}), SpecificationError);
  CHECK_THROWS_AS(validate({"x", 0.0, 2.0, Unit::Dimensionless, VariableKind::Binary}), SpecificationError);
  CHECK_THROWS_AS(validate({"x", 0.0, 1.0, Unit::Dimensionless, VariableKind::TwoLevelCategorical}),
                  SpecificationError);
  const std::vector<VariableSpec> bad{{"x", 1.0, 1.0}};
  CHECK_THROWS_AS(lhs_sample(bad, 4, 1), SpecificationError);
}

TEST_CASE("single case lands inside the interval") {
  const std::vector<VariableSpec> one{{"x", 0.0, 1.0}};
  const auto d = lhs_sample(one, 1, 3);
  REQUIRE(d.values.rows() == 1);
  CHECK(d.values(0, 0) >= 0.0);
  CHECK(d.values(0, 0) < 1.0);
}

TEST_CASE("four cases fill the four unit strata of [0, 4]") {
  const std::vector<VariableSpec> one{{"x", 0.0, 4.0}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto d = lhs_sample(one, 4, seed);
    std::vector<int> hits(4, 0);
    for (std::size_t i = 0; i < 4; ++i) {
      const double v = d.values(i, 0);
      REQUIRE(v >= 0.0);
      REQUIRE(v < 4.0);
      ++hits[static_cast<std::size_t>(v)];
    }
    CHECK(hits == std::vector<int>{1, 1, 1, 1});
  }
}

TEST_CASE("full registry at 240 cases passes the brute-force stratum check") {
  const auto& vars = scenario_variables();
  for (std::uint64_t seed : {1ULL, 42ULL, 0xdeadbeefULL}) {
    const auto d = lhs_sample(vars, 240, seed);
    REQUIRE(d.values.rows() == 240);
    REQUIRE(d.values.cols() == 15);
    for (std::size_t c = 0; c < vars.size(); ++c) {
      CHECK(one_per_stratum(d.values.column(c), vars[c].min, vars[c].max));
    }
  }
}

TEST_CASE("stratum_of agrees with the brute-force stratum") {
  const VariableSpec s{"x", 27.5, 42.5};
  const auto d = lhs_sample(std::vector<VariableSpec>{s}, 240, 9);
  std::vector<int> seen(240, 0);
  for (std::size_t i = 0; i < 240; ++i) ++seen[stratum_of(s, 240, d.values(i, 0))];
  for (int c : seen) CHECK(c == 1);
}

TEST_CASE("marginals are uniform at n = 1000") {
  const auto& vars = scenario_variables();
  const auto d = lhs_sample(vars, 1000, 2024);
  for (std::size_t c = 0; c < vars.size(); ++c) {
    std::vector<double> bins(10, 0.0);
    for (std::size_t i = 0; i < 1000; ++i) {
      const double t = (d.values(i, c) - vars[c].min) / (vars[c].max - vars[c].min);
      ++bins[std::min<std::size_t>(9, static_cast<std::size_t>(t * 10.0))];
    }
    double chi2 = 0.0;
    for (double b : bins) chi2 += (b - 100.0) * (b - 100.0) / 100.0;
    CHECK(chi2 < 27.877);  // chi-square(9) upper 0.001 quantile
  }
}

TEST_CASE("columns use independent streams") {
  const auto& vars = scenario_variables();
  const std::vector<VariableSpec> first_two(vars.begin(), vars.begin() + 2);
  const auto full = lhs_sample(vars, 30, 5);
  const auto part = lhs_sample(first_two, 30, 5);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(full.values(i, 0) == part.values(i, 0));
    CHECK(full.values(i, 1) == part.values(i, 1));
  }
}

TEST_CASE("sampling is deterministic per seed") {
  const auto& vars = scenario_variables();
  CHECK(lhs_sample(vars, 24, 77) == lhs_sample(vars, 24, 77));
  CHECK(!(lhs_sample(vars, 24, 77) == lhs_sample(vars, 24, 78)));
}

TEST_CASE("decode applies unit conversions once") {
  std::vector<double> row(column::count);
  for (std::size_t c = 0; c < column::count; ++c) row[c] = scenario_variables()[c].min;
  row[column::blue_altitude] = 27.5;
  row[column::blue_track_range] = 200.0;
  row[column::blue_activation] = 20.0;
  row[column::six_blue] = 0.73;
  row[column::blue_concept] = 1.2;
  const auto sc = decode_case(row);
  CHECK(sc.blue_alt_m == doctest::Approx(8382.0).epsilon(1e-12));
  CHECK(sc.blue_track_range_m == doctest::Approx(200000.0));
  CHECK(sc.blue_missile_act_dist_m == doctest::Approx(20000.0));
  CHECK_FALSE(sc.blue_six_ship);
  CHECK(sc.blue_concept == 1);
  row[column::six_blue] = 0.2;
  row[column::blue_concept] = 1.7;
  const auto sc2 = decode_case(row);
  CHECK(sc2.blue_six_ship);
  CHECK(sc2.blue_concept == 2);
  CHECK(sc2.blue_speed_mach == 0.9);
}

TEST_CASE("out-of-bounds values name their column") {
  std::vector<double> row(column::count);
  for (std::size_t c = 0; c < column::count; ++c) row[c] = scenario_variables()[c].min;
  row[column::blue_shot_philosophy] = 80.0;
  try {
    (void)decode_case(row);
    FAIL("expected DecodeError");
  } catch (const DecodeError& e) {
    CHECK(std::string(e.what()).find("blue_shot_philosophy") != std::string::npos);
  }
}

TEST_CASE("design save and load is value-exact") {
  const auto dir = testutil::scratch_dir("doe");
  const auto d = lhs_sample(scenario_variables(), 24, 13);
  save_design(d, dir / "design.csv");
  const auto back = load_design(dir / "design.csv");
  CHECK(back == d);
  CHECK(back.columns.front() == "blue_altitude");
}
