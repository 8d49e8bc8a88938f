#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "shotlab/csv.hpp"
#include "shotlab/error.hpp"
#include "shotlab/rng.hpp"

using namespace shotlab;

TEST_CASE("format_exact round-trips doubles") {
  CounterRng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.below(30)) - 15.0);
    CHECK(csv::parse_double(csv::format_exact(v)) == v);
  }
  CHECK(csv::format_exact(0.1) == "0.1");
  CHECK(csv::format_exact(3.0) == "3");
}

TEST_CASE("fixed and significant formatting") {
  CHECK(csv::format_fixed(0.4649, 3) == "0.465");
  CHECK(csv::format_fixed(-1.0, 2) == "-1.00");
  CHECK(csv::format_significant(8382.0123, 6) == "8382.01");
}

TEST_CASE("parse errors are reported") {
  CHECK_THROWS_AS(csv::parse_double("abc"), ParseError);
  CHECK_THROWS_AS(csv::parse_double("1.5x"), ParseError);
  CHECK_THROWS_AS(csv::parse_int("2.5"), ParseError);
}

TEST_CASE("table write and parse round trip") {
  csv::Table t;
  t.header = {"a", "b"};
  t.rows = {{"1", "x"}, {"2", "y"}};
  std::ostringstream out;
  csv::write(out, t);
  std::istringstream in(out.str());
  const auto back = csv::parse(in, "mem");
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.column("b") == 1);
  CHECK_THROWS_AS(back.column("c"), ParseError);
}

TEST_CASE("ragged rows are rejected") {
  std::istringstream in("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(csv::parse(in, "mem"), ParseError);
}
