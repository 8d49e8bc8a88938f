#include <doctest.h>

#include <chrono>
#include <cmath>
#include <thread>

#include "shotlab/error.hpp"
#include "shotlab/evalreport.hpp"
#include "shotlab/metrics.hpp"
#include "shotlab/models.hpp"
#include "shotlab/rng.hpp"
#include "table5.hpp"
#include "test_util.hpp"

using namespace shotlab;
using namespace shotlab::metrics;

namespace {

/// Confusion counts whose precision and recall equal (p, r) to within
/// the three printed decimals: fixes tp and solves for fp and fn.
ConfusionCounts counts_for(double p, double r) {
  ConfusionCounts c;
  c.tp = 100000;
  c.fp = static_cast<std::size_t>(std::llround(static_cast<double>(c.tp) * (1.0 / p - 1.0)));
  c.fn = static_cast<std::size_t>(std::llround(static_cast<double>(c.tp) * (1.0 / r - 1.0)));
  c.tn = 1000000;
  return c;
}

}  // namespace

TEST_CASE("confusion counts by enumeration") {
  const std::vector<int> t{1, 1, 0, 0}, p{1, 0, 1, 0};
  const auto c = confusion_counts(t, p);
  CHECK(c == ConfusionCounts{1, 1, 1, 1});
  const auto perfect = confusion_counts(t, t);
  CHECK(perfect.fp == 0);
  CHECK(perfect.fn == 0);
  CHECK(perfect.tp == 2);
}

TEST_CASE("confusion counts agree with an independent tally") {
  CounterRng rng(5);
  std::vector<int> t(1000), p(1000);
  std::size_t tally[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < 1000; ++i) {
    t[i] = rng.uniform() < 0.3;
    p[i] = rng.uniform() < 0.4;
    ++tally[t[i]][p[i]];
  }
  const auto c = confusion_counts(t, p);
  CHECK(c.tp == tally[1][1]);
  CHECK(c.fn == tally[1][0]);
  CHECK(c.fp == tally[0][1]);
  CHECK(c.tn == tally[0][0]);
  CHECK(c.total() == 1000);
}

TEST_CASE("confusion count errors") {
  CHECK_THROWS_AS(confusion_counts(std::vector<int>{1, 0}, std::vector<int>{1}), DataError);
  CHECK_THROWS_AS(confusion_counts(std::vector<int>{2}, std::vector<int>{1}), DataError);
  CHECK_THROWS_AS(from_confusion(ConfusionCounts{}), DataError);
}

TEST_CASE("scores and the zero-division convention") {
  const auto s = from_confusion({1, 1, 1, 1});
  CHECK(s.accuracy == 0.5);
  CHECK(s.precision == 0.5);
  CHECK(s.recall == 0.5);
  CHECK(s.f1 == 0.5);
  CHECK_FALSE(s.zero_division);

  const auto none = from_confusion({0, 0, 5, 95});
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK(none.zero_division);
  CHECK(none.accuracy == 0.95);

  const auto no_pos = from_confusion({0, 3, 0, 7});
  CHECK(no_pos.recall == 0.0);
  CHECK(no_pos.zero_division);
  CHECK(f1_from(0.0, 0.0) == 0.0);
}

TEST_CASE("published precision and recall pairs reproduce their F1") {
  for (const auto& row : table5::kRows) {
    CAPTURE(row.label);
    CHECK(std::abs(f1_from(row.precision, row.recall) - row.f1) <= 0.002);
    const auto s = from_confusion(counts_for(row.precision, row.recall));
    CHECK(std::abs(s.f1 - row.f1) <= 0.002);
  }
  CHECK(std::round(f1_from(0.686, 0.262) * 1000) / 1000 == 0.379);
  CHECK(std::round(f1_from(0.415, 0.528) * 1000) / 1000 == 0.465);
}

TEST_CASE("majority baseline accuracy equals the majority fraction") {
  const std::size_t kill = table5::kKill, no_kill = table5::kNoKill;
  const auto s = from_confusion({0, 0, kill, no_kill});
  CHECK(s.accuracy == static_cast<double>(no_kill) / static_cast<double>(kill + no_kill));
  CHECK(std::abs(s.accuracy - 0.880) <= 0.001);
  CHECK(s.recall == 0.0);
}

TEST_CASE("make_row copies scores") {
  const auto r = evalreport::make_row("rf", "smote", {2, 1, 1, 6}, 3.5);
  CHECK(r.model == "rf");
  CHECK(r.resampler == "smote");
  CHECK(r.accuracy == 0.8);
  CHECK(r.precision == doctest::Approx(2.0 / 3.0));
  CHECK(r.recall == doctest::Approx(2.0 / 3.0));
  CHECK(r.inference_time_ms == 3.5);
}

TEST_CASE("inference timing") {
  int calls = 0;
  const double one = evalreport::measure_inference_time_ms(
      [&] {
        ++calls;
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
      },
      1);
  CHECK(calls == 2);  // warm-up plus one timed pass
  CHECK(one >= 2.0);
  CHECK(std::isfinite(one));

  calls = 0;
  const double med = evalreport::measure_inference_time_ms([&] { ++calls; }, 5);
  CHECK(calls == 6);
  CHECK(med >= 0.0);
}

TEST_CASE("KNN inference time grows with the training set") {
  const auto small = testutil::blobs(2000, 11, 1.0, 1, 8);
  const auto large = testutil::blobs(4000, 11, 1.0, 1, 8);
  const auto test = testutil::blobs(400, 11, 1.0, 2, 8);
  const auto a = models::fit_knn(small, 12);
  const auto b = models::fit_knn(large, 12);
  std::size_t sink = 0;
  const double ta = evalreport::measure_inference_time_ms([&] { sink += a.predict(test.X).size(); }, 5);
  const double tb = evalreport::measure_inference_time_ms([&] { sink += b.predict(test.X).size(); }, 5);
  CHECK(sink == 400 * 12);
  CHECK(tb > ta);
  CHECK(ta > 0.0);
}
