#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "shotlab/csv.hpp"
#include "shotlab/dataset.hpp"
#include "shotlab/error.hpp"
#include "test_util.hpp"

using namespace shotlab;
using namespace shotlab::dataset;

namespace {

doe::SimCase scenario() {
  doe::SimCase c;
  c.blue_track_range_m = 180000.0;
  c.blue_missile_act_dist_m = 15000.0;
  c.blue_missile_range_factor = 1.2;
  c.blue_rcs_delta_db = -3.5;
  c.blue_shot_philosophy_pct = 75.0;
  c.blue_concept = 2;
  return c;
}

sim::ShotEvent event(double shooter_alt, double target_alt, double shooter_hdg, double target_hdg) {
  sim::ShotEvent e;
  e.shooter_side = sim::Side::Blue;
  e.shooter = {0, {0, 0, shooter_alt}, shooter_hdg, 300.0};
  e.target = {5, {1000, 30000, target_alt}, target_hdg, 250.0};
  e.distance_m = 30000.0;
  e.off_boresight_deg = 3.0;
  e.delta_heading_deg = sim::wrap_360(target_hdg - shooter_hdg);
  e.outcome = sim::Outcome::Kill;
  return e;
}

}  // namespace

TEST_CASE("extract_record maps the event into model units") {
  const auto r = extract_record(event(9000.0, 8000.0, 350.0, 10.0), scenario());
  CHECK(r.delta_altitude == 1000.0);
  CHECK(r.delta_heading == doctest::Approx(20.0));
  CHECK(r.delta_speed == doctest::Approx(50.0 * 1.943844));
  CHECK(r.radar_track_range == 180000.0);
  CHECK(r.missile_act_dist == 15000.0);
  CHECK(r.missile_range == 1.2);
  CHECK(r.rcs == -3.5);
  CHECK(r.firerange == 75.0);
  CHECK(r.aircraft_concept == 2);
  CHECK(r.kill == 1);
  CHECK(r.distance == 30000.0);
}

TEST_CASE("delta heading is normalized into [0, 360)") {
  // Shooter heading 350, target heading 10, measured the other way round.
  auto e = event(9000.0, 9000.0, 10.0, 350.0);
  e.delta_heading_deg = 340.0;
  CHECK(extract_record(e, scenario()).delta_heading == doctest::Approx(340.0));
  e.delta_heading_deg = -20.0;
  CHECK(extract_record(e, scenario()).delta_heading == doctest::Approx(340.0));
  e.delta_heading_deg = 380.0;
  CHECK(extract_record(e, scenario()).delta_heading == doctest::Approx(20.0));
}

TEST_CASE("off-boresight angle matches a planar trigonometric oracle") {
  doe::SimCase c = scenario();
  c.blue_alt_m = c.red_alt_m = 9000.0;
  c.blue_speed_mach = c.red_speed_mach = 0.9;
  c.blue_cap_mach = c.red_cap_mach = 0.7;
  c.blue_spacing_deg = c.red_spacing_deg = 0.1;
  c.blue_concept = 1;
  CounterRng rng(8);
  for (int i = 0; i < 200; ++i) {
    sim::WorldState w = sim::initial_world(c);
    const double heading = 360.0 * rng.uniform();
    const double bx = 60000.0 * (rng.uniform() - 0.5), by = 60000.0 * (rng.uniform() - 0.5);
    if (std::hypot(bx, by) < 100.0) continue;
    auto& shooter = w.aircraft[0];
    shooter.position = {0, 0, 9000};
    shooter.heading_deg = heading;
    shooter.speed_mps = 250.0;
    auto& target = w.aircraft.back();
    target.position = {bx, by, 9000};
    target.heading_deg = heading;
    target.speed_mps = 250.0;
    sim::launch_missile(w, shooter, target);
    const auto r = extract_record(
        [&] {
          auto e = w.events.back();
          e.outcome = sim::Outcome::NoKill;
          return e;
        }(),
        c);
    // Bearing clockwise from north, relative to the nose, wrapped to [-180, 180).
    const double bearing = std::atan2(bx, by) * 180.0 / M_PI;
    double rel = std::fmod(bearing - heading + 540.0, 360.0) - 180.0;
    CHECK(r.angle_uni_to_tgt == doctest::Approx(rel).epsilon(1e-9));
    CHECK(r.delta_heading == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r.delta_speed == 0.0);
    CHECK(r.kill == 0);
  }
}

TEST_CASE("unresolved outcome is a sequencing error") {
  auto e = event(9000.0, 8000.0, 0.0, 180.0);
  e.outcome = sim::Outcome::Pending;
  CHECK_THROWS_AS(extract_record(e, scenario()), SequencingError);
}

TEST_CASE("only blue shots enter the dataset") {
  std::vector<sim::ShotEvent> events{event(9000, 8000, 0, 180), event(9000, 8000, 0, 180)};
  events[1].shooter_side = sim::Side::Red;
  const std::vector<doe::SimCase> cases{scenario()};
  CHECK(build_records(events, cases).size() == 1);
  events[0].case_index = 4;
  CHECK_THROWS_AS(build_records(events, cases), DataError);
}

TEST_CASE("dataset header and round trip") {
  const auto dir = testutil::scratch_dir("dataset_io");
  Dataset ds;
  CounterRng rng(3);
  for (int i = 0; i < 30; ++i) {
    auto e = event(5000 + 1000 * rng.uniform(), 8000.0, 360 * rng.uniform(), 360 * rng.uniform());
    e.distance_m = 1.0 / 3.0 + i;
    e.off_boresight_deg = 0.1 * i - 1.0;
    e.outcome = i % 3 ? sim::Outcome::NoKill : sim::Outcome::Kill;
    ds.records.push_back(extract_record(e, scenario()));
  }
  write_dataset(dir / "dataset.csv", ds);
  std::ifstream in(dir / "dataset.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "radar_track_range,distance,missile_act_dist,delta_altitude,delta_speed,missile_range,rcs,firerange,"
        "angle_uni_to_tgt,delta_heading,concept,kill");
  CHECK(read_dataset(dir / "dataset.csv").records == ds.records);

  const auto lm = ds.labeled();
  CHECK(lm.X.cols() == 11);
  CHECK(ds.with_label().cols() == 12);
  CHECK(ds.with_label()(0, 11) == 1.0);
  CHECK(lm.X(3, 10) == 2.0);
}

TEST_CASE("train/test split") {
  const auto s = train_test_split(100, 0.15, 9);
  CHECK(s.test.size() == 15);
  CHECK(s.train.size() == 85);
  CHECK(std::is_sorted(s.train.begin(), s.train.end()));
  CHECK(std::is_sorted(s.test.begin(), s.test.end()));
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  for (auto i : s.test) CHECK(all.insert(i).second);
  CHECK(all.size() == 100);
  CHECK(*all.rbegin() == 99);

  const auto again = train_test_split(100, 0.15, 9);
  CHECK(again.test == s.test);
  CHECK(again.train == s.train);
  CHECK(train_test_split(100, 0.15, 10).test != s.test);
  CHECK(train_test_split(101, 0.15, 1).test.size() == 16);
  CHECK_THROWS_AS(train_test_split(19, 0.15, 1), SizeError);
}

TEST_CASE("split membership is uniform") {
  // Each index lands in the test part with probability 0.15.
  std::vector<int> hits(40, 0);
  const int reps = 4000;
  for (int s = 0; s < reps; ++s) {
    for (auto i : train_test_split(40, 0.15, static_cast<std::uint64_t>(s)).test) ++hits[i];
  }
  const double p = 6.0 / 40.0;
  const double sd = std::sqrt(reps * p * (1 - p));
  for (int h : hits) CHECK(std::abs(h - reps * p) < 5 * sd);
}

TEST_CASE("k-fold indices") {
  auto sizes = [](const std::vector<std::vector<std::size_t>>& f) {
    std::vector<std::size_t> out;
    for (const auto& x : f) out.push_back(x.size());
    return out;
  };
  CHECK(sizes(kfold_indices(10, 5, 1)) == std::vector<std::size_t>{2, 2, 2, 2, 2});
  CHECK(sizes(kfold_indices(11, 5, 1)) == std::vector<std::size_t>{3, 2, 2, 2, 2});
  const auto folds = kfold_indices(1000, 5, 4);
  std::vector<int> seen(1000, 0);
  for (const auto& f : folds) {
    CHECK(std::is_sorted(f.begin(), f.end()));
    for (auto i : f) ++seen[i];
  }
  CHECK(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));
  CHECK(kfold_indices(1000, 5, 4) == folds);
  CHECK_THROWS_AS(kfold_indices(4, 5, 1), SizeError);
}

TEST_CASE("scaler") {
  Matrix two(2, 1, std::vector<double>{2.0, 4.0});
  const auto p = fit_scaler(two);
  CHECK(p.mean[0] == 3.0);
  CHECK(p.std[0] == 1.0);
  const auto z = p.apply(two);
  CHECK(z(0, 0) == -1.0);
  CHECK(z(1, 0) == 1.0);

  const auto data = testutil::blobs(200, 5, 3.0, 12);
  const auto q = fit_scaler(data.X);
  const auto zs = q.apply(data.X);
  for (std::size_t c = 0; c < 5; ++c) {
    double m = 0.0, v = 0.0;
    for (std::size_t r = 0; r < zs.rows(); ++r) m += zs(r, c);
    m /= static_cast<double>(zs.rows());
    for (std::size_t r = 0; r < zs.rows(); ++r) v += (zs(r, c) - m) * (zs(r, c) - m);
    v /= static_cast<double>(zs.rows());
    CHECK(std::abs(m) < 1e-9);
    CHECK(std::abs(std::sqrt(v) - 1.0) < 1e-9);
  }
  Matrix mean_row(1, 5, q.mean);
  const auto zero = q.apply(mean_row);
  for (double v : zero.data()) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
  const auto back = q.inverse(zs);
  for (std::size_t i = 0; i < back.data().size(); ++i) CHECK(std::abs(back.data()[i] - data.X.data()[i]) < 1e-9);

  std::vector<double> out(5);
  q.apply_row(data.X.row(7), out);
  for (std::size_t c = 0; c < 5; ++c) CHECK(out[c] == zs(7, c));
}

TEST_CASE("constant column gets unit std and is flagged") {
  Matrix X(3, 2, std::vector<double>{1.0, 5.0, 2.0, 5.0, 3.0, 5.0});
  const auto p = fit_scaler(X);
  CHECK(p.std[1] == 1.0);
  CHECK(p.constant_columns == std::vector<std::size_t>{1});
  const auto z = p.apply(X);
  for (std::size_t r = 0; r < 3; ++r) CHECK(z(r, 1) == 0.0);
}

TEST_CASE("class balance") {
  std::vector<int> paper(18397 + 135209, 0);
  std::fill(paper.begin(), paper.begin() + 18397, 1);
  const auto b = class_balance(paper);
  CHECK(b.positives == 18397);
  CHECK(b.negatives == 135209);
  CHECK(b.minority_fraction == doctest::Approx(0.1198).epsilon(0.00005 / 0.1198));
  CHECK_FALSE(b.single_class);

  std::vector<int> even(20, 0);
  std::fill(even.begin(), even.begin() + 10, 1);
  CHECK(class_balance(even).minority_fraction == 0.5);
  CHECK(class_balance(std::vector<int>(5, 1)).single_class);
  CHECK_THROWS_AS(class_balance(std::vector<int>{}), SizeError);
}

TEST_CASE("feature and column names") {
  const auto f = feature_names();
  const auto c = column_names();
  CHECK(f.size() == 11);
  CHECK(c.size() == 12);
  CHECK(c.back() == "kill");
  CHECK(f.front() == "radar_track_range");
  CHECK(f[10] == "concept");
}
