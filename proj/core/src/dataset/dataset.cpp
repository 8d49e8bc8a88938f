#include "shotlab/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shotlab/csv.hpp"
#include "shotlab/error.hpp"
#include "shotlab/log.hpp"
#include "shotlab/rng.hpp"

namespace shotlab::dataset {

std::array<double, kFeatureCount> ShotRecord::features() const noexcept {
  return {radar_track_range, distance,  missile_act_dist, delta_altitude,
          delta_speed,       missile_range, rcs,          firerange,
          angle_uni_to_tgt,  delta_heading, static_cast<double>(aircraft_concept)};
}

ShotRecord extract_record(const sim::ShotEvent& event, const doe::SimCase& scenario) {
  if (event.outcome == sim::Outcome::Pending) {
    throw SequencingError("shot at t=" + csv::format_fixed(event.time_s, 1) + " of run " +
                          std::to_string(event.run_id) + " has no resolved outcome");
  }
  ShotRecord r;
  r.radar_track_range = scenario.blue_track_range_m;
  r.distance = event.distance_m;
  r.missile_act_dist = scenario.blue_missile_act_dist_m;
  r.delta_altitude = event.shooter.altitude_m() - event.target.altitude_m();
  r.delta_speed = (event.shooter.speed_mps - event.target.speed_mps) * kKnotsPerMps;
  r.missile_range = scenario.blue_missile_range_factor;
  r.rcs = scenario.blue_rcs_delta_db;
  r.firerange = scenario.blue_shot_philosophy_pct;
  r.angle_uni_to_tgt = event.off_boresight_deg;
  r.delta_heading = sim::wrap_360(event.delta_heading_deg);
  r.aircraft_concept = scenario.blue_concept;
  r.kill = event.outcome == sim::Outcome::Kill ? 1 : 0;
  return r;
}

std::vector<ShotRecord> build_records(std::span<const sim::ShotEvent> events,
                                      std::span<const doe::SimCase> cases) {
  std::vector<ShotRecord> out;
  for (const auto& e : events) {
    if (e.shooter_side != sim::Side::Blue) continue;
    if (e.case_index >= cases.size()) {
      throw DataError("shot references case " + std::to_string(e.case_index) + " but the design has " +
                      std::to_string(cases.size()) + " cases");
    }
    out.push_back(extract_record(e, cases[e.case_index]));
  }
  return out;
}

LabeledMatrix Dataset::labeled() const {
  LabeledMatrix out{Matrix(records.size(), kFeatureCount), {}};
  out.y.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto f = records[i].features();
    std::copy(f.begin(), f.end(), out.X.row(i).begin());
    out.y.push_back(records[i].kill);
  }
  return out;
}

Matrix Dataset::with_label() const {
  Matrix out(records.size(), kFeatureCount + 1);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto f = records[i].features();
    std::copy(f.begin(), f.end(), out.row(i).begin());
    out(i, kFeatureCount) = records[i].kill;
  }
  return out;
}

std::vector<std::string> feature_names() {
  return {kColumns.begin(), kColumns.begin() + kFeatureCount};
}

std::vector<std::string> column_names() { return {kColumns.begin(), kColumns.end()}; }

void write_dataset(const std::filesystem::path& path, const Dataset& ds) {
  csv::Table t;
  t.header = column_names();
  t.rows.reserve(ds.size());
  for (const auto& r : ds.records) {
    std::vector<std::string> row;
    row.reserve(kColumns.size());
    for (double v : r.features()) row.push_back(csv::format_exact(v));
    row.back() = std::to_string(r.aircraft_concept);
    row.push_back(std::to_string(r.kill));
    t.rows.push_back(std::move(row));
  }
  csv::write(path, t);
}

Dataset read_dataset(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  if (t.header != column_names()) {
    throw ParseError(path.string() + ": header does not match the dataset columns");
  }
  Dataset ds;
  ds.records.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    ShotRecord r;
    r.radar_track_range = csv::parse_double(row[0]);
    r.distance = csv::parse_double(row[1]);
    r.missile_act_dist = csv::parse_double(row[2]);
    r.delta_altitude = csv::parse_double(row[3]);
    r.delta_speed = csv::parse_double(row[4]);
    r.missile_range = csv::parse_double(row[5]);
    r.rcs = csv::parse_double(row[6]);
    r.firerange = csv::parse_double(row[7]);
    r.angle_uni_to_tgt = csv::parse_double(row[8]);
    r.delta_heading = csv::parse_double(row[9]);
    r.aircraft_concept = static_cast<int>(csv::parse_int(row[10]));
    r.kill = static_cast<int>(csv::parse_int(row[11]));
    if (r.kill != 0 && r.kill != 1) throw ParseError(path.string() + ": kill must be 0 or 1");
    ds.records.push_back(r);
  }
  return ds;
}

Split train_test_split(std::size_t n, double test_fraction, std::uint64_t seed) {
  if (n < 20) throw SizeError("train/test split needs at least 20 rows, got " + std::to_string(n));
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw SpecificationError("test fraction must lie in (0, 1)");
  }
  // Guard against 0.15 * 100 = 15.000000000000002 rounding up.
  const auto n_test = static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n) - 1e-9));
  CounterRng rng(seed);
  const auto perm = random_permutation(n, rng);
  Split s;
  s.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
  s.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
  std::sort(s.test.begin(), s.test.end());
  std::sort(s.train.begin(), s.train.end());
  return s;
}

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k == 0 || n < k) {
    throw SizeError(std::to_string(k) + "-fold split needs at least " + std::to_string(k) + " rows, got " +
                    std::to_string(n));
  }
  CounterRng rng(seed);
  const auto perm = random_permutation(n, rng);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                    perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
    std::sort(folds[f].begin(), folds[f].end());
    pos += size;
  }
  return folds;
}

ScalerParams fit_scaler(const Matrix& train) {
  if (train.empty()) throw SizeError("cannot fit a scaler on zero rows");
  const std::size_t d = train.cols();
  const double n = static_cast<double>(train.rows());
  ScalerParams p;
  p.mean.assign(d, 0.0);
  p.std.assign(d, 0.0);
  for (std::size_t r = 0; r < train.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) p.mean[c] += train(r, c);
  }
  for (auto& m : p.mean) m /= n;
  for (std::size_t r = 0; r < train.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double z = train(r, c) - p.mean[c];
      p.std[c] += z * z;
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    p.std[c] = std::sqrt(p.std[c] / n);
    if (!(p.std[c] > 0.0)) {
      p.std[c] = 1.0;
      p.constant_columns.push_back(c);
      log::warn("scaler: column " + std::to_string(c) + " has zero variance; using unit scale");
    }
  }
  return p;
}

void ScalerParams::apply_row(std::span<const double> x, std::span<double> out) const noexcept {
  for (std::size_t c = 0; c < x.size(); ++c) out[c] = (x[c] - mean[c]) / std[c];
}

Matrix ScalerParams::apply(const Matrix& X) const {
  if (X.cols() != mean.size()) throw DataError("scaler width does not match the matrix");
  Matrix out(X.rows(), X.cols());
  for (std::size_t r = 0; r < X.rows(); ++r) apply_row(X.row(r), out.row(r));
  return out;
}

Matrix ScalerParams::inverse(const Matrix& Z) const {
  if (Z.cols() != mean.size()) throw DataError("scaler width does not match the matrix");
  Matrix out(Z.rows(), Z.cols());
  for (std::size_t r = 0; r < Z.rows(); ++r) {
    for (std::size_t c = 0; c < Z.cols(); ++c) out(r, c) = Z(r, c) * std[c] + mean[c];
  }
  return out;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw SizeError("quantile of an empty column");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<ColumnSummary> describe(const Matrix& X, std::span<const std::string> names) {
  if (X.empty()) throw SizeError("describe needs at least one row");
  std::vector<ColumnSummary> out;
  for (std::size_t c = 0; c < X.cols(); ++c) {
    auto col = X.column(c);
    std::sort(col.begin(), col.end());
    ColumnSummary s;
    s.name = c < names.size() ? names[c] : "x" + std::to_string(c);
    s.mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
    double ss = 0.0;
    for (double v : col) ss += (v - s.mean) * (v - s.mean);
    s.std = col.size() > 1 ? std::sqrt(ss / static_cast<double>(col.size() - 1)) : 0.0;
    s.min = col.front();
    s.q25 = quantile_sorted(col, 0.25);
    s.median = quantile_sorted(col, 0.5);
    s.q75 = quantile_sorted(col, 0.75);
    s.max = col.back();
    out.push_back(s);
  }
  return out;
}

Correlation pearson_matrix(const Matrix& X) {
  const std::size_t d = X.cols();
  const std::size_t n = X.rows();
  if (n < 2) throw SizeError("correlation needs at least two rows");
  Matrix centered(n, d);
  std::vector<double> norm2(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += X(r, c);
    mean /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
      centered(r, c) = X(r, c) - mean;
      norm2[c] += centered(r, c) * centered(r, c);
    }
  }
  Correlation out{Matrix(d, d), {}};
  for (std::size_t c = 0; c < d; ++c) {
    if (!(norm2[c] > 0.0)) {
      out.constant_columns.push_back(c);
      log::warn("correlation: column " + std::to_string(c) + " is constant; its correlations are reported as 0");
    }
  }
  auto constant = [&](std::size_t c) { return !(norm2[c] > 0.0); };
  for (std::size_t a = 0; a < d; ++a) {
    out.r(a, a) = 1.0;
    for (std::size_t b = a + 1; b < d; ++b) {
      double v = 0.0;
      if (!constant(a) && !constant(b)) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += centered(r, a) * centered(r, b);
        v = std::clamp(s / std::sqrt(norm2[a] * norm2[b]), -1.0, 1.0);
      }
      out.r(a, b) = v;
      out.r(b, a) = v;
    }
  }
  return out;
}

std::vector<int> equal_frequency_bins(std::span<const double> column, int bins) {
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> edges;
  for (int i = 1; i < bins; ++i) edges.push_back(quantile_sorted(sorted, static_cast<double>(i) / bins));
  std::vector<int> out;
  out.reserve(column.size());
  for (double v : column) {
    // Values equal to an edge go to the upper bin, so tied values share a bin.
    out.push_back(static_cast<int>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin()));
  }
  return out;
}

std::vector<MutualInfo> mutual_info_rank(const Matrix& X, std::span<const int> y,
                                         std::span<const std::string> names, int bins) {
  if (X.rows() < 50) throw SizeError("mutual information ranking needs at least 50 rows");
  if (y.size() != X.rows()) throw DataError("label count does not match the feature rows");
  const double n = static_cast<double>(X.rows());
  std::vector<MutualInfo> out;
  for (std::size_t c = 0; c < X.cols(); ++c) {
    const auto col = X.column(c);
    const auto b = equal_frequency_bins(col, bins);
    std::vector<double> joint(static_cast<std::size_t>(bins) * 2, 0.0);
    std::vector<double> pb(static_cast<std::size_t>(bins), 0.0);
    double py[2] = {0.0, 0.0};
    for (std::size_t r = 0; r < col.size(); ++r) {
      const int label = y[r] != 0 ? 1 : 0;
      joint[static_cast<std::size_t>(b[r]) * 2 + static_cast<std::size_t>(label)] += 1.0;
      pb[static_cast<std::size_t>(b[r])] += 1.0;
      py[label] += 1.0;
    }
    double mi = 0.0;
    for (int i = 0; i < bins; ++i) {
      for (int l = 0; l < 2; ++l) {
        const double nij = joint[static_cast<std::size_t>(i) * 2 + static_cast<std::size_t>(l)];
        if (nij == 0.0) continue;
        mi += nij / n * std::log(nij * n / (pb[static_cast<std::size_t>(i)] * py[l]));
      }
    }
    out.push_back({c, c < names.size() ? names[c] : "x" + std::to_string(c), std::max(mi, 0.0)});
  }
  std::stable_sort(out.begin(), out.end(), [](const MutualInfo& a, const MutualInfo& b) { return a.nats > b.nats; });
  return out;
}

ClassBalance class_balance(std::span<const int> y) {
  if (y.empty()) throw SizeError("class balance of an empty label set");
  ClassBalance b;
  for (int v : y) (v != 0 ? b.positives : b.negatives)++;
  b.minority_fraction =
      static_cast<double>(std::min(b.positives, b.negatives)) / static_cast<double>(y.size());
  b.single_class = b.positives == 0 || b.negatives == 0;
  if (b.single_class) log::warn("class balance: only one class is present");
  return b;
}

}  // namespace shotlab::dataset
