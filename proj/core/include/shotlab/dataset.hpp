#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shotlab/doe.hpp"
#include "shotlab/matrix.hpp"
#include "shotlab/sim.hpp"

namespace shotlab::dataset {

inline constexpr std::size_t kFeatureCount = 11;

/// dataset.csv header: the eleven features followed by the label.
inline constexpr std::array<std::string_view, kFeatureCount + 1> kColumns{
    "radar_track_range", "distance",         "missile_act_dist", "delta_altitude",
    "delta_speed",       "missile_range",    "rcs",              "firerange",
    "angle_uni_to_tgt",  "delta_heading",    "concept",          "kill"};

inline constexpr double kKnotsPerMps = 1.943844;

/// One blue missile launch in model units.
struct ShotRecord {
  double radar_track_range = 0.0;  // m
  double distance = 0.0;           // m
  double missile_act_dist = 0.0;   // m
  double delta_altitude = 0.0;     // m, shooter - target
  double delta_speed = 0.0;        // kt, shooter - target
  double missile_range = 1.0;      // factor
  double rcs = 0.0;                // dBm^2
  double firerange = 0.0;          // percent of Rmax
  double angle_uni_to_tgt = 0.0;   // deg, signed off-boresight
  double delta_heading = 0.0;      // deg in [0, 360)
  int aircraft_concept = 1;
  int kill = 0;

  std::array<double, kFeatureCount> features() const noexcept;
  friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

/// Throws SequencingError for an unresolved outcome.
ShotRecord extract_record(const sim::ShotEvent& event, const doe::SimCase& scenario);

/// Blue shots of `events`, each decoded against cases[event.case_index].
std::vector<ShotRecord> build_records(std::span<const sim::ShotEvent> events,
                                      std::span<const doe::SimCase> cases);

struct Dataset {
  std::vector<ShotRecord> records;

  std::size_t size() const noexcept { return records.size(); }
  /// Features only, labels alongside.
  LabeledMatrix labeled() const;
  /// All twelve columns, label last.
  Matrix with_label() const;
};

void write_dataset(const std::filesystem::path& path, const Dataset& ds);
Dataset read_dataset(const std::filesystem::path& path);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Random partition with ceil(test_fraction * n) test rows. Both index lists
/// are ascending. Throws SizeError when n < 20.
Split train_test_split(std::size_t n, double test_fraction, std::uint64_t seed);

/// k disjoint ascending folds covering [0, n); the first n % k folds hold one
/// extra index. Throws SizeError when n < k.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed);

struct ScalerParams {
  std::vector<double> mean;
  std::vector<double> std;  // population convention
  std::vector<std::size_t> constant_columns;

  Matrix apply(const Matrix& X) const;
  Matrix inverse(const Matrix& Z) const;
  void apply_row(std::span<const double> x, std::span<double> out) const noexcept;
};

/// Z-score parameters. A zero-variance column gets std 1 and a warning.
ScalerParams fit_scaler(const Matrix& train);

struct ColumnSummary {
  std::string name;
  double mean = 0.0;
  double std = 0.0;  // sample convention
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
};

/// Quantile by linear interpolation between order statistics of `sorted`.
double quantile_sorted(std::span<const double> sorted, double p);

std::vector<ColumnSummary> describe(const Matrix& X, std::span<const std::string> names);

struct Correlation {
  Matrix r;
  std::vector<std::size_t> constant_columns;
};

/// Pearson matrix over the columns of X. Entries involving a constant column
/// are 0 off the diagonal. The diagonal is exactly 1 and the matrix is
/// exactly symmetric.
Correlation pearson_matrix(const Matrix& X);

struct MutualInfo {
  std::size_t column = 0;
  std::string name;
  double nats = 0.0;
};

/// Each feature is cut into `bins` equal-frequency bins; mutual information
/// with the binary label in nats. Descending, ties by column order. Throws
/// SizeError below 50 rows.
std::vector<MutualInfo> mutual_info_rank(const Matrix& X, std::span<const int> y,
                                         std::span<const std::string> names, int bins = 10);

/// Bin index of every value of `column` under equal-frequency binning.
std::vector<int> equal_frequency_bins(std::span<const double> column, int bins);

struct ClassBalance {
  std::size_t negatives = 0;
  std::size_t positives = 0;
  double minority_fraction = 0.0;
  bool single_class = false;
};

ClassBalance class_balance(std::span<const int> y);

std::vector<std::string> feature_names();
std::vector<std::string> column_names();

/// eda_report.md, eda_stats.csv and correlation.csv under `out_dir`.
/// Returns the written paths.
std::vector<std::filesystem::path> write_eda(const std::filesystem::path& out_dir, const Dataset& ds);

}  // namespace shotlab::dataset
