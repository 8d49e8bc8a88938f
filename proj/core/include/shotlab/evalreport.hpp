#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shotlab/matrix.hpp"
#include "shotlab/metrics.hpp"

namespace shotlab::evalreport {

struct MetricsRow {
  std::string model;      // model family token, e.g. "rf"
  std::string resampler;  // resampler token, e.g. "smote"
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double inference_time_ms = 0.0;
  bool zero_division = false;
};

MetricsRow make_row(std::string model, std::string resampler, const metrics::ConfusionCounts& c,
                    double inference_time_ms);

/// Median wall-clock milliseconds of `repeats` calls after one warm-up call.
double measure_inference_time_ms(const std::function<void()>& predict_all, int repeats = 5);

/// Report label such as "RF + SMOTE" or "XGBoost".
std::string row_label(const MetricsRow& row);

/// Rows sorted model-major (LR, KNN, SVM, ANN, NB, RF, XGBoost) and then by
/// resampler (none, SMOTE, ADASYN, TL, ENN, SMOTE-TL, SMOTE-ENN).
std::vector<MetricsRow> table_order(std::vector<MetricsRow> rows);

/// 100 * (value / baseline - 1); empty when the baseline is 0.
std::optional<double> relative_change_pct(double baseline, double value);

struct Highlights {
  std::size_t best_overall = 0;                // index of the highest F1
  std::optional<std::size_t> best_baseline;    // highest F1 among no-resampler rows
  std::vector<std::optional<double>> f1_change;  // vs the same model's no-resampler row
};

/// Computed over rows already in table order.
Highlights highlight(std::span<const MetricsRow> rows);

/// Writes results.csv (no timing column, so identical inputs give identical
/// bytes), timings.csv and results.md into `dir`. Returns the written paths.
std::vector<std::filesystem::path> render_report(const std::filesystem::path& dir, std::vector<MetricsRow> rows);

std::string results_csv(std::span<const MetricsRow> ordered);
std::string results_markdown(std::span<const MetricsRow> ordered);

/// Parses results.csv back into rows (inference time is not part of it).
std::vector<MetricsRow> parse_results_csv(const std::filesystem::path& path);

/// Annotated diverging heatmap over [-1, 1]. Throws DataError for a
/// non-square matrix or a label count that does not match.
std::string correlation_svg(const Matrix& r, std::span<const std::string> names);
void write_correlation_svg(const std::filesystem::path& path, const Matrix& r, std::span<const std::string> names);

/// Fill color for a correlation value, as "#rrggbb".
std::string diverging_color(double value);

}  // namespace shotlab::evalreport
