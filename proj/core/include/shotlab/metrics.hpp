#pragma once

#include <cstddef>
#include <span>

namespace shotlab::metrics {

/// Positive class is KILL (label 1).
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Throws DataError on length mismatch or a label outside {0, 1}.
ConfusionCounts confusion_counts(std::span<const int> y_true, std::span<const int> y_pred);

struct Scores {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Set when precision, recall or F1 had a zero denominator and was
  /// reported as 0.
  bool zero_division = false;
};

/// Throws DataError for empty counts.
Scores from_confusion(const ConfusionCounts& c);

/// Harmonic mean of precision and recall, 0 when both are 0.
double f1_from(double precision, double recall) noexcept;

}  // namespace shotlab::metrics
