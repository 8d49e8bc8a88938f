#include "shotlab/metrics.hpp"

#include <string>

#include "shotlab/error.hpp"

namespace shotlab::metrics {

ConfusionCounts confusion_counts(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw DataError("confusion counts: " + std::to_string(y_true.size()) + " labels but " +
                    std::to_string(y_pred.size()) + " predictions");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) throw DataError("confusion counts: labels must be 0 or 1");
    if (t == 1) {
      (p == 1 ? c.tp : c.fn)++;
    } else {
      (p == 1 ? c.fp : c.tn)++;
    }
  }
  return c;
}

double f1_from(double precision, double recall) noexcept {
  const double s = precision + recall;
  return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

Scores from_confusion(const ConfusionCounts& c) {
  if (c.total() == 0) throw DataError("metrics of an empty confusion matrix");
  Scores s;
  s.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (c.tp + c.fp > 0) {
    s.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  } else {
    s.zero_division = true;
  }
  if (c.tp + c.fn > 0) {
    s.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  } else {
    s.zero_division = true;
  }
  if (s.precision + s.recall > 0.0) {
    s.f1 = 2.0 * static_cast<double>(c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
  } else {
    s.zero_division = true;
  }
  return s;
}

}  // namespace shotlab::metrics
