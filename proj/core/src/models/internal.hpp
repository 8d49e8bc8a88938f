#pragma once

#include <cmath>
#include <string>

#include "shotlab/error.hpp"
#include "shotlab/matrix.hpp"

namespace shotlab::models::detail {

inline void require_fit_data(const LabeledMatrix& data, const std::string& who) {
  if (data.size() == 0) throw DataError(who + ": empty training set");
  if (data.X.rows() != data.y.size()) throw DataError(who + ": feature rows and labels differ in length");
  for (double v : data.X.data()) {
    if (!std::isfinite(v)) throw DataError(who + ": non-finite feature value");
  }
  for (int v : data.y) {
    if (v != 0 && v != 1) throw DataError(who + ": labels must be 0 or 1");
  }
}

inline bool has_both_classes(const LabeledMatrix& data) {
  bool zero = false;
  bool one = false;
  for (int v : data.y) (v ? one : zero) = true;
  return zero && one;
}

inline double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// log(1 + exp(z)) without overflow.
inline double softplus(double z) noexcept { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace shotlab::models::detail
