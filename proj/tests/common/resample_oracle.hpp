#pragma once

// Literal, quadratic re-implementations of the resampling definitions. They
// share nothing with the library except the matrix type and the generator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "shotlab/matrix.hpp"
#include "shotlab/rng.hpp"

namespace oracle {

using shotlab::LabeledMatrix;
using shotlab::Matrix;

inline double dist2(const Matrix& X, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t c = 0; c < X.cols(); ++c) {
    const double d = X(a, c) - X(b, c);
    s += d * d;
  }
  return s;
}

/// Every candidate except `self`, fully sorted by (distance, index).
inline std::vector<std::size_t> ranked(const Matrix& X, std::size_t self, const std::vector<std::size_t>& candidates) {
  std::vector<std::size_t> out;
  for (auto c : candidates) {
    if (c != self) out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    const double da = dist2(X, self, a), db = dist2(X, self, b);
    return da != db ? da < db : a < b;
  });
  return out;
}

inline std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

inline int minority(const std::vector<int>& y) {
  std::size_t ones = 0;
  for (int v : y) ones += v != 0;
  return ones <= y.size() - ones ? 1 : 0;
}

inline std::vector<std::size_t> members(const std::vector<int>& y, int label) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if ((y[i] != 0 ? 1 : 0) == label) out.push_back(i);
  }
  return out;
}

struct Result {
  LabeledMatrix data;
  bool failed = false;
};

inline void push_interpolated(LabeledMatrix& out, const Matrix& X, std::size_t base, std::size_t nb, double u,
                              int label) {
  std::vector<double> row(X.cols());
  for (std::size_t c = 0; c < X.cols(); ++c) row[c] = X(base, c) + u * (X(nb, c) - X(base, c));
  out.X.append_row(row);
  out.y.push_back(label);
}

inline Result smote(const LabeledMatrix& d, std::size_t k, std::uint64_t seed) {
  const int label = minority(d.y);
  const auto mins = members(d.y, label);
  Result r{d, false};
  if (mins.size() < k + 1 || mins.size() == d.size()) return {{}, true};
  const std::size_t g = d.size() - 2 * mins.size();
  shotlab::CounterRng rng(seed);
  for (std::size_t s = 0; s < g; ++s) {
    const auto base = mins[s % mins.size()];
    const auto nn = ranked(d.X, base, mins);
    const auto pick = nn[rng.below(k)];
    const double u = rng.uniform();
    push_interpolated(r.data, d.X, base, pick, u, label);
  }
  return r;
}

/// Majority-neighbor ratio of each minority row over the whole set.
inline std::vector<double> adasyn_ratio(const LabeledMatrix& d, std::size_t k) {
  const int label = minority(d.y);
  std::vector<double> r;
  for (auto i : members(d.y, label)) {
    const auto nn = ranked(d.X, i, all_rows(d.size()));
    std::size_t maj = 0;
    for (std::size_t j = 0; j < k; ++j) maj += (d.y[nn[j]] != 0 ? 1 : 0) != label;
    r.push_back(static_cast<double>(maj) / static_cast<double>(k));
  }
  return r;
}

inline Result adasyn(const LabeledMatrix& d, std::size_t k, std::uint64_t seed) {
  const int label = minority(d.y);
  const auto mins = members(d.y, label);
  if (mins.size() < k + 1 || mins.size() == d.size()) return {{}, true};
  const auto r = adasyn_ratio(d, k);
  double total = 0.0;
  for (double v : r) total += v;
  if (total == 0.0) return {{}, true};
  const double G = static_cast<double>(d.size() - 2 * mins.size());
  Result out{d, false};
  shotlab::CounterRng rng(seed);
  for (std::size_t i = 0; i < mins.size(); ++i) {
    const auto g = static_cast<std::size_t>(std::llround(r[i] / total * G));
    const auto nn = ranked(d.X, mins[i], mins);
    for (std::size_t s = 0; s < g; ++s) {
      const auto pick = nn[rng.below(k)];
      const double u = rng.uniform();
      push_interpolated(out.data, d.X, mins[i], pick, u, label);
    }
  }
  return out;
}

/// b is the nearest neighbor of a (ties to the lower index).
inline bool is_nn(const Matrix& X, std::size_t a, std::size_t b) {
  for (std::size_t c = 0; c < X.rows(); ++c) {
    if (c == a || c == b) continue;
    const double dab = dist2(X, a, b), dac = dist2(X, a, c);
    if (dac < dab || (dac == dab && c < b)) return false;
  }
  return true;
}

inline std::vector<std::pair<std::size_t, std::size_t>> tomek_links(const LabeledMatrix& d) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < d.size(); ++a) {
    for (std::size_t b = a + 1; b < d.size(); ++b) {
      if ((d.y[a] != 0) != (d.y[b] != 0) && is_nn(d.X, a, b) && is_nn(d.X, b, a)) out.emplace_back(a, b);
    }
  }
  return out;
}

inline std::set<std::size_t> tomek_removed(const LabeledMatrix& d) {
  const int label = minority(d.y);
  std::set<std::size_t> out;
  for (auto [a, b] : tomek_links(d)) out.insert((d.y[a] != 0 ? 1 : 0) == label ? b : a);
  return out;
}

/// Rows whose k-neighbor majority vote disagrees with their label.
inline std::set<std::size_t> enn_removed(const LabeledMatrix& d, std::size_t k, bool both_classes) {
  const int label = minority(d.y);
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const int yi = d.y[i] != 0 ? 1 : 0;
    if (!both_classes && yi == label) continue;
    const auto nn = ranked(d.X, i, all_rows(d.size()));
    std::size_t other = 0;
    for (std::size_t j = 0; j < k; ++j) other += (d.y[nn[j]] != 0 ? 1 : 0) != yi;
    if (other * 2 > k) out.insert(i);
  }
  return out;
}

inline LabeledMatrix without(const LabeledMatrix& d, const std::set<std::size_t>& drop) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!drop.count(i)) keep.push_back(i);
  }
  return d.subset(keep);
}

inline Result smote_tomek(const LabeledMatrix& d, std::size_t k, std::uint64_t seed) {
  auto r = smote(d, k, seed);
  if (r.failed) return r;
  for (;;) {
    const auto links = tomek_links(r.data);
    if (links.empty()) break;
    std::set<std::size_t> drop;
    for (auto [a, b] : links) {
      drop.insert(a);
      drop.insert(b);
    }
    r.data = without(r.data, drop);
  }
  return r;
}

inline Result smote_enn(const LabeledMatrix& d, std::size_t k, std::size_t k_enn, std::uint64_t seed) {
  auto r = smote(d, k, seed);
  if (r.failed) return r;
  r.data = without(r.data, enn_removed(r.data, k_enn, true));
  return r;
}

/// Random 2-D set of 8 to 12 points on a coarse grid (so ties and
/// duplicates occur) with a minority of at least `min_minority` rows.
inline LabeledMatrix small_set(std::uint64_t seed, std::size_t min_minority) {
  shotlab::CounterRng rng(seed * 7919 + 13);
  const std::size_t n = 8 + rng.below(5);
  const std::size_t max_minority = (n - 1) / 2;
  const std::size_t m = min_minority + rng.below(max_minority - min_minority + 1);
  LabeledMatrix d{Matrix(n, 2), std::vector<int>(n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    d.X(i, 0) = 0.25 * static_cast<double>(rng.below(16));
    d.X(i, 1) = 0.25 * static_cast<double>(rng.below(16));
  }
  std::vector<std::size_t> idx = all_rows(n);
  shotlab::shuffle(std::span<std::size_t>(idx), rng);
  for (std::size_t i = 0; i < m; ++i) d.y[idx[i]] = 1;
  return d;
}

/// Largest distance from `p` to the line through a and b, and the segment
/// parameter of its projection.
inline std::pair<double, double> segment_fit(std::span<const double> p, std::span<const double> a,
                                             std::span<const double> b) {
  double ab2 = 0.0, t = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    ab2 += (b[c] - a[c]) * (b[c] - a[c]);
    t += (p[c] - a[c]) * (b[c] - a[c]);
  }
  t = ab2 > 0.0 ? t / ab2 : 0.0;
  double resid = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) resid = std::max(resid, std::abs(a[c] + t * (b[c] - a[c]) - p[c]));
  return {resid, t};
}

inline bool same(const LabeledMatrix& a, const LabeledMatrix& b) { return a.X == b.X && a.y == b.y; }

}  // namespace oracle
