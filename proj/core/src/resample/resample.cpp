#include "shotlab/resample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shotlab/error.hpp"
#include "shotlab/rng.hpp"

namespace shotlab::resample {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct Token {
  Strategy strategy;
  std::string_view name;
};

constexpr Token kTokens[] = {
    {Strategy::None, "none"},         {Strategy::Smote, "smote"},
    {Strategy::Adasyn, "adasyn"},     {Strategy::Tomek, "tomek"},
    {Strategy::Enn, "enn"},           {Strategy::SmoteTomek, "smote-tomek"},
    {Strategy::SmoteEnn, "smote-enn"},
};

struct ClassCounts {
  std::size_t zeros = 0;
  std::size_t ones = 0;
};

ClassCounts count_classes(std::span<const int> y) {
  ClassCounts c;
  for (int v : y) (v != 0 ? c.ones : c.zeros)++;
  return c;
}

void require_both_classes(std::span<const int> y, std::string_view who) {
  const auto c = count_classes(y);
  if (c.zeros == 0 || c.ones == 0) throw StrategyError(std::string(who) + " needs both classes present");
}

/// Drops output rows flagged in `drop` from a previous outcome.
ResampleOutcome drop_rows(ResampleOutcome in, const std::vector<bool>& drop, bool both_classes) {
  ResampleOutcome out;
  out.cleaned_both_classes = both_classes || in.cleaned_both_classes;
  out.removed_rows = std::move(in.removed_rows);
  std::vector<std::size_t> keep;
  const std::size_t n_orig = in.retained.size();
  for (std::size_t r = 0; r < in.data.size(); ++r) {
    if (!drop[r]) {
      keep.push_back(r);
      if (r < n_orig) out.retained.push_back(in.retained[r]);
    } else if (r < n_orig) {
      out.removed_rows.push_back(in.retained[r]);
    }
  }
  out.data = in.data.subset(keep);
  for (std::size_t i = 0; i < in.synthetic_rows.size(); ++i) {
    const std::size_t r = in.synthetic_rows[i];
    if (drop[r]) continue;
    const auto pos = static_cast<std::size_t>(std::lower_bound(keep.begin(), keep.end(), r) - keep.begin());
    out.synthetic_rows.push_back(pos);
    out.synthetic_origin.push_back(in.synthetic_origin[i]);
  }
  std::sort(out.removed_rows.begin(), out.removed_rows.end());
  return out;
}

void append_synthetic(ResampleOutcome& out, const LabeledMatrix& data, int label, const SyntheticOrigin& o) {
  const auto base = data.X.row(o.base);
  const auto nb = data.X.row(o.neighbor);
  std::vector<double> row(base.size());
  for (std::size_t c = 0; c < row.size(); ++c) row[c] = base[c] + o.u * (nb[c] - base[c]);
  out.synthetic_rows.push_back(out.data.size());
  out.synthetic_origin.push_back(o);
  out.data.X.append_row(row);
  out.data.y.push_back(label);
}

std::vector<std::size_t> indices_of(std::span<const int> y, int label) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if ((y[i] != 0 ? 1 : 0) == label) out.push_back(i);
  }
  return out;
}

ResampleOutcome enn_impl(const LabeledMatrix& data, std::size_t k, bool both_classes) {
  if (data.size() <= k) {
    throw SizeError("edited nearest neighbors with k=" + std::to_string(k) + " needs more than " +
                    std::to_string(k) + " rows");
  }
  const int minority = minority_label(data.y);
  std::vector<bool> drop(data.size(), false);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int label = data.y[i] != 0 ? 1 : 0;
    if (!both_classes && label == minority) continue;
    std::size_t disagree = 0;
    for (auto j : knn_query(data.X, i, k, true)) disagree += (data.y[j] != 0 ? 1 : 0) != label ? 1 : 0;
    drop[i] = 2 * disagree > k;
  }
  return drop_rows(identity(data), drop, both_classes);
}

}  // namespace

Strategy parse_strategy(std::string_view token) {
  for (const auto& t : kTokens) {
    if (t.name == token) return t.strategy;
  }
  throw ConfigError("unknown resampler '" + std::string(token) +
                    "' (expected none|smote|adasyn|tomek|enn|smote-tomek|smote-enn)");
}

std::string_view to_string(Strategy s) noexcept {
  for (const auto& t : kTokens) {
    if (t.strategy == s) return t.name;
  }
  return "none";
}

const std::vector<Strategy>& all_strategies() {
  static const std::vector<Strategy> all{Strategy::None, Strategy::Smote,      Strategy::Adasyn,  Strategy::Tomek,
                                         Strategy::Enn,  Strategy::SmoteTomek, Strategy::SmoteEnn};
  return all;
}

std::vector<std::size_t> knn_among(const Matrix& X, std::span<const double> query,
                                   std::span<const std::size_t> candidates, std::size_t k, std::size_t exclude) {
  std::vector<std::pair<double, std::size_t>> d;
  d.reserve(candidates.size());
  for (auto i : candidates) {
    if (i == exclude) continue;
    d.emplace_back(squared_distance(X.row(i), query), i);
  }
  if (k > d.size()) {
    throw SizeError("requested " + std::to_string(k) + " neighbors from " + std::to_string(d.size()) +
                    " candidates");
  }
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = d[i].second;
  return out;
}

std::vector<std::size_t> knn_query(const Matrix& X, std::span<const double> query, std::size_t k) {
  if (k > X.rows()) {
    throw SizeError("k=" + std::to_string(k) + " exceeds the " + std::to_string(X.rows()) + " available rows");
  }
  std::vector<std::pair<double, std::size_t>> d(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) d[i] = {squared_distance(X.row(i), query), i};
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = d[i].second;
  return out;
}

std::vector<std::size_t> knn_query(const Matrix& X, std::size_t row, std::size_t k, bool exclude_self) {
  if (k >= X.rows()) {
    throw SizeError("k=" + std::to_string(k) + " must be smaller than the " + std::to_string(X.rows()) +
                    " rows");
  }
  const std::size_t skip = exclude_self ? row : kNone;
  std::vector<std::pair<double, std::size_t>> d;
  d.reserve(X.rows());
  const auto q = X.row(row);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    if (i != skip) d.emplace_back(squared_distance(X.row(i), q), i);
  }
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = d[i].second;
  return out;
}

int minority_label(std::span<const int> y) {
  const auto c = count_classes(y);
  return c.ones <= c.zeros ? 1 : 0;
}

ResampleOutcome identity(const LabeledMatrix& data) {
  ResampleOutcome out;
  out.data = data;
  out.retained.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out.retained[i] = i;
  return out;
}

ResampleOutcome smote(const LabeledMatrix& data, std::size_t k, std::uint64_t seed) {
  require_both_classes(data.y, "SMOTE");
  const int label = minority_label(data.y);
  const auto minority = indices_of(data.y, label);
  const std::size_t m = minority.size();
  const std::size_t g = data.size() - 2 * m;
  if (m < k + 1) {
    throw StrategyError("SMOTE with k=" + std::to_string(k) + " needs at least " + std::to_string(k + 1) +
                        " minority rows, got " + std::to_string(m));
  }
  ResampleOutcome out = identity(data);
  if (g == 0) return out;
  std::vector<std::vector<std::size_t>> nn(m);
  for (std::size_t i = 0; i < m; ++i) nn[i] = knn_among(data.X, data.X.row(minority[i]), minority, k, minority[i]);
  CounterRng rng(seed);
  for (std::size_t s = 0; s < g; ++s) {
    const std::size_t i = s % m;
    SyntheticOrigin o;
    o.base = minority[i];
    o.neighbor = nn[i][rng.below(k)];
    o.u = rng.uniform();
    append_synthetic(out, data, label, o);
  }
  return out;
}

AdasynAllocation adasyn_allocation(const LabeledMatrix& data, std::size_t k) {
  require_both_classes(data.y, "ADASYN");
  const int label = minority_label(data.y);
  AdasynAllocation a;
  a.minority = indices_of(data.y, label);
  const std::size_t m = a.minority.size();
  if (m < k + 1) {
    throw StrategyError("ADASYN with k=" + std::to_string(k) + " needs at least " + std::to_string(k + 1) +
                        " minority rows, got " + std::to_string(m));
  }
  a.target = data.size() - 2 * m;
  double total = 0.0;
  for (auto i : a.minority) {
    std::size_t majority = 0;
    for (auto j : knn_query(data.X, i, k, true)) majority += (data.y[j] != 0 ? 1 : 0) != label ? 1 : 0;
    a.ratio.push_back(static_cast<double>(majority) / static_cast<double>(k));
    total += a.ratio.back();
  }
  if (total == 0.0) {
    throw StrategyError("ADASYN found no minority row with a majority neighbor; the classes do not overlap");
  }
  for (double r : a.ratio) {
    a.weight.push_back(r / total);
    a.count.push_back(static_cast<std::size_t>(std::llround(a.weight.back() * static_cast<double>(a.target))));
  }
  return a;
}

ResampleOutcome adasyn(const LabeledMatrix& data, std::size_t k, std::uint64_t seed) {
  const auto a = adasyn_allocation(data, k);
  const int label = minority_label(data.y);
  ResampleOutcome out = identity(data);
  CounterRng rng(seed);
  for (std::size_t i = 0; i < a.minority.size(); ++i) {
    if (a.count[i] == 0) continue;
    const auto nn = knn_among(data.X, data.X.row(a.minority[i]), a.minority, k, a.minority[i]);
    for (std::size_t s = 0; s < a.count[i]; ++s) {
      SyntheticOrigin o;
      o.base = a.minority[i];
      o.neighbor = nn[rng.below(k)];
      o.u = rng.uniform();
      append_synthetic(out, data, label, o);
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> tomek_links(const LabeledMatrix& data) {
  std::vector<std::pair<std::size_t, std::size_t>> links;
  if (data.size() < 2) return links;
  std::vector<std::size_t> nn(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) nn[i] = knn_query(data.X, i, 1, true)[0];
  for (std::size_t a = 0; a < data.size(); ++a) {
    const std::size_t b = nn[a];
    if (a < b && nn[b] == a && (data.y[a] != 0) != (data.y[b] != 0)) links.emplace_back(a, b);
  }
  return links;
}

ResampleOutcome tomek_clean(const LabeledMatrix& data) {
  const int minority = minority_label(data.y);
  std::vector<bool> drop(data.size(), false);
  for (const auto& [a, b] : tomek_links(data)) {
    drop[(data.y[a] != 0 ? 1 : 0) == minority ? b : a] = true;
  }
  return drop_rows(identity(data), drop, false);
}

ResampleOutcome enn_edit(const LabeledMatrix& data, std::size_t k) { return enn_impl(data, k, false); }

ResampleOutcome enn_edit_all(const LabeledMatrix& data, std::size_t k) { return enn_impl(data, k, true); }

ResampleOutcome smote_tomek(const LabeledMatrix& data, std::uint64_t seed, const Params& params) {
  ResampleOutcome out = smote(data, params.k_smote, seed);
  for (;;) {
    const auto links = tomek_links(out.data);
    if (links.empty()) break;
    std::vector<bool> drop(out.data.size(), false);
    for (const auto& [a, b] : links) drop[a] = drop[b] = true;
    out = drop_rows(std::move(out), drop, true);
  }
  return out;
}

ResampleOutcome smote_enn(const LabeledMatrix& data, std::uint64_t seed, const Params& params) {
  ResampleOutcome out = smote(data, params.k_smote, seed);
  const auto edited = enn_edit_all(out.data, params.k_enn);
  std::vector<bool> drop(out.data.size(), true);
  for (auto r : edited.retained) drop[r] = false;
  return drop_rows(std::move(out), drop, true);
}

ResampleOutcome apply(Strategy s, const LabeledMatrix& data, std::uint64_t seed, const Params& params) {
  switch (s) {
    case Strategy::None: return identity(data);
    case Strategy::Smote: return smote(data, params.k_smote, seed);
    case Strategy::Adasyn: return adasyn(data, params.k_adasyn, seed);
    case Strategy::Tomek: return tomek_clean(data);
    case Strategy::Enn: return enn_edit(data, params.k_enn);
    case Strategy::SmoteTomek: return smote_tomek(data, seed, params);
    case Strategy::SmoteEnn: return smote_enn(data, seed, params);
  }
  throw StrategyError("unhandled resampling strategy");
}

}  // namespace shotlab::resample
