#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "shotlab/matrix.hpp"

namespace shotlab::resample {

enum class Strategy { None, Smote, Adasyn, Tomek, Enn, SmoteTomek, SmoteEnn };

/// Tokens: none, smote, adasyn, tomek, enn, smote-tomek, smote-enn.
Strategy parse_strategy(std::string_view token);
std::string_view to_string(Strategy s) noexcept;
const std::vector<Strategy>& all_strategies();

/// The k nearest rows of X to `query` by Euclidean distance, nearest first,
/// equal distances by lower index. Throws SizeError when k exceeds the
/// number of candidate rows.
std::vector<std::size_t> knn_query(const Matrix& X, std::span<const double> query, std::size_t k);

/// Neighbors of row `row` of X. With exclude_self the row itself is skipped
/// (other rows at distance 0 are still candidates). Throws SizeError when
/// k >= rows.
std::vector<std::size_t> knn_query(const Matrix& X, std::size_t row, std::size_t k, bool exclude_self);

/// Neighbors of X.row(row) restricted to `candidates` (indices into X).
std::vector<std::size_t> knn_among(const Matrix& X, std::span<const double> query,
                                   std::span<const std::size_t> candidates, std::size_t k,
                                   std::size_t exclude = static_cast<std::size_t>(-1));

/// How a synthetic row was made: base + u * (neighbor - base), indices into
/// the input matrix.
struct SyntheticOrigin {
  std::size_t base = 0;
  std::size_t neighbor = 0;
  double u = 0.0;
};

struct ResampleOutcome {
  /// Retained input rows in input order, then retained synthetic rows.
  LabeledMatrix data;
  /// Input index of each retained original row, aligned with the first
  /// retained.size() rows of data.
  std::vector<std::size_t> retained;
  /// Output indices of synthetic rows.
  std::vector<std::size_t> synthetic_rows;
  /// Provenance of each synthetic row, aligned with synthetic_rows.
  std::vector<SyntheticOrigin> synthetic_origin;
  /// Input indices removed by a cleaning step, ascending.
  std::vector<std::size_t> removed_rows;
  /// True when cleaning edited both classes.
  bool cleaned_both_classes = false;
};

struct Params {
  std::size_t k_smote = 5;
  std::size_t k_adasyn = 5;
  std::size_t k_enn = 3;
};

/// Minority label (1 when tied).
int minority_label(std::span<const int> y);

ResampleOutcome identity(const LabeledMatrix& data);

/// Oversamples the minority class to exact balance. Base rows cycle over the
/// minority rows in index order; per synthetic row the generator draws the
/// neighbor slot and then u in [0, 1).
ResampleOutcome smote(const LabeledMatrix& data, std::size_t k, std::uint64_t seed);

/// Adaptive oversampling weighted by the share of majority rows among each
/// minority row's k neighbors over the whole set.
ResampleOutcome adasyn(const LabeledMatrix& data, std::size_t k, std::uint64_t seed);

/// Per-row allocation used by adasyn: ratio r_i, normalized weight and count.
struct AdasynAllocation {
  std::vector<std::size_t> minority;  // input indices
  std::vector<double> ratio;
  std::vector<double> weight;
  std::vector<std::size_t> count;
  std::size_t target = 0;  // majority - minority
};
AdasynAllocation adasyn_allocation(const LabeledMatrix& data, std::size_t k);

/// Cross-class mutual nearest-neighbor pairs (a < b).
std::vector<std::pair<std::size_t, std::size_t>> tomek_links(const LabeledMatrix& data);

/// Removes the majority-class member of every link (single pass).
ResampleOutcome tomek_clean(const LabeledMatrix& data);

/// Removes majority-class rows whose k-neighbor vote disagrees with their
/// label. Neighborhoods come from the unedited set.
ResampleOutcome enn_edit(const LabeledMatrix& data, std::size_t k);

/// As enn_edit but both classes are eligible for removal.
ResampleOutcome enn_edit_all(const LabeledMatrix& data, std::size_t k);

/// SMOTE, then repeated removal of both members of every link until the
/// combined set has none.
ResampleOutcome smote_tomek(const LabeledMatrix& data, std::uint64_t seed, const Params& params = {});

/// SMOTE, then an edit of both classes over the combined set.
ResampleOutcome smote_enn(const LabeledMatrix& data, std::uint64_t seed, const Params& params = {});

ResampleOutcome apply(Strategy s, const LabeledMatrix& data, std::uint64_t seed, const Params& params = {});

}  // namespace shotlab::resample
