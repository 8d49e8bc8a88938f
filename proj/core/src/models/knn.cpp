#include <algorithm>

#include "internal.hpp"
#include "shotlab/models.hpp"

namespace shotlab::models {

KnnModel::KnnModel(Hyperparameters hp, LabeledMatrix train, std::size_t k)
    : Model(std::move(hp), train.X.cols()), train_(std::move(train)), k_(k) {}

double KnnModel::threshold() const noexcept {
  return static_cast<double>(k_ / 2 + 1) / static_cast<double>(k_);
}

double KnnModel::predict_score(std::span<const double> x) const {
  check_width(x);
  const std::size_t n = train_.size();
  std::vector<std::pair<double, std::size_t>> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = {squared_distance(train_.X.row(i), x), i};
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k_ - 1), d.end());
  std::size_t ones = 0;
  for (std::size_t i = 0; i < k_; ++i) ones += train_.y[d[i].second] != 0 ? 1 : 0;
  return static_cast<double>(ones) / static_cast<double>(k_);
}

std::vector<double> KnnModel::predict_scores(const Matrix& X) const {
  std::vector<double> out(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) out[r] = predict_score(X.row(r));
  return out;
}

KnnModel fit_knn(const LabeledMatrix& data, std::size_t k) {
  detail::require_fit_data(data, "k-nearest neighbors");
  if (k == 0) throw ConfigError("k-nearest neighbors: k must be at least 1");
  if (k > data.size()) {
    throw SizeError("k-nearest neighbors: k=" + std::to_string(k) + " exceeds the " + std::to_string(data.size()) +
                    " training rows");
  }
  return KnnModel({{"n_neighbors", static_cast<double>(k)}}, data, k);
}

}  // namespace shotlab::models
