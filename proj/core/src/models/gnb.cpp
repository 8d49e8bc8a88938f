#include <algorithm>
#include <cmath>
#include <numbers>

#include "internal.hpp"
#include "shotlab/models.hpp"

namespace shotlab::models {

GaussianNbModel::GaussianNbModel(Hyperparameters hp, std::vector<double> log_prior, Matrix mean, Matrix var)
    : Model(std::move(hp), mean.cols()), log_prior_(std::move(log_prior)), mean_(std::move(mean)), var_(std::move(var)) {}

double GaussianNbModel::joint_log_likelihood(std::span<const double> x, int label) const {
  check_width(x);
  const auto c = static_cast<std::size_t>(label);
  double s = log_prior_[c];
  for (std::size_t j = 0; j < n_features_; ++j) {
    const double v = var_(c, j);
    const double z = x[j] - mean_(c, j);
    s -= 0.5 * (std::log(2.0 * std::numbers::pi * v) + z * z / v);
  }
  return s;
}

double GaussianNbModel::predict_score(std::span<const double> x) const {
  return detail::sigmoid(joint_log_likelihood(x, 1) - joint_log_likelihood(x, 0));
}

GaussianNbModel fit_gaussian_nb(const LabeledMatrix& data, double var_smoothing) {
  detail::require_fit_data(data, "Gaussian naive Bayes");
  if (!detail::has_both_classes(data)) throw TrainingError("Gaussian naive Bayes needs both classes");
  if (!(var_smoothing >= 0.0)) throw ConfigError("Gaussian naive Bayes: var_smoothing must be non-negative");
  const std::size_t n = data.size();
  const std::size_t d = data.X.cols();

  double max_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += data.X(i, j);
    m /= static_cast<double>(n);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) v += (data.X(i, j) - m) * (data.X(i, j) - m);
    max_var = std::max(max_var, v / static_cast<double>(n));
  }
  // All-constant input would leave a zero variance; fall back to the raw
  // smoothing amount.
  const double epsilon = max_var > 0.0 ? var_smoothing * max_var : var_smoothing;

  Matrix mean(2, d), var(2, d);
  std::vector<double> counts(2, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(data.y[i]);
    counts[c] += 1.0;
    for (std::size_t j = 0; j < d; ++j) mean(c, j) += data.X(i, j);
  }
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < d; ++j) mean(c, j) /= counts[c];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(data.y[i]);
    for (std::size_t j = 0; j < d; ++j) {
      const double z = data.X(i, j) - mean(c, j);
      var(c, j) += z * z;
    }
  }
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < d; ++j) {
      var(c, j) = var(c, j) / counts[c] + epsilon;
      if (!(var(c, j) > 0.0)) throw TrainingError("Gaussian naive Bayes: zero variance with no smoothing");
    }
  }
  std::vector<double> log_prior{std::log(counts[0] / static_cast<double>(n)), std::log(counts[1] / static_cast<double>(n))};
  return GaussianNbModel({{"var_smoothing", var_smoothing}}, std::move(log_prior), std::move(mean), std::move(var));
}

}  // namespace shotlab::models
