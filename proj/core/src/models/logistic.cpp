#include <algorithm>
#include <cmath>

#include "internal.hpp"
#include "shotlab/models.hpp"

namespace shotlab::models {

using detail::sigmoid;
using detail::softplus;

LogisticModel::LogisticModel(Hyperparameters hp, std::vector<double> w, double b, int iterations)
    : Model(std::move(hp), w.size()), w_(std::move(w)), b_(b), iterations_(iterations) {}

double LogisticModel::decision(std::span<const double> x) const {
  check_width(x);
  double z = b_;
  for (std::size_t j = 0; j < w_.size(); ++j) z += w_[j] * x[j];
  return z;
}

double LogisticModel::predict_score(std::span<const double> x) const { return sigmoid(decision(x)); }

double logistic_objective(const Matrix& X, std::span<const int> y, std::span<const double> w, double b, double C,
                          std::span<double> grad_w, double* grad_b) {
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  const bool want_grad = !grad_w.empty();
  if (want_grad) std::fill(grad_w.begin(), grad_w.end(), 0.0);
  double gb = 0.0;
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = X.row(i);
    double z = b;
    for (std::size_t j = 0; j < d; ++j) z += w[j] * x[j];
    loss += softplus(z) - y[i] * z;
    if (want_grad) {
      const double r = sigmoid(z) - y[i];
      for (std::size_t j = 0; j < d; ++j) grad_w[j] += r * x[j];
      gb += r;
    }
  }
  double penalty = 0.0;
  for (std::size_t j = 0; j < d; ++j) penalty += w[j] * w[j];
  const double reg = 1.0 / (C * static_cast<double>(n));
  if (want_grad) {
    for (std::size_t j = 0; j < d; ++j) grad_w[j] = grad_w[j] * inv_n + reg * w[j];
    if (grad_b) *grad_b = gb * inv_n;
  }
  return loss * inv_n + 0.5 * reg * penalty;
}

namespace {

/// Same objective as logistic_objective, written in coordinates v_j = w_j s_j
/// over centered and scaled features.
struct ScaledProblem {
  Matrix Z;
  std::span<const int> y;
  std::vector<double> s2;  // squared scales
  double reg = 0.0;

  double eval(std::span<const double> v, double c, std::span<double> gv, double* gc) const {
    const std::size_t n = Z.rows();
    const std::size_t d = Z.cols();
    const double inv_n = 1.0 / static_cast<double>(n);
    if (!gv.empty()) std::fill(gv.begin(), gv.end(), 0.0);
    double loss = 0.0;
    double g0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto z = Z.row(i);
      double m = c;
      for (std::size_t j = 0; j < d; ++j) m += v[j] * z[j];
      loss += softplus(m) - y[i] * m;
      if (!gv.empty()) {
        const double r = sigmoid(m) - y[i];
        for (std::size_t j = 0; j < d; ++j) gv[j] += r * z[j];
        g0 += r;
      }
    }
    double penalty = 0.0;
    for (std::size_t j = 0; j < d; ++j) penalty += v[j] * v[j] / s2[j];
    if (!gv.empty()) {
      for (std::size_t j = 0; j < d; ++j) gv[j] = gv[j] * inv_n + reg * v[j] / s2[j];
      *gc = g0 * inv_n;
    }
    return loss * inv_n + 0.5 * reg * penalty;
  }
};

}  // namespace

LogisticModel fit_logistic(const LabeledMatrix& data, const LogisticParams& p) {
  detail::require_fit_data(data, "logistic regression");
  if (!(p.C > 0.0)) throw ConfigError("logistic regression: C must be positive");
  const std::size_t n = data.size();
  const std::size_t d = data.X.cols();

  std::vector<double> mu(d, 0.0);
  std::vector<double> s(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) mu[j] += data.X(i, j);
  }
  for (auto& m : mu) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) s[j] += (data.X(i, j) - mu[j]) * (data.X(i, j) - mu[j]);
  }
  ScaledProblem prob{Matrix(n, d), data.y, std::vector<double>(d), 1.0 / (p.C * static_cast<double>(n))};
  for (std::size_t j = 0; j < d; ++j) {
    s[j] = std::sqrt(s[j] / static_cast<double>(n));
    if (!(s[j] > 0.0)) s[j] = 1.0;
    prob.s2[j] = s[j] * s[j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) prob.Z(i, j) = (data.X(i, j) - mu[j]) / s[j];
  }

  std::vector<double> v(d, 0.0), gv(d), v_try(d);
  double c = 0.0;
  double gc = 0.0;
  double f = prob.eval(v, c, gv, &gc);
  double step = 1.0;
  int it = 0;
  for (; it < p.max_iter; ++it) {
    double gmax = std::abs(gc);
    double gnorm2 = gc * gc;
    for (double g : gv) {
      gmax = std::max(gmax, std::abs(g));
      gnorm2 += g * g;
    }
    if (gmax < p.tol) break;
    step = std::min(step * 2.0, 1e3);
    double f_try = 0.0;
    double c_try = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t j = 0; j < d; ++j) v_try[j] = v[j] - step * gv[j];
      c_try = c - step * gc;
      f_try = prob.eval(v_try, c_try, {}, nullptr);
      if (f_try <= f - 0.5 * step * gnorm2) break;
      step *= 0.5;
    }
    if (!(f_try <= f)) break;  // no further decrease representable
    v.swap(v_try);
    c = c_try;
    f = prob.eval(v, c, gv, &gc);
  }

  std::vector<double> w(d);
  double b = c;
  for (std::size_t j = 0; j < d; ++j) {
    w[j] = v[j] / s[j];
    b -= w[j] * mu[j];
  }
  if (!std::isfinite(b)) throw TrainingError("logistic regression diverged");
  Hyperparameters hp{{"C", p.C}, {"max_iter", static_cast<double>(p.max_iter)}, {"tol", p.tol}};
  return LogisticModel(std::move(hp), std::move(w), b, it);
}

}  // namespace shotlab::models
