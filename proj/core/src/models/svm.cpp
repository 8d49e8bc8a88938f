#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "internal.hpp"
#include "shotlab/csv.hpp"
#include "shotlab/models.hpp"

namespace shotlab::models {

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) noexcept {
  return std::exp(-gamma * squared_distance(a, b));
}

SvmModel::SvmModel(Hyperparameters hp, Matrix support, std::vector<double> coef, double b, double gamma)
    : Model(std::move(hp), support.cols()), support_(std::move(support)), coef_(std::move(coef)), b_(b), gamma_(gamma) {}

double SvmModel::predict_score(std::span<const double> x) const {
  check_width(x);
  double f = b_;
  for (std::size_t i = 0; i < support_.rows(); ++i) f += coef_[i] * rbf_kernel(support_.row(i), x, gamma_);
  return f;
}

namespace {

/// Kernel rows, fully precomputed for small problems and LRU-cached otherwise.
class KernelRows {
 public:
  KernelRows(const Matrix& X, double gamma) : X_(X), gamma_(gamma), n_(X.rows()) {
    constexpr std::size_t kBudgetBytes = std::size_t{256} << 20;
    capacity_ = std::max<std::size_t>(2, kBudgetBytes / (sizeof(double) * std::max<std::size_t>(n_, 1)));
  }

  const std::vector<double>& row(std::size_t i) {
    if (auto it = index_.find(i); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    if (index_.size() >= capacity_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    std::vector<double> r(n_);
    const auto xi = X_.row(i);
    for (std::size_t k = 0; k < n_; ++k) r[k] = rbf_kernel(xi, X_.row(k), gamma_);
    lru_.emplace_front(i, std::move(r));
    index_[i] = lru_.begin();
    return lru_.front().second;
  }

 private:
  const Matrix& X_;
  double gamma_;
  std::size_t n_;
  std::size_t capacity_;
  std::list<std::pair<std::size_t, std::vector<double>>> lru_;
  std::unordered_map<std::size_t, std::list<std::pair<std::size_t, std::vector<double>>>::iterator> index_;
};

}  // namespace

SvmModel fit_svm(const LabeledMatrix& data, const SvmParams& p) {
  detail::require_fit_data(data, "support vector machine");
  if (!detail::has_both_classes(data)) throw TrainingError("support vector machine needs both classes");
  if (!(p.C > 0.0) || !(p.gamma > 0.0)) throw ConfigError("support vector machine: C and gamma must be positive");
  constexpr double kTau = 1e-12;
  const std::size_t n = data.size();
  const double C = p.C;
  std::vector<double> y(n), alpha(n, 0.0), G(n, -1.0);
  for (std::size_t i = 0; i < n; ++i) y[i] = data.y[i] ? 1.0 : -1.0;
  KernelRows K(data.X, p.gamma);

  auto upper = [&](std::size_t t) { return alpha[t] >= C; };
  auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };
  auto in_up = [&](std::size_t t) { return y[t] > 0 ? !upper(t) : !lower(t); };
  auto in_low = [&](std::size_t t) { return y[t] > 0 ? !lower(t) : !upper(t); };

  std::uint64_t updates = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (;;) {
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t) && -y[t] * G[t] > gmax) {
        gmax = -y[t] * G[t];
        i = t;
      }
    }
    if (i == n) break;
    const auto& Ki = K.row(i);
    double gmin = std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = -y[t] * G[t];
      gmin = std::min(gmin, v);
      const double b = gmax - v;
      if (b > 0.0) {
        double a = 2.0 - 2.0 * Ki[t];  // K(i,i) = K(t,t) = 1
        if (a <= 0.0) a = kTau;
        const double obj = -(b * b) / a;
        if (obj < best) {
          best = obj;
          j = t;
        }
      }
    }
    gap = gmax - gmin;
    if (gap < p.tol || j == n) break;
    if (updates >= p.max_updates) {
      throw ConvergenceError("SMO did not converge after " + std::to_string(updates) + " pair updates (n=" +
                             std::to_string(n) + ", C=" + csv::format_exact(C) + ", gamma=" +
                             csv::format_exact(p.gamma) + ", KKT gap " + csv::format_significant(gap, 4) + ")");
    }
    const auto& Kj = K.row(j);
    const double Kij = Ki[j];
    const double ai_old = alpha[i];
    const double aj_old = alpha[j];
    double& ai = alpha[i];
    double& aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = 2.0 + 2.0 * Kij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) {
          aj = 0.0;
          ai = diff;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = -diff;
      }
      if (diff > 0.0) {
        if (ai > C) {
          ai = C;
          aj = C - diff;
        }
      } else if (aj > C) {
        aj = C;
        ai = C + diff;
      }
    } else {
      double quad = 2.0 - 2.0 * Kij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > C) {
        if (ai > C) {
          ai = C;
          aj = sum - C;
        }
      } else if (aj < 0.0) {
        aj = 0.0;
        ai = sum;
      }
      if (sum > C) {
        if (aj > C) {
          aj = C;
          ai = sum - C;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = sum;
      }
    }
    const double dai = (ai - ai_old) * y[i];
    const double daj = (aj - aj_old) * y[j];
    for (std::size_t t = 0; t < n; ++t) G[t] += y[t] * (Ki[t] * dai + Kj[t] * daj);
    ++updates;
  }

  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yG = y[t] * G[t];
    if (upper(t)) {
      if (y[t] < 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else if (lower(t)) {
      if (y[t] > 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else {
      ++n_free;
      sum_free += yG;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);

  Matrix support;
  std::vector<double> coef;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      support.append_row(data.X.row(t));
      coef.push_back(alpha[t] * y[t]);
    }
  }
  if (support.rows() == 0) support = Matrix(0, data.X.cols());
  SvmModel model({{"C", C}, {"gamma", p.gamma}, {"tol", p.tol}, {"max_updates", static_cast<double>(p.max_updates)}},
                 std::move(support), std::move(coef), -rho, p.gamma);
  model.alpha = std::move(alpha);
  model.updates = updates;
  return model;
}

}  // namespace shotlab::models
