#include <algorithm>
#include <cmath>
#include <limits>

#include "internal.hpp"
#include "shotlab/models.hpp"
#include "shotlab/rng.hpp"

namespace shotlab::models {

using detail::sigmoid;
using detail::softplus;

Activation parse_activation(std::string_view s) {
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  if (s == "logistic") return Activation::Logistic;
  throw ConfigError("unknown activation '" + std::string(s) + "' (expected relu|tanh|logistic)");
}

Solver parse_solver(std::string_view s) {
  if (s == "adam") return Solver::Adam;
  if (s == "sgd") return Solver::Sgd;
  throw ConfigError("unknown solver '" + std::string(s) + "' (expected adam|sgd)");
}

namespace {

double activate(Activation a, double v) noexcept {
  switch (a) {
    case Activation::Relu: return v > 0.0 ? v : 0.0;
    case Activation::Tanh: return std::tanh(v);
    case Activation::Logistic: return sigmoid(v);
  }
  return v;
}

/// Derivative expressed through the activation output.
double activate_grad(Activation a, double out) noexcept {
  switch (a) {
    case Activation::Relu: return out > 0.0 ? 1.0 : 0.0;
    case Activation::Tanh: return 1.0 - out * out;
    case Activation::Logistic: return out * (1.0 - out);
  }
  return 1.0;
}

double output_margin(const MlpWeights& w, Activation act, std::span<const double> x, double* hidden) {
  double z = w.b2;
  for (std::size_t k = 0; k < w.h; ++k) {
    double s = w.b1[k];
    for (std::size_t j = 0; j < w.d; ++j) s += x[j] * w.W1[j * w.h + k];
    const double a = activate(act, s);
    if (hidden) hidden[k] = a;
    z += a * w.W2[k];
  }
  return z;
}

MlpWeights zeros_like(const MlpWeights& w) {
  MlpWeights g;
  g.d = w.d;
  g.h = w.h;
  g.W1.assign(w.W1.size(), 0.0);
  g.b1.assign(w.b1.size(), 0.0);
  g.W2.assign(w.W2.size(), 0.0);
  g.b2 = 0.0;
  return g;
}

/// Visits matching parameters of four same-shaped weight sets.
template <typename F>
void for_each_param(MlpWeights& a, MlpWeights& b, MlpWeights& c, MlpWeights& e, F&& f) {
  for (std::size_t i = 0; i < a.W1.size(); ++i) f(a.W1[i], b.W1[i], c.W1[i], e.W1[i]);
  for (std::size_t i = 0; i < a.b1.size(); ++i) f(a.b1[i], b.b1[i], c.b1[i], e.b1[i]);
  for (std::size_t i = 0; i < a.W2.size(); ++i) f(a.W2[i], b.W2[i], c.W2[i], e.W2[i]);
  f(a.b2, b.b2, c.b2, e.b2);
}

double batch_objective(const MlpWeights& w, Activation act, const Matrix& X, std::span<const int> y,
                       std::span<const std::size_t> rows, double alpha, MlpWeights* grad) {
  const std::size_t n = rows.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  if (grad) *grad = zeros_like(w);
  std::vector<double> hidden(w.h);
  double loss = 0.0;
  for (auto r : rows) {
    const auto x = X.row(r);
    const double z = output_margin(w, act, x, hidden.data());
    loss += softplus(z) - y[r] * z;
    if (!grad) continue;
    const double dz = (sigmoid(z) - y[r]) * inv_n;
    grad->b2 += dz;
    for (std::size_t k = 0; k < w.h; ++k) {
      grad->W2[k] += dz * hidden[k];
      const double dh = dz * w.W2[k] * activate_grad(act, hidden[k]);
      if (dh == 0.0) continue;
      grad->b1[k] += dh;
      for (std::size_t j = 0; j < w.d; ++j) grad->W1[j * w.h + k] += dh * x[j];
    }
  }
  double sq = 0.0;
  for (double v : w.W1) sq += v * v;
  for (double v : w.W2) sq += v * v;
  const double reg = alpha * inv_n;
  if (grad) {
    for (std::size_t i = 0; i < w.W1.size(); ++i) grad->W1[i] += reg * w.W1[i];
    for (std::size_t i = 0; i < w.W2.size(); ++i) grad->W2[i] += reg * w.W2[i];
  }
  return loss * inv_n + 0.5 * reg * sq;
}

double mean_log_loss(const MlpWeights& w, Activation act, const Matrix& X, std::span<const int> y,
                     std::span<const std::size_t> rows) {
  double loss = 0.0;
  for (auto r : rows) {
    const double z = output_margin(w, act, X.row(r), nullptr);
    loss += softplus(z) - y[r] * z;
  }
  return loss / static_cast<double>(rows.size());
}

MlpWeights initial_weights(std::size_t d, std::size_t h, Activation act, CounterRng& rng) {
  MlpWeights w;
  w.d = d;
  w.h = h;
  const double factor = act == Activation::Logistic ? 2.0 : 6.0;
  const double b_in = std::sqrt(factor / static_cast<double>(d + h));
  const double b_out = std::sqrt(factor / static_cast<double>(h + 1));
  w.W1.resize(d * h);
  w.b1.resize(h);
  w.W2.resize(h);
  for (auto& v : w.W1) v = rng.uniform(-b_in, b_in);
  for (auto& v : w.b1) v = rng.uniform(-b_in, b_in);
  for (auto& v : w.W2) v = rng.uniform(-b_out, b_out);
  w.b2 = rng.uniform(-b_out, b_out);
  return w;
}

}  // namespace

double mlp_objective(const MlpWeights& w, Activation act, const Matrix& X, std::span<const int> y, double alpha,
                     MlpWeights* grad) {
  std::vector<std::size_t> rows(X.rows());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return batch_objective(w, act, X, y, rows, alpha, grad);
}

MlpModel::MlpModel(Hyperparameters hp, MlpWeights w, Activation act, int epochs)
    : Model(std::move(hp), w.d), w_(std::move(w)), act_(act), epochs_(epochs) {}

double MlpModel::predict_score(std::span<const double> x) const {
  check_width(x);
  return sigmoid(output_margin(w_, act_, x, nullptr));
}

MlpModel fit_mlp(const LabeledMatrix& data, const MlpParams& p) {
  detail::require_fit_data(data, "multilayer perceptron");
  if (p.hidden == 0 || p.batch_size == 0) throw ConfigError("multilayer perceptron: hidden and batch_size must be positive");
  const std::size_t n = data.size();
  const std::size_t d = data.X.cols();
  CounterRng root(p.seed);
  CounterRng init_rng = root.split(1);
  CounterRng split_rng = root.split(2);
  CounterRng shuffle_rng = root.split(3);

  // Stratified validation hold-out.
  std::vector<std::size_t> train_rows, val_rows;
  if (p.early_stopping) {
    for (int label = 0; label <= 1; ++label) {
      std::vector<std::size_t> cls;
      for (std::size_t i = 0; i < n; ++i) {
        if (data.y[i] == label) cls.push_back(i);
      }
      shuffle(std::span<std::size_t>(cls), split_rng);
      const auto n_val = static_cast<std::size_t>(std::ceil(p.validation_fraction * static_cast<double>(cls.size())));
      for (std::size_t i = 0; i < cls.size(); ++i) (i < n_val ? val_rows : train_rows).push_back(cls[i]);
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(val_rows.begin(), val_rows.end());
    if (train_rows.empty() || val_rows.empty()) {
      train_rows.clear();
      val_rows.clear();
    }
  }
  const bool use_validation = !val_rows.empty();
  if (!use_validation) {
    train_rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) train_rows[i] = i;
  }

  MlpWeights w = initial_weights(d, p.hidden, p.activation, init_rng);
  MlpWeights grad = zeros_like(w);
  MlpWeights m1 = zeros_like(w);
  MlpWeights m2 = zeros_like(w);
  MlpWeights best = w;
  double best_loss = std::numeric_limits<double>::infinity();
  int no_improve = 0;
  std::uint64_t t = 0;
  int epoch = 0;
  const std::size_t batch = std::min(p.batch_size, train_rows.size());
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;

  for (epoch = 1; epoch <= p.max_epochs; ++epoch) {
    shuffle(std::span<std::size_t>(train_rows), shuffle_rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < train_rows.size(); start += batch) {
      const std::size_t end = std::min(start + batch, train_rows.size());
      const std::span<const std::size_t> rows(train_rows.data() + start, end - start);
      const double loss = batch_objective(w, p.activation, data.X, data.y, rows, p.alpha, &grad);
      if (!std::isfinite(loss)) throw TrainingError("multilayer perceptron diverged (non-finite loss)");
      epoch_loss += loss * static_cast<double>(rows.size());
      ++t;
      if (p.solver == Solver::Adam) {
        const double lr_t = p.learning_rate * std::sqrt(1.0 - std::pow(kBeta2, static_cast<double>(t))) /
                            (1.0 - std::pow(kBeta1, static_cast<double>(t)));
        for_each_param(w, grad, m1, m2, [&](double& wv, double& g, double& m, double& v) {
          m = kBeta1 * m + (1.0 - kBeta1) * g;
          v = kBeta2 * v + (1.0 - kBeta2) * g * g;
          wv -= lr_t * m / (std::sqrt(v) + kEps);
        });
      } else {
        // Nesterov momentum; m1 holds the velocity.
        for_each_param(w, grad, m1, m2, [&](double& wv, double& g, double& vel, double&) {
          vel = p.momentum * vel - p.learning_rate * g;
          wv += p.momentum * vel - p.learning_rate * g;
        });
      }
    }
    epoch_loss /= static_cast<double>(train_rows.size());
    const double monitored =
        use_validation ? mean_log_loss(w, p.activation, data.X, data.y, val_rows) : epoch_loss;
    if (!std::isfinite(monitored)) throw TrainingError("multilayer perceptron diverged (non-finite loss)");
    if (monitored < best_loss - p.tol) {
      no_improve = 0;
    } else {
      ++no_improve;
    }
    if (monitored < best_loss) {
      best_loss = monitored;
      best = w;
    }
    if (no_improve >= p.n_iter_no_change) break;
  }
  epoch = std::min(epoch, p.max_epochs);
  if (!use_validation) best = w;

  Hyperparameters hp{{"hidden", static_cast<double>(p.hidden)},
                     {"learning_rate_init", p.learning_rate},
                     {"alpha", p.alpha},
                     {"batch_size", static_cast<double>(p.batch_size)},
                     {"max_epochs", static_cast<double>(p.max_epochs)}};
  return MlpModel(std::move(hp), std::move(best), p.activation, epoch);
}

}  // namespace shotlab::models
