#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shotlab/error.hpp"
#include "shotlab/models.hpp"
#include "test_util.hpp"

using namespace shotlab;
using namespace shotlab::models;

namespace {

MlpWeights random_weights(std::size_t d, std::size_t h, std::uint64_t seed) {
  CounterRng rng(seed);
  MlpWeights w;
  w.d = d;
  w.h = h;
  w.W1.resize(d * h);
  w.b1.resize(h);
  w.W2.resize(h);
  for (auto& v : w.W1) v = rng.uniform(-1.0, 1.0);
  for (auto& v : w.b1) v = rng.uniform(-0.5, 0.5);
  for (auto& v : w.W2) v = rng.uniform(-1.0, 1.0);
  w.b2 = rng.uniform(-0.5, 0.5);
  return w;
}

/// Every parameter of the network, in a fixed order.
std::vector<double*> params(MlpWeights& w) {
  std::vector<double*> out;
  for (auto& v : w.W1) out.push_back(&v);
  for (auto& v : w.b1) out.push_back(&v);
  for (auto& v : w.W2) out.push_back(&v);
  out.push_back(&w.b2);
  return out;
}

LabeledMatrix xor_data() {
  return {Matrix(4, 2, std::vector<double>{0, 0, 0, 1, 1, 0, 1, 1}), {0, 1, 1, 0}};
}

}  // namespace

TEST_CASE("mlp gradient matches central differences") {
  for (auto act : {Activation::Tanh, Activation::Logistic, Activation::Relu}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto batch = testutil::random_points(6, 3, seed + 50);
      auto w = random_weights(3, 4, seed);
      MlpWeights grad;
      mlp_objective(w, act, batch.X, batch.y, 0.01, &grad);
      auto gp = params(grad);
      auto wp = params(w);
      const double h = 1e-5;
      double worst = 0.0;
      for (std::size_t k = 0; k < wp.size(); ++k) {
        const double orig = *wp[k];
        *wp[k] = orig + h;
        const double up = mlp_objective(w, act, batch.X, batch.y, 0.01, nullptr);
        *wp[k] = orig - h;
        const double down = mlp_objective(w, act, batch.X, batch.y, 0.01, nullptr);
        *wp[k] = orig;
        const double num = (up - down) / (2 * h);
        const double a = *gp[k];
        worst = std::max(worst, std::abs(a - num) / std::max(1e-8, std::max(std::abs(a), std::abs(num))));
      }
      CAPTURE(static_cast<int>(act));
      CHECK(worst < 1e-4);
    }
  }
}

TEST_CASE("zero-weight network outputs one half") {
  MlpWeights w;
  w.d = 3;
  w.h = 5;
  w.W1.assign(15, 0.0);
  w.b1.assign(5, 0.0);
  w.W2.assign(5, 0.0);
  const MlpModel m({}, w, Activation::Relu, 0);
  const auto pts = testutil::random_points(20, 3, 4);
  for (std::size_t i = 0; i < 20; ++i) CHECK(m.predict_score(pts.X.row(i)) == 0.5);
  // log 2 for every row and no penalty.
  CHECK(mlp_objective(w, Activation::Relu, pts.X, pts.y, 0.5, nullptr) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("mlp learns XOR") {
  const auto d = xor_data();
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    MlpParams p;
    p.hidden = 8;
    p.learning_rate = 0.01;
    p.alpha = 0.0;
    p.batch_size = 4;
    p.max_epochs = 2000;
    p.early_stopping = false;
    p.n_iter_no_change = 100000;
    p.seed = seed;
    const auto m = fit_mlp(d, p);
    CHECK(m.epochs() <= 2000);
    solved += m.predict(d.X) == d.y;
  }
  CHECK(solved >= 8);
}

TEST_CASE("mlp fit is deterministic per seed") {
  const auto d = testutil::blobs(150, 3, 1.5, 3, 3);
  MlpParams p;
  p.hidden = 10;
  p.max_epochs = 30;
  p.seed = 9;
  const auto a = fit_mlp(d, p);
  const auto b = fit_mlp(d, p);
  CHECK(a.weights().W1 == b.weights().W1);
  CHECK(a.weights().W2 == b.weights().W2);
  CHECK(a.epochs() == b.epochs());
  p.seed = 10;
  CHECK(fit_mlp(d, p).weights().W1 != a.weights().W1);
}

TEST_CASE("mlp divergence is a training error") {
  auto d = testutil::blobs(60, 2, 1.0, 3);
  for (std::size_t i = 0; i < d.size(); ++i) d.X(i, 0) *= 1e150;
  MlpParams p;
  p.hidden = 4;
  p.learning_rate = 1e3;
  p.solver = Solver::Sgd;
  p.max_epochs = 50;
  p.early_stopping = false;
  CHECK_THROWS_AS(fit_mlp(d, p), TrainingError);
}

TEST_CASE("activation and solver tokens") {
  CHECK(parse_activation("relu") == Activation::Relu);
  CHECK(parse_activation("tanh") == Activation::Tanh);
  CHECK(parse_activation("logistic") == Activation::Logistic);
  CHECK(parse_solver("adam") == Solver::Adam);
  CHECK(parse_solver("sgd") == Solver::Sgd);
  CHECK_THROWS_AS(parse_activation("softmax"), ConfigError);
}

TEST_CASE("naive Bayes: closed-form posterior on four points") {
  LabeledMatrix d{Matrix(4, 1, std::vector<double>{0.0, 1.0, 3.0, 5.0}), {0, 0, 1, 1}};
  const double smoothing = 0.002;
  const auto m = fit_gaussian_nb(d, smoothing);
  // Overall variance of {0, 1, 3, 5} is 3.6875.
  const double eps = smoothing * 3.6875;
  const double m0 = 0.5, v0 = 0.25 + eps;
  const double m1 = 4.0, v1 = 1.0 + eps;
  for (double x : {-1.0, 0.5, 2.0, 2.5, 3.3, 7.0}) {
    const double l0 = std::log(0.5) - 0.5 * (std::log(2 * std::numbers::pi * v0) + (x - m0) * (x - m0) / v0);
    const double l1 = std::log(0.5) - 0.5 * (std::log(2 * std::numbers::pi * v1) + (x - m1) * (x - m1) / v1);
    const std::vector<double> q{x};
    CHECK(std::abs(m.joint_log_likelihood(q, 0) - l0) < 1e-9);
    CHECK(std::abs(m.joint_log_likelihood(q, 1) - l1) < 1e-9);
    CHECK(m.predict(q) == (l1 >= l0 ? 1 : 0));
  }
}

TEST_CASE("naive Bayes: identical classes follow the prior") {
  // Class 1 repeats class 0's rows twice.
  LabeledMatrix d{Matrix(9, 1, std::vector<double>{1, 2, 3, 1, 2, 3, 1, 2, 3}), {0, 0, 0, 1, 1, 1, 1, 1, 1}};
  const auto m = fit_gaussian_nb(d, 0.002);
  CHECK(m.means()(0, 0) == m.means()(1, 0));
  CHECK(m.variances()(0, 0) == doctest::Approx(m.variances()(1, 0)));
  for (double x : {-5.0, 0.0, 2.0, 9.0}) {
    const std::vector<double> q{x};
    CHECK(m.predict(q) == 1);
  }
}

TEST_CASE("naive Bayes: constant feature stays finite") {
  LabeledMatrix d{Matrix(6, 2, std::vector<double>{1, 7, 2, 7, 3, 7, 4, 7, 5, 7, 6, 7}), {0, 0, 0, 1, 1, 1}};
  const auto m = fit_gaussian_nb(d, 0.002);
  CHECK(m.variances()(0, 1) > 0.0);
  const std::vector<double> q{3.5, 7.0};
  CHECK(std::isfinite(m.predict_score(q)));
  const std::vector<double> far{3.5, 8.0};
  CHECK(std::isfinite(m.joint_log_likelihood(far, 1)));
}
