#include <doctest.h>

#include <cmath>
#include <numeric>

#include "shotlab/error.hpp"
#include "shotlab/models.hpp"
#include "test_util.hpp"

using namespace shotlab;
using namespace shotlab::models;

namespace {

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

TEST_CASE("random forest: pure labels give single-leaf trees") {
  auto d = testutil::random_points(40, 6, 3);
  std::fill(d.y.begin(), d.y.end(), 1);
  ForestParams p;
  p.n_trees = 10;
  const auto m = fit_random_forest(d, p);
  for (const auto& t : m.trees()) CHECK(t.nodes.size() == 1);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(m.predict(d.X.row(i)) == 1);
}

TEST_CASE("random forest: a single full-feature tree recovers the threshold") {
  for (int cut = 3; cut < 17; ++cut) {
    LabeledMatrix d{Matrix(20, 1), std::vector<int>(20)};
    for (std::size_t i = 0; i < 20; ++i) {
      d.X(i, 0) = static_cast<double>(i);
      d.y[i] = static_cast<int>(i) >= cut;
    }
    ForestParams p;
    p.max_features = 1;
    p.min_samples_leaf = 1;
    p.min_samples_split = 2;
    const auto rows = iota(20);
    const auto t = grow_gini_tree(d, rows, p, 1);
    REQUIRE(t.nodes[0].feature == 0);
    CHECK(t.nodes[0].threshold > cut - 1);
    CHECK(t.nodes[0].threshold < cut);
    CHECK(t.split_count() == 1);
  }
}

TEST_CASE("random forest: exhaustive best split on a random 1-D set") {
  // The root split minimizes the weighted Gini impurity over all midpoints.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = testutil::random_points(25, 1, seed, 0.5);
    ForestParams p;
    p.max_features = 1;
    p.min_samples_leaf = 1;
    p.min_samples_split = 2;
    const auto t = grow_gini_tree(d, iota(25), p, 1);
    double best = 1e300, best_t = 0.0;
    auto gini = [&](double thr) {
      double nl = 0, ol = 0, nr = 0, orr = 0;
      for (std::size_t i = 0; i < 25; ++i) {
        if (d.X(i, 0) <= thr) {
          ++nl;
          ol += d.y[i];
        } else {
          ++nr;
          orr += d.y[i];
        }
      }
      auto g = [](double n, double o) { return n == 0 ? 0.0 : n * 2 * (o / n) * (1 - o / n); };
      return g(nl, ol) + g(nr, orr);
    };
    auto xs = d.X.column(0);
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double thr = 0.5 * (xs[i] + xs[i + 1]);
      const double g = gini(thr);
      if (g < best) {
        best = g;
        best_t = thr;
      }
    }
    REQUIRE(t.nodes[0].feature == 0);
    CHECK(gini(t.nodes[0].threshold) == doctest::Approx(best).epsilon(1e-12));
    CHECK(gini(best_t) == best);
  }
}

TEST_CASE("random forest: scores are vote fractions") {
  const auto d = testutil::blobs(200, 6, 1.0, 4, 3);
  ForestParams p;
  p.n_trees = 25;
  p.seed = 3;
  const auto m = fit_random_forest(d, p);
  for (std::size_t i = 0; i < 50; ++i) {
    const double s = m.predict_score(d.X.row(i));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK(s * 25.0 == doctest::Approx(static_cast<double>(m.votes_for_kill(d.X.row(i)))));
    std::size_t votes = 0;
    for (const auto& t : m.trees()) votes += t.evaluate(d.X.row(i)) > 0.5;
    CHECK(votes == m.votes_for_kill(d.X.row(i)));
  }
}

TEST_CASE("random forest: too many features requested") {
  const auto d = testutil::random_points(30, 3, 1);
  ForestParams p;
  p.max_features = 5;
  CHECK_THROWS_AS(fit_random_forest(d, p), ConfigError);
}

TEST_CASE("boosting: hand-computed leaf weights on four points") {
  // Margins at prior 0.5: g = q - y, h = q (1 - q) = 0.25.
  Matrix X(4, 1, std::vector<double>{0, 1, 2, 3});
  const std::vector<double> g{0.5, 0.5, -0.5, -0.5}, h{0.25, 0.25, 0.25, 0.25};
  BoostingParams p;
  p.gamma = 0.0;
  p.lambda = 1.0;
  p.max_depth = 1;
  p.min_child_weight = 0.0;
  const std::vector<std::size_t> f{0};
  const auto t = grow_boosting_tree(X, g, h, iota(4), f, p);
  REQUIRE(t.split_count() == 1);
  CHECK(t.nodes[0].threshold == 1.5);
  const double left = t.nodes[static_cast<std::size_t>(t.nodes[0].left)].value;
  const double right = t.nodes[static_cast<std::size_t>(t.nodes[0].right)].value;
  CHECK(std::abs(left - (-1.0 / 1.5)) < 1e-9);
  CHECK(std::abs(right - (1.0 / 1.5)) < 1e-9);
  CHECK(t.nodes[0].value == 0.0);  // G = 0 at the root

  // gain = 0.5 * (1 / 1.5 + 1 / 1.5) = 2/3, so gamma above that blocks the split.
  p.gamma = 0.67;
  CHECK(grow_boosting_tree(X, g, h, iota(4), f, p).split_count() == 0);
  p.gamma = 0.66;
  CHECK(grow_boosting_tree(X, g, h, iota(4), f, p).split_count() == 1);
}

TEST_CASE("boosting: one full round matches the closed form") {
  const auto d = testutil::random_points(12, 2, 6, 0.4);
  BoostingParams p;
  p.n_rounds = 1;
  p.subsample = 1.0;
  p.colsample = 1.0;
  p.max_depth = 2;
  p.gamma = 0.0;
  p.min_child_weight = 0.0;
  const auto m = fit_gradient_boosting(d, p);
  double prior = 0.0;
  for (int v : d.y) prior += v;
  prior /= 12.0;
  CHECK(m.base_margin() == doctest::Approx(std::log(prior / (1 - prior))).epsilon(1e-12));
  const auto& t = m.trees().front();
  // Group rows by leaf and recompute each leaf weight.
  std::map<const void*, std::pair<double, double>> gh;
  std::map<const void*, double> value;
  for (std::size_t i = 0; i < 12; ++i) {
    int node = 0;
    while (t.nodes[static_cast<std::size_t>(node)].feature >= 0) {
      const auto& n = t.nodes[static_cast<std::size_t>(node)];
      node = d.X(i, static_cast<std::size_t>(n.feature)) <= n.threshold ? n.left : n.right;
    }
    const auto* key = &t.nodes[static_cast<std::size_t>(node)];
    const double q = sigmoid(m.base_margin());
    gh[key].first += q - d.y[i];
    gh[key].second += q * (1 - q);
    value[key] = key->value;
  }
  for (const auto& [key, sums] : gh) {
    CHECK(std::abs(value[key] - (-sums.first / (sums.second + p.lambda))) < 1e-9);
  }
}

TEST_CASE("boosting: uninformative features leave the prior") {
  LabeledMatrix d{Matrix(20, 3, 1.0), std::vector<int>(20, 0)};
  for (std::size_t i = 0; i < 6; ++i) d.y[i] = 1;
  BoostingParams p;
  p.n_rounds = 10;
  p.subsample = 1.0;  // a row subset would have a nonzero gradient sum
  const auto m = fit_gradient_boosting(d, p);
  CHECK(m.base_margin() == doctest::Approx(std::log(0.3 / 0.7)).epsilon(1e-12));
  for (const auto& t : m.trees()) CHECK(t.split_count() == 0);
  const std::vector<double> x{1.0, 1.0, 1.0};
  CHECK(m.predict_score(x) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("boosting: single-class and tiny inputs are rejected") {
  LabeledMatrix one{Matrix(20, 2, 0.5), std::vector<int>(20, 1)};
  CHECK_THROWS_AS(fit_gradient_boosting(one, {}), TrainingError);
  const auto tiny = testutil::random_points(9, 2, 1);
  CHECK_THROWS_AS(fit_gradient_boosting(tiny, {}), SizeError);
}

TEST_CASE("boosting: raising gamma never adds splits") {
  const auto d = testutil::blobs(300, 4, 0.8, 12, 3);
  for (int rounds : {1, 20}) {
    std::size_t prev = static_cast<std::size_t>(-1);
    for (double gamma : {0.0, 0.01, 0.1, 0.5, 1.0, 1.5, 3.0, 10.0, 100.0, 1e9}) {
      BoostingParams p;
      p.gamma = gamma;
      p.n_rounds = rounds;
      p.seed = 4;
      const auto m = fit_gradient_boosting(d, p);
      std::size_t splits = 0;
      for (const auto& t : m.trees()) splits += t.split_count();
      CAPTURE(gamma);
      CHECK(splits <= prev);
      prev = splits;
    }
    CHECK(prev == 0);
  }
}

TEST_CASE("boosting: probabilities and margins agree") {
  const auto d = testutil::blobs(200, 3, 1.0, 9, 4);
  BoostingParams p;
  p.n_rounds = 15;
  const auto m = fit_gradient_boosting(d, p);
  for (std::size_t i = 0; i < 30; ++i) {
    const double z = m.margin(d.X.row(i));
    double manual = m.base_margin();
    for (const auto& t : m.trees()) manual += m.learning_rate() * t.evaluate(d.X.row(i));
    CHECK(z == doctest::Approx(manual).epsilon(1e-12));
    CHECK(m.predict_score(d.X.row(i)) == doctest::Approx(sigmoid(z)).epsilon(1e-12));
  }
}
