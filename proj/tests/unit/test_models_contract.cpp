#include <doctest.h>

#include <cmath>

#include "shotlab/error.hpp"
#include "shotlab/models.hpp"
#include "test_util.hpp"

using namespace shotlab;
using namespace shotlab::models;

namespace {

// Centers 6 standard deviations apart in the plane.
const double kSep = 6.0 / std::sqrt(2.0);

Hyperparameters small_overrides(Family f) {
  switch (f) {
    case Family::RF: return {{"max_features", 2.0}, {"n_estimators", 30.0}};
    case Family::GBT: return {{"n_estimators", 30.0}};
    case Family::MLP: return {{"hidden", 16.0}, {"learning_rate_init", 0.01}};
    default: return {};
  }
}

double accuracy(const Model& m, const LabeledMatrix& d) {
  const auto p = m.predict(d.X);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < p.size(); ++i) ok += p[i] == d.y[i];
  return static_cast<double>(ok) / static_cast<double>(p.size());
}

}  // namespace

TEST_CASE("every family separates well-spaced blobs") {
  const auto train = testutil::blobs(200, 2, kSep, 11);
  const auto test = testutil::blobs(1000, 2, kSep, 12);
  for (auto f : all_families()) {
    CAPTURE(token(f));
    const auto m = fit(f, small_overrides(f), train, 7);
    CHECK(m->family() == f);
    CHECK(m->n_features() == 2);
    CHECK(accuracy(*m, test) >= 0.95);
  }
}

TEST_CASE("predict is the thresholded score") {
  const auto train = testutil::blobs(200, 2, 1.0, 3);
  const auto test = testutil::blobs(1000, 2, 1.0, 4);
  for (auto f : all_families()) {
    CAPTURE(token(f));
    const auto m = fit(f, small_overrides(f), train, 1);
    const auto scores = m->predict_scores(test.X);
    const auto labels = m->predict(test.X);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      CHECK(labels[i] == (scores[i] >= m->threshold() ? 1 : 0));
      CHECK(m->predict(test.X.row(i)) == labels[i]);
    }
  }
}

TEST_CASE("fits are deterministic for a fixed seed") {
  const auto train = testutil::blobs(150, 3, 1.0, 5);
  const auto test = testutil::blobs(200, 3, 1.0, 6);
  for (auto f : all_families()) {
    CAPTURE(token(f));
    auto hp = small_overrides(f);
    if (f == Family::RF) hp["max_features"] = 3.0;
    const auto a = fit(f, hp, train, 21);
    const auto b = fit(f, hp, train, 21);
    CHECK(a->predict_scores(test.X) == b->predict_scores(test.X));
  }
}

TEST_CASE("fitted models report their resolved hyperparameters") {
  const auto train = testutil::blobs(100, 2, 2.0, 8);
  const auto m = fit(Family::KNN, {{"n_neighbors", 7.0}}, train, 0);
  CHECK(std::get<double>(m->hyperparameters().at("n_neighbors")) == 7.0);
  CHECK(m->hyperparameters().size() == default_hyperparameters(Family::KNN).size());
}

TEST_CASE("hyperparameter resolution errors") {
  CHECK_THROWS_AS(resolve(Family::LR, {{"penalty", 1.0}}), ConfigError);
  CHECK_THROWS_AS(resolve(Family::MLP, {{"activation", 2.0}}), ConfigError);
  CHECK_THROWS_AS(resolve(Family::SVM, {{"C", std::string("ten")}}), ConfigError);
  const auto train = testutil::blobs(40, 2, 2.0, 8);
  CHECK_THROWS_AS(fit(Family::KNN, {{"n_neighbors", 2.5}}, train, 0), ConfigError);
  CHECK_THROWS_AS(parse_family("xgb"), ConfigError);
}

TEST_CASE("family tokens and labels") {
  CHECK(all_families().size() == 7);
  for (auto f : all_families()) CHECK(parse_family(token(f)) == f);
  CHECK(display_name(Family::MLP) == "ANN");
  CHECK(display_name(Family::GBT) == "XGBoost");
  CHECK(display_name(Family::GNB) == "NB");
  CHECK(uses_scaled_features(Family::SVM));
  CHECK_FALSE(uses_scaled_features(Family::RF));
}

TEST_CASE("tuned hyperparameters") {
  auto num = [](Family f, const char* k) { return std::get<double>(best_hyperparameters(f).at(k)); };
  CHECK(num(Family::LR, "C") == 100.0);
  CHECK(num(Family::KNN, "n_neighbors") == 12.0);
  CHECK(num(Family::SVM, "C") == 10.0);
  CHECK(num(Family::SVM, "gamma") == 0.1);
  CHECK(num(Family::MLP, "alpha") == 0.001);
  CHECK(num(Family::GNB, "var_smoothing") == 0.002);
  CHECK(num(Family::RF, "max_features") == 5.0);
  CHECK(num(Family::RF, "min_samples_leaf") == 8.0);
  CHECK(num(Family::RF, "min_samples_split") == 4.0);
  CHECK(num(Family::GBT, "gamma") == 1.5);
  CHECK(num(Family::GBT, "subsample") == 0.8);
  CHECK(num(Family::GBT, "colsample_bytree") == 0.8);
  CHECK(num(Family::GBT, "max_depth") == 5.0);
}

TEST_CASE("width mismatch at prediction") {
  const auto train = testutil::blobs(60, 2, 2.0, 8);
  const auto m = fit(Family::LR, {}, train, 0);
  const std::vector<double> x{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(m->predict_score(x), DataError);
}
