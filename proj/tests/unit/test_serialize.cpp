#include <doctest.h>

#include "shotlab/error.hpp"
#include "shotlab/models.hpp"
#include "test_util.hpp"

using namespace shotlab;
using namespace shotlab::models;

namespace {

Hyperparameters quick(Family f) {
  switch (f) {
    case Family::RF: return {{"n_estimators", 15.0}};
    case Family::GBT: return {{"n_estimators", 15.0}};
    case Family::MLP: return {{"hidden", 12.0}, {"max_epochs", 20.0}};
    default: return {};
  }
}

}  // namespace

TEST_CASE("every family survives a round trip") {
  const auto train = testutil::blobs(150, 4, 1.0, 2, 3);
  const auto test = testutil::blobs(200, 4, 1.0, 3, 3);
  for (auto f : all_families()) {
    CAPTURE(token(f));
    ModelArtifact a;
    a.model = fit(f, quick(f), train, 5);
    a.feature_names = {"a", "b", "c", "d"};
    a.training_resampler = "smote-enn";
    if (uses_scaled_features(f)) a.scaling = FeatureScaling{{0.1, 0.2, 0.3, 0.4}, {1.5, 2.0, 0.5, 1.0}};
    const auto text = serialize(a);
    const auto b = deserialize(text);
    CHECK(b.model->family() == f);
    CHECK(b.feature_names == a.feature_names);
    CHECK(b.training_resampler == "smote-enn");
    CHECK(b.scaling.has_value() == a.scaling.has_value());
    CHECK(b.model->hyperparameters() == a.model->hyperparameters());
    CHECK(b.predict_scores(test.X) == a.predict_scores(test.X));
    CHECK(b.predict(test.X) == a.predict(test.X));
    CHECK(serialize(b) == text);
  }
}

TEST_CASE("scaling is applied before the model") {
  const auto train = testutil::blobs(80, 2, 2.0, 4);
  ModelArtifact a;
  a.model = fit(Family::LR, {}, train, 0);
  a.scaling = FeatureScaling{{1.0, -1.0}, {2.0, 4.0}};
  Matrix raw(1, 2, std::vector<double>{3.0, 7.0});
  const std::vector<double> z{1.0, 2.0};
  CHECK(a.predict_scores(raw)[0] == a.model->predict_score(z));
}

TEST_CASE("malformed artifacts are parse errors") {
  const auto train = testutil::blobs(80, 2, 2.0, 4);
  ModelArtifact a;
  a.model = fit(Family::GNB, {}, train, 0);
  auto text = serialize(a);
  const auto at = text.find("\"format_version\": 1");
  REQUIRE(at != std::string::npos);
  auto bad = text;
  bad.replace(at, 19, "\"format_version\": 99");
  CHECK_THROWS_AS(deserialize(bad), ParseError);
  CHECK_THROWS_AS(deserialize("{not json"), ParseError);
  CHECK_THROWS_AS(deserialize("{}"), ParseError);
  auto wrong_family = text;
  wrong_family.replace(wrong_family.find("\"gnb\""), 5, "\"qda\"");
  CHECK_THROWS_AS(deserialize(wrong_family), ParseError);
  auto truncated = text.substr(0, text.size() / 2);
  CHECK_THROWS_AS(deserialize(truncated), ParseError);
}
