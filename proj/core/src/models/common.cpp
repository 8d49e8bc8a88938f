#include <cmath>
#include <string>

#include "shotlab/csv.hpp"
#include "shotlab/error.hpp"
#include "shotlab/models.hpp"

namespace shotlab::models {

namespace {

struct FamilyInfo {
  Family family;
  std::string_view token;
  std::string_view display;
  bool scaled;
};

constexpr FamilyInfo kFamilies[] = {
    {Family::LR, "lr", "LR", false},   {Family::KNN, "knn", "KNN", true}, {Family::SVM, "svm", "SVM", true},
    {Family::MLP, "mlp", "ANN", true}, {Family::GNB, "gnb", "NB", true},  {Family::RF, "rf", "RF", false},
    {Family::GBT, "gbt", "XGBoost", false},
};

const FamilyInfo& info(Family f) {
  for (const auto& i : kFamilies) {
    if (i.family == f) return i;
  }
  return kFamilies[0];
}

double number(const Hyperparameters& hp, const std::string& key) { return std::get<double>(hp.at(key)); }
std::string text(const Hyperparameters& hp, const std::string& key) { return std::get<std::string>(hp.at(key)); }

std::size_t count(const Hyperparameters& hp, const std::string& key) {
  const double v = number(hp, key);
  if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError(key + " must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

Family parse_family(std::string_view t) {
  for (const auto& i : kFamilies) {
    if (i.token == t) return i.family;
  }
  throw ConfigError("unknown model family '" + std::string(t) + "' (expected lr|knn|svm|mlp|gnb|rf|gbt)");
}

std::string_view token(Family f) noexcept { return info(f).token; }
std::string_view display_name(Family f) noexcept { return info(f).display; }
bool uses_scaled_features(Family f) noexcept { return info(f).scaled; }

const std::vector<Family>& all_families() {
  static const std::vector<Family> all{Family::LR,  Family::KNN, Family::SVM, Family::MLP,
                                       Family::GNB, Family::RF,  Family::GBT};
  return all;
}

std::string format_param(const ParamValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return csv::format_exact(std::get<double>(v));
}

const Hyperparameters& default_hyperparameters(Family f) {
  static const std::map<Family, Hyperparameters> defaults{
      {Family::LR, {{"C", 1.0}, {"max_iter", 5000.0}, {"tol", 1e-6}}},
      {Family::KNN, {{"n_neighbors", 5.0}}},
      {Family::SVM, {{"C", 1.0}, {"gamma", 0.1}, {"tol", 1e-3}, {"max_updates", 1e6}}},
      {Family::MLP,
       {{"hidden", 100.0},
        {"learning_rate_init", 0.001},
        {"activation", std::string("relu")},
        {"solver", std::string("adam")},
        {"alpha", 0.0001},
        {"batch_size", 200.0},
        {"max_epochs", 300.0},
        {"early_stopping", 1.0},
        {"validation_fraction", 0.1},
        {"n_iter_no_change", 10.0},
        {"tol", 1e-4},
        {"momentum", 0.9}}},
      {Family::GNB, {{"var_smoothing", 1e-9}}},
      {Family::RF,
       {{"n_estimators", 100.0},
        {"max_features", 3.0},
        {"min_samples_leaf", 1.0},
        {"min_samples_split", 2.0},
        {"bootstrap", 1.0}}},
      {Family::GBT,
       {{"gamma", 0.0},
        {"subsample", 1.0},
        {"colsample_bytree", 1.0},
        {"max_depth", 6.0},
        {"n_estimators", 100.0},
        {"learning_rate", 0.1},
        {"lambda", 1.0},
        {"min_child_weight", 1.0}}},
  };
  return defaults.at(f);
}

Hyperparameters resolve(Family f, const Hyperparameters& overrides) {
  Hyperparameters out = default_hyperparameters(f);
  for (const auto& [key, value] : overrides) {
    auto it = out.find(key);
    if (it == out.end()) {
      throw ConfigError("unknown hyperparameter '" + key + "' for " + std::string(token(f)));
    }
    if (it->second.index() != value.index()) {
      throw ConfigError("hyperparameter '" + key + "' for " + std::string(token(f)) + " has the wrong type");
    }
    it->second = value;
  }
  return out;
}

Hyperparameters best_hyperparameters(Family f) {
  switch (f) {
    case Family::LR: return resolve(f, {{"C", 100.0}});
    case Family::KNN: return resolve(f, {{"n_neighbors", 12.0}});
    case Family::SVM: return resolve(f, {{"C", 10.0}, {"gamma", 0.1}});
    case Family::MLP:
      return resolve(f, {{"learning_rate_init", 0.001},
                         {"activation", std::string("relu")},
                         {"solver", std::string("adam")},
                         {"alpha", 0.001}});
    case Family::GNB: return resolve(f, {{"var_smoothing", 0.002}});
    case Family::RF: return resolve(f, {{"max_features", 5.0}, {"min_samples_leaf", 8.0}, {"min_samples_split", 4.0}});
    case Family::GBT:
      return resolve(f, {{"gamma", 1.5}, {"subsample", 0.8}, {"colsample_bytree", 0.8}, {"max_depth", 5.0}});
  }
  throw ConfigError("unhandled model family");
}

void Model::check_width(std::span<const double> x) const {
  if (x.size() != n_features_) {
    throw DataError("model expects " + std::to_string(n_features_) + " features, got " + std::to_string(x.size()));
  }
}

std::vector<double> Model::predict_scores(const Matrix& X) const {
  std::vector<double> out(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) out[r] = predict_score(X.row(r));
  return out;
}

std::vector<int> Model::predict(const Matrix& X) const {
  const auto scores = predict_scores(X);
  const double t = threshold();
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= t ? 1 : 0;
  return out;
}

std::unique_ptr<Model> fit(Family family, const Hyperparameters& overrides, const LabeledMatrix& data,
                           std::uint64_t seed) {
  const Hyperparameters hp = resolve(family, overrides);
  std::unique_ptr<Model> model;
  switch (family) {
    case Family::LR: {
      LogisticParams p;
      p.C = number(hp, "C");
      p.max_iter = static_cast<int>(count(hp, "max_iter"));
      p.tol = number(hp, "tol");
      model = std::make_unique<LogisticModel>(fit_logistic(data, p));
      break;
    }
    case Family::KNN: model = std::make_unique<KnnModel>(fit_knn(data, count(hp, "n_neighbors"))); break;
    case Family::SVM: {
      SvmParams p;
      p.C = number(hp, "C");
      p.gamma = number(hp, "gamma");
      p.tol = number(hp, "tol");
      p.max_updates = static_cast<std::uint64_t>(count(hp, "max_updates"));
      model = std::make_unique<SvmModel>(fit_svm(data, p));
      break;
    }
    case Family::MLP: {
      MlpParams p;
      p.hidden = count(hp, "hidden");
      p.learning_rate = number(hp, "learning_rate_init");
      p.activation = parse_activation(text(hp, "activation"));
      p.solver = parse_solver(text(hp, "solver"));
      p.alpha = number(hp, "alpha");
      p.batch_size = count(hp, "batch_size");
      p.max_epochs = static_cast<int>(count(hp, "max_epochs"));
      p.early_stopping = number(hp, "early_stopping") != 0.0;
      p.validation_fraction = number(hp, "validation_fraction");
      p.n_iter_no_change = static_cast<int>(count(hp, "n_iter_no_change"));
      p.tol = number(hp, "tol");
      p.momentum = number(hp, "momentum");
      p.seed = seed;
      model = std::make_unique<MlpModel>(fit_mlp(data, p));
      break;
    }
    case Family::GNB:
      model = std::make_unique<GaussianNbModel>(fit_gaussian_nb(data, number(hp, "var_smoothing")));
      break;
    case Family::RF: {
      ForestParams p;
      p.n_trees = count(hp, "n_estimators");
      p.max_features = count(hp, "max_features");
      p.min_samples_leaf = count(hp, "min_samples_leaf");
      p.min_samples_split = count(hp, "min_samples_split");
      p.bootstrap = number(hp, "bootstrap") != 0.0;
      p.seed = seed;
      model = std::make_unique<RandomForestModel>(fit_random_forest(data, p));
      break;
    }
    case Family::GBT: {
      BoostingParams p;
      p.gamma = number(hp, "gamma");
      p.subsample = number(hp, "subsample");
      p.colsample = number(hp, "colsample_bytree");
      p.max_depth = static_cast<int>(count(hp, "max_depth"));
      p.n_rounds = static_cast<int>(count(hp, "n_estimators"));
      p.learning_rate = number(hp, "learning_rate");
      p.lambda = number(hp, "lambda");
      p.min_child_weight = number(hp, "min_child_weight");
      p.seed = seed;
      model = std::make_unique<GradientBoostingModel>(fit_gradient_boosting(data, p));
      break;
    }
  }
  if (!model) throw ConfigError("unhandled model family");
  model->set_hyperparameters(hp);
  return model;
}

}  // namespace shotlab::models
