#include <json.hpp>

#include "shotlab/error.hpp"
#include "shotlab/models.hpp"

namespace shotlab::models {

using nlohmann::json;

namespace {

json matrix_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from(const json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != rows * cols) throw ParseError("matrix data length does not match its shape");
  return Matrix(rows, cols, std::move(data));
}

json trees_json(const std::vector<Tree>& trees) {
  json out = json::array();
  for (const auto& t : trees) {
    json f = json::array(), th = json::array(), l = json::array(), r = json::array(), v = json::array();
    for (const auto& n : t.nodes) {
      f.push_back(n.feature);
      th.push_back(n.threshold);
      l.push_back(n.left);
      r.push_back(n.right);
      v.push_back(n.value);
    }
    out.push_back({{"feature", f}, {"threshold", th}, {"left", l}, {"right", r}, {"value", v}});
  }
  return out;
}

std::vector<Tree> trees_from(const json& j, std::size_t d) {
  std::vector<Tree> out;
  for (const auto& jt : j) {
    const auto f = jt.at("feature").get<std::vector<int>>();
    const auto th = jt.at("threshold").get<std::vector<double>>();
    const auto l = jt.at("left").get<std::vector<int>>();
    const auto r = jt.at("right").get<std::vector<int>>();
    const auto v = jt.at("value").get<std::vector<double>>();
    const std::size_t n = f.size();
    if (n == 0 || th.size() != n || l.size() != n || r.size() != n || v.size() != n) {
      throw ParseError("tree arrays are empty or differ in length");
    }
    Tree t;
    for (std::size_t i = 0; i < n; ++i) {
      if (f[i] >= 0) {
        const auto in_range = [&](int c) { return c > static_cast<int>(i) && c < static_cast<int>(n); };
        if (static_cast<std::size_t>(f[i]) >= d || !in_range(l[i]) || !in_range(r[i])) {
          throw ParseError("tree node " + std::to_string(i) + " has an invalid feature or child index");
        }
      }
      t.nodes.push_back({f[i], th[i], l[i], r[i], v[i]});
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Logistic: return "logistic";
  }
  return "relu";
}

json parameters_json(const Model& m) {
  if (const auto* lr = dynamic_cast<const LogisticModel*>(&m)) {
    return {{"weights", lr->weights()}, {"intercept", lr->intercept()}};
  }
  if (const auto* knn = dynamic_cast<const KnnModel*>(&m)) {
    return {{"k", knn->k()}, {"X", matrix_json(knn->train().X)}, {"y", knn->train().y}};
  }
  if (const auto* svm = dynamic_cast<const SvmModel*>(&m)) {
    return {{"gamma", svm->gamma()},
            {"bias", svm->bias()},
            {"support", matrix_json(svm->support_vectors())},
            {"dual_coef", svm->dual_coef()}};
  }
  if (const auto* mlp = dynamic_cast<const MlpModel*>(&m)) {
    const auto& w = mlp->weights();
    return {{"activation", activation_name(mlp->activation())},
            {"inputs", w.d},
            {"hidden", w.h},
            {"W1", w.W1},
            {"b1", w.b1},
            {"W2", w.W2},
            {"b2", w.b2}};
  }
  if (const auto* nb = dynamic_cast<const GaussianNbModel*>(&m)) {
    return {{"log_prior", nb->log_priors()}, {"mean", matrix_json(nb->means())}, {"var", matrix_json(nb->variances())}};
  }
  if (const auto* rf = dynamic_cast<const RandomForestModel*>(&m)) {
    return {{"trees", trees_json(rf->trees())}};
  }
  if (const auto* gb = dynamic_cast<const GradientBoostingModel*>(&m)) {
    return {{"base_margin", gb->base_margin()}, {"learning_rate", gb->learning_rate()}, {"trees", trees_json(gb->trees())}};
  }
  throw Error("cannot serialize an unknown model type");
}

std::shared_ptr<const Model> model_from(Family f, Hyperparameters hp, std::size_t d, const json& p) {
  switch (f) {
    case Family::LR: {
      auto w = p.at("weights").get<std::vector<double>>();
      if (w.size() != d) throw ParseError("weight count does not match n_features");
      return std::make_shared<LogisticModel>(std::move(hp), std::move(w), p.at("intercept").get<double>(), 0);
    }
    case Family::KNN: {
      LabeledMatrix train{matrix_from(p.at("X")), p.at("y").get<std::vector<int>>()};
      const auto k = p.at("k").get<std::size_t>();
      if (train.X.cols() != d || train.y.size() != train.X.rows() || k == 0 || k > train.size()) {
        throw ParseError("inconsistent nearest-neighbor training set");
      }
      return std::make_shared<KnnModel>(std::move(hp), std::move(train), k);
    }
    case Family::SVM: {
      Matrix sv = matrix_from(p.at("support"));
      auto coef = p.at("dual_coef").get<std::vector<double>>();
      if (coef.size() != sv.rows() || (sv.rows() > 0 && sv.cols() != d)) throw ParseError("inconsistent support vectors");
      if (sv.rows() == 0) sv = Matrix(0, d);
      return std::make_shared<SvmModel>(std::move(hp), std::move(sv), std::move(coef), p.at("bias").get<double>(),
                                        p.at("gamma").get<double>());
    }
    case Family::MLP: {
      MlpWeights w;
      w.d = p.at("inputs").get<std::size_t>();
      w.h = p.at("hidden").get<std::size_t>();
      w.W1 = p.at("W1").get<std::vector<double>>();
      w.b1 = p.at("b1").get<std::vector<double>>();
      w.W2 = p.at("W2").get<std::vector<double>>();
      w.b2 = p.at("b2").get<double>();
      if (w.d != d || w.W1.size() != w.d * w.h || w.b1.size() != w.h || w.W2.size() != w.h) {
        throw ParseError("inconsistent network weight shapes");
      }
      const auto act = parse_activation(p.at("activation").get<std::string>());
      return std::make_shared<MlpModel>(std::move(hp), std::move(w), act, 0);
    }
    case Family::GNB: {
      Matrix mean = matrix_from(p.at("mean"));
      Matrix var = matrix_from(p.at("var"));
      auto prior = p.at("log_prior").get<std::vector<double>>();
      if (mean.rows() != 2 || mean.cols() != d || !(var.rows() == 2 && var.cols() == d) || prior.size() != 2) {
        throw ParseError("inconsistent naive Bayes parameter shapes");
      }
      return std::make_shared<GaussianNbModel>(std::move(hp), std::move(prior), std::move(mean), std::move(var));
    }
    case Family::RF: {
      auto trees = trees_from(p.at("trees"), d);
      if (trees.empty()) throw ParseError("forest has no trees");
      return std::make_shared<RandomForestModel>(std::move(hp), d, std::move(trees));
    }
    case Family::GBT:
      return std::make_shared<GradientBoostingModel>(std::move(hp), d, p.at("base_margin").get<double>(),
                                                     p.at("learning_rate").get<double>(), trees_from(p.at("trees"), d));
  }
  throw ParseError("unhandled model family");
}

}  // namespace

std::vector<double> ModelArtifact::predict_scores(const Matrix& raw) const {
  if (!scaling) return model->predict_scores(raw);
  Matrix z(raw.rows(), raw.cols());
  for (std::size_t r = 0; r < raw.rows(); ++r) {
    for (std::size_t c = 0; c < raw.cols(); ++c) z(r, c) = (raw(r, c) - scaling->mean[c]) / scaling->std[c];
  }
  return model->predict_scores(z);
}

std::vector<int> ModelArtifact::predict(const Matrix& raw) const {
  const auto s = predict_scores(raw);
  std::vector<int> out(s.size());
  const double t = model->threshold();
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] >= t ? 1 : 0;
  return out;
}

std::string serialize(const ModelArtifact& a) {
  if (!a.model) throw Error("cannot serialize an empty model artifact");
  json hp = json::object();
  for (const auto& [k, v] : a.model->hyperparameters()) {
    if (const auto* s = std::get_if<std::string>(&v)) hp[k] = *s;
    else hp[k] = std::get<double>(v);
  }
  json doc{{"format_version", kArtifactFormatVersion},
           {"family", token(a.model->family())},
           {"n_features", a.model->n_features()},
           {"feature_names", a.feature_names},
           {"training_resampler", a.training_resampler},
           {"hyperparameters", hp},
           {"parameters", parameters_json(*a.model)}};
  if (a.scaling) doc["scaling"] = {{"mean", a.scaling->mean}, {"std", a.scaling->std}};
  else doc["scaling"] = nullptr;
  return doc.dump(1) + "\n";
}

ModelArtifact deserialize(std::string_view text) {
  try {
    const json doc = json::parse(text);
    const int version = doc.at("format_version").get<int>();
    if (version != kArtifactFormatVersion) {
      throw ParseError("unsupported model artifact version " + std::to_string(version));
    }
    const Family f = parse_family(doc.at("family").get<std::string>());
    const auto d = doc.at("n_features").get<std::size_t>();
    Hyperparameters hp;
    for (const auto& [k, v] : doc.at("hyperparameters").items()) {
      if (v.is_string()) hp[k] = v.get<std::string>();
      else hp[k] = v.get<double>();
    }
    ModelArtifact a;
    a.model = model_from(f, resolve(f, hp), d, doc.at("parameters"));
    a.feature_names = doc.value("feature_names", std::vector<std::string>{});
    a.training_resampler = doc.value("training_resampler", std::string("none"));
    if (!doc.at("scaling").is_null()) {
      FeatureScaling s{doc.at("scaling").at("mean").get<std::vector<double>>(),
                       doc.at("scaling").at("std").get<std::vector<double>>()};
      if (s.mean.size() != d || s.std.size() != d) throw ParseError("scaling width does not match n_features");
      a.scaling = std::move(s);
    }
    return a;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model artifact: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("malformed model artifact: ") + e.what());
  }
}

}  // namespace shotlab::models
