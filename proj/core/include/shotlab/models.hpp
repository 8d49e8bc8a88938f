#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "shotlab/matrix.hpp"

namespace shotlab::models {

enum class Family { LR, KNN, SVM, MLP, GNB, RF, GBT };

/// Tokens: lr, knn, svm, mlp, gnb, rf, gbt.
Family parse_family(std::string_view token);
std::string_view token(Family f) noexcept;
/// Report label (LR, KNN, SVM, ANN, NB, RF, XGBoost).
std::string_view display_name(Family f) noexcept;
const std::vector<Family>& all_families();

/// Whether the family is trained on standardized features.
bool uses_scaled_features(Family f) noexcept;

using ParamValue = std::variant<double, std::string>;
using Hyperparameters = std::map<std::string, ParamValue>;

std::string format_param(const ParamValue& v);

/// Every hyperparameter a family accepts, with its default.
const Hyperparameters& default_hyperparameters(Family f);
/// Defaults overridden by `overrides`. Throws ConfigError for an unknown key
/// or a value of the wrong type.
Hyperparameters resolve(Family f, const Hyperparameters& overrides);
/// The tuned values used by the fixed-best grid mode.
Hyperparameters best_hyperparameters(Family f);

class Model {
 public:
  virtual ~Model() = default;

  virtual Family family() const noexcept = 0;
  virtual double predict_score(std::span<const double> x) const = 0;
  /// predict(x) == 1 iff predict_score(x) >= threshold().
  virtual double threshold() const noexcept = 0;

  virtual std::vector<double> predict_scores(const Matrix& X) const;
  int predict(std::span<const double> x) const { return predict_score(x) >= threshold() ? 1 : 0; }
  std::vector<int> predict(const Matrix& X) const;

  std::size_t n_features() const noexcept { return n_features_; }
  const Hyperparameters& hyperparameters() const noexcept { return hyperparameters_; }
  void set_hyperparameters(Hyperparameters hp) { hyperparameters_ = std::move(hp); }

 protected:
  Model(Hyperparameters hp, std::size_t d) : hyperparameters_(std::move(hp)), n_features_(d) {}
  void check_width(std::span<const double> x) const;

  Hyperparameters hyperparameters_;
  std::size_t n_features_ = 0;
};

/// Fits `family` on `data` after resolving `hp` against the defaults.
std::unique_ptr<Model> fit(Family family, const Hyperparameters& hp, const LabeledMatrix& data, std::uint64_t seed);

// ---------------------------------------------------------------- logistic

struct LogisticParams {
  double C = 100.0;
  int max_iter = 5000;
  double tol = 1e-6;
};

class LogisticModel final : public Model {
 public:
  LogisticModel(Hyperparameters hp, std::vector<double> w, double b, int iterations);
  Family family() const noexcept override { return Family::LR; }
  double predict_score(std::span<const double> x) const override;
  double threshold() const noexcept override { return 0.5; }
  double decision(std::span<const double> x) const;

  const std::vector<double>& weights() const noexcept { return w_; }
  double intercept() const noexcept { return b_; }
  int iterations() const noexcept { return iterations_; }

 private:
  std::vector<double> w_;
  double b_;
  int iterations_;
};

/// Mean log-loss plus ||w||^2 / (2 C n). Writes the gradient when grad_w is
/// non-empty.
double logistic_objective(const Matrix& X, std::span<const int> y, std::span<const double> w, double b, double C,
                          std::span<double> grad_w, double* grad_b);

/// Gradient descent in coordinates scaled by each feature's spread, with
/// backtracking; stops when the scaled gradient's max-norm drops below tol.
LogisticModel fit_logistic(const LabeledMatrix& data, const LogisticParams& p);

// --------------------------------------------------------------------- knn

class KnnModel final : public Model {
 public:
  KnnModel(Hyperparameters hp, LabeledMatrix train, std::size_t k);
  Family family() const noexcept override { return Family::KNN; }
  /// Fraction of the k neighbors labeled 1.
  double predict_score(std::span<const double> x) const override;
  /// Strict majority: (floor(k/2) + 1) / k.
  double threshold() const noexcept override;
  std::vector<double> predict_scores(const Matrix& X) const override;

  std::size_t k() const noexcept { return k_; }
  const LabeledMatrix& train() const noexcept { return train_; }

 private:
  LabeledMatrix train_;
  std::size_t k_;
};

KnnModel fit_knn(const LabeledMatrix& data, std::size_t k);

// --------------------------------------------------------------------- svm

struct SvmParams {
  double C = 10.0;
  double gamma = 0.1;
  double tol = 1e-3;
  std::uint64_t max_updates = 1'000'000;
};

class SvmModel final : public Model {
 public:
  SvmModel(Hyperparameters hp, Matrix support, std::vector<double> coef, double b, double gamma);
  Family family() const noexcept override { return Family::SVM; }
  /// Decision value sum_i alpha_i y_i K(x_i, x) + b.
  double predict_score(std::span<const double> x) const override;
  double threshold() const noexcept override { return 0.0; }

  const Matrix& support_vectors() const noexcept { return support_; }
  const std::vector<double>& dual_coef() const noexcept { return coef_; }
  double bias() const noexcept { return b_; }
  double gamma() const noexcept { return gamma_; }

  /// Training-time diagnostics; not serialized.
  std::vector<double> alpha;  // one per training row
  std::uint64_t updates = 0;

 private:
  Matrix support_;
  std::vector<double> coef_;
  double b_;
  double gamma_;
};

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) noexcept;

/// Soft-margin dual by SMO with second-order working-set selection. Throws
/// ConvergenceError when max_updates pair updates do not reach tol.
SvmModel fit_svm(const LabeledMatrix& data, const SvmParams& p);

// --------------------------------------------------------------------- mlp

enum class Activation { Relu, Tanh, Logistic };
enum class Solver { Adam, Sgd };

Activation parse_activation(std::string_view s);
Solver parse_solver(std::string_view s);

struct MlpParams {
  std::size_t hidden = 100;
  double learning_rate = 0.001;
  double alpha = 0.001;
  Activation activation = Activation::Relu;
  Solver solver = Solver::Adam;
  std::size_t batch_size = 200;
  int max_epochs = 300;
  bool early_stopping = true;
  double validation_fraction = 0.1;
  int n_iter_no_change = 10;
  double tol = 1e-4;
  double momentum = 0.9;
  std::uint64_t seed = 0;
};

/// One hidden layer, sigmoid output.
struct MlpWeights {
  std::size_t d = 0;
  std::size_t h = 0;
  std::vector<double> W1;  // d x h, row-major
  std::vector<double> b1;  // h
  std::vector<double> W2;  // h
  double b2 = 0.0;

  std::size_t size() const noexcept { return W1.size() + b1.size() + W2.size() + 1; }
};

/// Mean log-loss over the rows plus alpha / (2 n) times the squared weights
/// (biases excluded). Writes the gradient into `grad` when given.
double mlp_objective(const MlpWeights& w, Activation act, const Matrix& X, std::span<const int> y, double alpha,
                     MlpWeights* grad);

class MlpModel final : public Model {
 public:
  MlpModel(Hyperparameters hp, MlpWeights w, Activation act, int epochs);
  Family family() const noexcept override { return Family::MLP; }
  double predict_score(std::span<const double> x) const override;
  double threshold() const noexcept override { return 0.5; }

  const MlpWeights& weights() const noexcept { return w_; }
  Activation activation() const noexcept { return act_; }
  int epochs() const noexcept { return epochs_; }

 private:
  MlpWeights w_;
  Activation act_;
  int epochs_;
};

MlpModel fit_mlp(const LabeledMatrix& data, const MlpParams& p);

// --------------------------------------------------------------------- gnb

class GaussianNbModel final : public Model {
 public:
  GaussianNbModel(Hyperparameters hp, std::vector<double> log_prior, Matrix mean, Matrix var);
  Family family() const noexcept override { return Family::GNB; }
  /// Posterior probability of class 1.
  double predict_score(std::span<const double> x) const override;
  double threshold() const noexcept override { return 0.5; }
  /// Unnormalized log-posterior of `label`.
  double joint_log_likelihood(std::span<const double> x, int label) const;

  const Matrix& means() const noexcept { return mean_; }
  const Matrix& variances() const noexcept { return var_; }
  const std::vector<double>& log_priors() const noexcept { return log_prior_; }

 private:
  std::vector<double> log_prior_;
  Matrix mean_;  // 2 x d
  Matrix var_;   // 2 x d, smoothed
};

GaussianNbModel fit_gaussian_nb(const LabeledMatrix& data, double var_smoothing);

// ------------------------------------------------------------------- trees

/// Flattened binary tree. Internal nodes send x[feature] <= threshold left.
struct Tree {
  struct Node {
    int feature = -1;  // -1 for a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf: class-1 fraction (forest) or weight (boosting)
  };
  std::vector<Node> nodes;

  double evaluate(std::span<const double> x) const noexcept;
  std::size_t split_count() const noexcept;
};

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t max_features = 5;
  std::size_t min_samples_leaf = 8;
  std::size_t min_samples_split = 4;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

class RandomForestModel final : public Model {
 public:
  RandomForestModel(Hyperparameters hp, std::size_t d, std::vector<Tree> trees);
  Family family() const noexcept override { return Family::RF; }
  /// Fraction of trees voting 1.
  double predict_score(std::span<const double> x) const override;
  double threshold() const noexcept override { return 0.5; }
  std::size_t votes_for_kill(std::span<const double> x) const;

  const std::vector<Tree>& trees() const noexcept { return trees_; }

 private:
  std::vector<Tree> trees_;
};

/// One Gini tree over `rows` of data (rows may repeat).
Tree grow_gini_tree(const LabeledMatrix& data, std::span<const std::size_t> rows, const ForestParams& p,
                    std::uint64_t seed);

RandomForestModel fit_random_forest(const LabeledMatrix& data, const ForestParams& p);

struct BoostingParams {
  double gamma = 1.5;
  double subsample = 0.8;
  double colsample = 0.8;
  int max_depth = 5;
  int n_rounds = 100;
  double learning_rate = 0.1;
  double lambda = 1.0;
  double min_child_weight = 1.0;
  std::uint64_t seed = 0;
};

class GradientBoostingModel final : public Model {
 public:
  GradientBoostingModel(Hyperparameters hp, std::size_t d, double base_margin, double learning_rate,
                        std::vector<Tree> trees);
  Family family() const noexcept override { return Family::GBT; }
  /// Probability of class 1.
  double predict_score(std::span<const double> x) const override;
  double threshold() const noexcept override { return 0.5; }
  double margin(std::span<const double> x) const;

  double base_margin() const noexcept { return base_margin_; }
  double learning_rate() const noexcept { return learning_rate_; }
  const std::vector<Tree>& trees() const noexcept { return trees_; }

 private:
  double base_margin_;
  double learning_rate_;
  std::vector<Tree> trees_;
};

/// Second-order boosting on log-loss. Throws TrainingError for single-class
/// labels.
GradientBoostingModel fit_gradient_boosting(const LabeledMatrix& data, const BoostingParams& p);

/// One regression tree on gradients g and Hessians h of `rows`, using only
/// `features`.
Tree grow_boosting_tree(const Matrix& X, std::span<const double> g, std::span<const double> h,
                        std::span<const std::size_t> rows, std::span<const std::size_t> features,
                        const BoostingParams& p);

// ----------------------------------------------------------- serialization

inline constexpr int kArtifactFormatVersion = 1;

/// Standardization applied before the model, if any.
struct FeatureScaling {
  std::vector<double> mean;
  std::vector<double> std;
};

struct ModelArtifact {
  std::shared_ptr<const Model> model;
  std::optional<FeatureScaling> scaling;
  std::vector<std::string> feature_names;
  /// Token of the resampler applied to the training rows.
  std::string training_resampler = "none";

  /// Scores for raw-unit rows; scaling is applied first when present.
  std::vector<double> predict_scores(const Matrix& raw) const;
  std::vector<int> predict(const Matrix& raw) const;
};

std::string serialize(const ModelArtifact& artifact);
/// Throws ParseError for malformed documents or an unsupported version.
ModelArtifact deserialize(std::string_view json_text);

// ------------------------------------------------------------- grid search

/// Axes expand row-major: the first axis varies slowest.
struct GridSpec {
  Family family = Family::LR;
  std::vector<std::pair<std::string, std::vector<ParamValue>>> axes;

  std::vector<Hyperparameters> points() const;
  std::size_t size() const noexcept;
};

enum class GridMode { Full, Reduced, FixedBest };

GridMode parse_grid_mode(std::string_view s);
std::string_view to_string(GridMode m) noexcept;

/// Candidate lists searched by the original study.
GridSpec paper_grid(Family f);
/// Small subsets of paper_grid that contain the tuned point.
GridSpec reduced_grid(Family f);
/// Single point at best_hyperparameters.
GridSpec fixed_grid(Family f);
GridSpec grid_for(Family f, GridMode mode);

/// Per-fold training-set transformation (resampling). Receives the fold's
/// training rows and a seed, returns the rows to fit on.
using FoldTransform = std::function<LabeledMatrix(const LabeledMatrix&, std::uint64_t)>;

struct GridResult {
  std::vector<Hyperparameters> points;
  std::vector<std::vector<double>> fold_f1;  // points x k
  std::vector<double> mean_f1;               // -inf for a point whose fit failed
  std::size_t best = 0;

  const Hyperparameters& best_point() const { return points.at(best); }
};

/// Seeds used by grid_search_cv for fold assignment, per-fold resampling and
/// fitting.
std::uint64_t fold_seed(std::uint64_t seed);
std::uint64_t fold_transform_seed(std::uint64_t seed, std::size_t fold);
std::uint64_t fold_fit_seed(std::uint64_t seed, std::size_t fold);

/// k-fold cross-validated F1 for every grid point; the first maximum wins.
/// Grid points are spread over `jobs` threads.
GridResult grid_search_cv(const GridSpec& grid, const LabeledMatrix& train, std::size_t k, std::uint64_t seed,
                          const FoldTransform& transform = {}, std::size_t jobs = 1);

}  // namespace shotlab::models
