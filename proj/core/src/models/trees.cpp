#include <algorithm>
#include <cmath>
#include <numeric>

#include "internal.hpp"
#include "shotlab/models.hpp"
#include "shotlab/rng.hpp"

namespace shotlab::models {

double Tree::evaluate(std::span<const double> x) const noexcept {
  int i = 0;
  while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
    const auto& n = nodes[static_cast<std::size_t>(i)];
    i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(i)].value;
}

std::size_t Tree::split_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.feature >= 0; }));
}

namespace {

/// Midpoint that still separates a < b after rounding.
double midpoint(double a, double b) noexcept {
  const double m = a + (b - a) / 2.0;
  return m < b ? m : a;
}

/// First `count` entries of a random permutation of 0..d-1.
std::vector<std::size_t> partial_permutation(std::size_t d, std::size_t count, CounterRng& rng) {
  std::vector<std::size_t> f(d);
  std::iota(f.begin(), f.end(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(d - i));
    std::swap(f[i], f[j]);
  }
  f.resize(count);
  return f;
}

struct GiniSplit {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted child impurity, n_l * gini_l + n_r * gini_r
};

double weighted_gini(double n, double ones) noexcept {
  if (n <= 0.0) return 0.0;
  const double p = ones / n;
  return n * 2.0 * p * (1.0 - p);
}

}  // namespace

Tree grow_gini_tree(const LabeledMatrix& data, std::span<const std::size_t> rows, const ForestParams& p,
                    std::uint64_t seed) {
  CounterRng rng(seed);
  const std::size_t d = data.X.cols();
  Tree tree;
  struct Pending {
    std::vector<std::size_t> rows;
    int node;
  };
  std::vector<Pending> stack;
  tree.nodes.push_back({});
  stack.push_back({{rows.begin(), rows.end()}, 0});
  std::vector<std::pair<double, int>> sorted;
  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();
    const double n = static_cast<double>(cur.rows.size());
    double ones = 0.0;
    for (auto r : cur.rows) ones += data.y[r];
    auto& node = tree.nodes[static_cast<std::size_t>(cur.node)];
    node.value = n > 0.0 ? ones / n : 0.0;
    if (ones == 0.0 || ones == n || cur.rows.size() < p.min_samples_split ||
        cur.rows.size() < 2 * p.min_samples_leaf) {
      continue;
    }
    const double parent = weighted_gini(n, ones);
    GiniSplit best;
    best.impurity = parent - 1e-12 * n;
    for (auto f : partial_permutation(d, p.max_features, rng)) {
      sorted.clear();
      for (auto r : cur.rows) sorted.emplace_back(data.X(r, f), data.y[r]);
      std::sort(sorted.begin(), sorted.end());
      double left_ones = 0.0;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        left_ones += sorted[i].second;
        const std::size_t nl = i + 1;
        const std::size_t nr = sorted.size() - nl;
        if (sorted[i].first == sorted[i + 1].first) continue;
        if (nl < p.min_samples_leaf || nr < p.min_samples_leaf) continue;
        const double imp = weighted_gini(static_cast<double>(nl), left_ones) +
                           weighted_gini(static_cast<double>(nr), ones - left_ones);
        if (imp < best.impurity) {
          best = {static_cast<int>(f), midpoint(sorted[i].first, sorted[i + 1].first), imp};
        }
      }
    }
    if (best.feature < 0) continue;
    Pending left{{}, static_cast<int>(tree.nodes.size())};
    Pending right{{}, static_cast<int>(tree.nodes.size() + 1)};
    for (auto r : cur.rows) {
      (data.X(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).rows.push_back(r);
    }
    auto& split = tree.nodes[static_cast<std::size_t>(cur.node)];
    split.feature = best.feature;
    split.threshold = best.threshold;
    split.left = left.node;
    split.right = right.node;
    tree.nodes.push_back({});
    tree.nodes.push_back({});
    stack.push_back(std::move(right));
    stack.push_back(std::move(left));
  }
  return tree;
}

RandomForestModel::RandomForestModel(Hyperparameters hp, std::size_t d, std::vector<Tree> trees)
    : Model(std::move(hp), d), trees_(std::move(trees)) {}

std::size_t RandomForestModel::votes_for_kill(std::span<const double> x) const {
  check_width(x);
  std::size_t votes = 0;
  for (const auto& t : trees_) votes += t.evaluate(x) > 0.5 ? 1 : 0;
  return votes;
}

double RandomForestModel::predict_score(std::span<const double> x) const {
  return static_cast<double>(votes_for_kill(x)) / static_cast<double>(trees_.size());
}

RandomForestModel fit_random_forest(const LabeledMatrix& data, const ForestParams& p) {
  detail::require_fit_data(data, "random forest");
  const std::size_t d = data.X.cols();
  if (p.max_features == 0 || p.max_features > d) {
    throw ConfigError("random forest: max_features=" + std::to_string(p.max_features) + " but there are " +
                      std::to_string(d) + " features");
  }
  if (p.n_trees == 0) throw ConfigError("random forest: n_estimators must be positive");
  const std::size_t n = data.size();
  CounterRng root(p.seed);
  std::vector<Tree> trees;
  trees.reserve(p.n_trees);
  std::vector<std::size_t> rows(n);
  for (std::size_t t = 0; t < p.n_trees; ++t) {
    CounterRng rng = root.split(t);
    if (p.bootstrap) {
      for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    trees.push_back(grow_gini_tree(data, rows, p, rng.next()));
  }
  Hyperparameters hp{{"n_estimators", static_cast<double>(p.n_trees)},
                     {"max_features", static_cast<double>(p.max_features)},
                     {"min_samples_leaf", static_cast<double>(p.min_samples_leaf)},
                     {"min_samples_split", static_cast<double>(p.min_samples_split)},
                     {"bootstrap", p.bootstrap ? 1.0 : 0.0}};
  return RandomForestModel(std::move(hp), d, std::move(trees));
}

// ----------------------------------------------------------------- boosting

Tree grow_boosting_tree(const Matrix& X, std::span<const double> g, std::span<const double> h,
                        std::span<const std::size_t> rows, std::span<const std::size_t> features,
                        const BoostingParams& p) {
  Tree tree;
  struct Pending {
    std::vector<std::size_t> rows;
    int node;
    int depth;
  };
  std::vector<Pending> stack;
  tree.nodes.push_back({});
  stack.push_back({{rows.begin(), rows.end()}, 0, 0});
  struct Entry {
    double x;
    double g;
    double h;
  };
  std::vector<Entry> sorted;
  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();
    double G = 0.0;
    double H = 0.0;
    for (auto r : cur.rows) {
      G += g[r];
      H += h[r];
    }
    tree.nodes[static_cast<std::size_t>(cur.node)].value = -G / (H + p.lambda);
    if (cur.depth >= p.max_depth) continue;
    const double parent_score = G * G / (H + p.lambda);
    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    for (auto f : features) {
      sorted.clear();
      for (auto r : cur.rows) sorted.push_back({X(r, f), g[r], h[r]});
      std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) { return a.x < b.x; });
      double GL = 0.0;
      double HL = 0.0;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        GL += sorted[i].g;
        HL += sorted[i].h;
        if (sorted[i].x == sorted[i + 1].x) continue;
        const double GR = G - GL;
        const double HR = H - HL;
        if (HL < p.min_child_weight || HR < p.min_child_weight) continue;
        const double gain =
            0.5 * (GL * GL / (HL + p.lambda) + GR * GR / (HR + p.lambda) - parent_score) - p.gamma;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = midpoint(sorted[i].x, sorted[i + 1].x);
        }
      }
    }
    if (best_feature < 0) continue;
    Pending left{{}, static_cast<int>(tree.nodes.size()), cur.depth + 1};
    Pending right{{}, static_cast<int>(tree.nodes.size() + 1), cur.depth + 1};
    for (auto r : cur.rows) {
      (X(r, static_cast<std::size_t>(best_feature)) <= best_threshold ? left : right).rows.push_back(r);
    }
    auto& split = tree.nodes[static_cast<std::size_t>(cur.node)];
    split.feature = best_feature;
    split.threshold = best_threshold;
    split.left = left.node;
    split.right = right.node;
    tree.nodes.push_back({});
    tree.nodes.push_back({});
    stack.push_back(std::move(right));
    stack.push_back(std::move(left));
  }
  return tree;
}

GradientBoostingModel::GradientBoostingModel(Hyperparameters hp, std::size_t d, double base_margin,
                                             double learning_rate, std::vector<Tree> trees)
    : Model(std::move(hp), d), base_margin_(base_margin), learning_rate_(learning_rate), trees_(std::move(trees)) {}

double GradientBoostingModel::margin(std::span<const double> x) const {
  check_width(x);
  double m = base_margin_;
  for (const auto& t : trees_) m += learning_rate_ * t.evaluate(x);
  return m;
}

double GradientBoostingModel::predict_score(std::span<const double> x) const { return detail::sigmoid(margin(x)); }

GradientBoostingModel fit_gradient_boosting(const LabeledMatrix& data, const BoostingParams& p) {
  detail::require_fit_data(data, "gradient boosting");
  const std::size_t n = data.size();
  const std::size_t d = data.X.cols();
  if (n < 10) throw SizeError("gradient boosting needs at least 10 rows, got " + std::to_string(n));
  if (!detail::has_both_classes(data)) throw TrainingError("gradient boosting needs both classes");
  if (!(p.subsample > 0.0 && p.subsample <= 1.0) || !(p.colsample > 0.0 && p.colsample <= 1.0)) {
    throw ConfigError("gradient boosting: subsample and colsample_bytree must lie in (0, 1]");
  }
  double prior = 0.0;
  for (int v : data.y) prior += v;
  prior /= static_cast<double>(n);
  const double base = std::log(prior / (1.0 - prior));

  const auto n_rows = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(p.subsample * static_cast<double>(n))));
  const auto n_cols = std::max<std::size_t>(1, static_cast<std::size_t>(p.colsample * static_cast<double>(d)));
  CounterRng root(p.seed);
  std::vector<double> margin(n, base), g(n), h(n);
  std::vector<Tree> trees;
  for (int round = 0; round < p.n_rounds; ++round) {
    CounterRng rng = root.split(static_cast<std::uint64_t>(round));
    for (std::size_t i = 0; i < n; ++i) {
      const double q = detail::sigmoid(margin[i]);
      g[i] = q - data.y[i];
      h[i] = q * (1.0 - q);
    }
    std::vector<std::size_t> rows;
    if (n_rows < n) {
      rows = partial_permutation(n, n_rows, rng);
      std::sort(rows.begin(), rows.end());
    } else {
      rows.resize(n);
      std::iota(rows.begin(), rows.end(), 0);
    }
    auto cols = partial_permutation(d, n_cols, rng);
    std::sort(cols.begin(), cols.end());
    Tree t = grow_boosting_tree(data.X, g, h, rows, cols, p);
    for (std::size_t i = 0; i < n; ++i) margin[i] += p.learning_rate * t.evaluate(data.X.row(i));
    trees.push_back(std::move(t));
  }
  Hyperparameters hp{{"gamma", p.gamma},
                     {"subsample", p.subsample},
                     {"colsample_bytree", p.colsample},
                     {"max_depth", static_cast<double>(p.max_depth)},
                     {"n_estimators", static_cast<double>(p.n_rounds)},
                     {"learning_rate", p.learning_rate},
                     {"lambda", p.lambda},
                     {"min_child_weight", p.min_child_weight}};
  return GradientBoostingModel(std::move(hp), d, base, p.learning_rate, std::move(trees));
}

}  // namespace shotlab::models
