#include <cmath>
#include <limits>

#include "shotlab/dataset.hpp"
#include "shotlab/error.hpp"
#include "shotlab/log.hpp"
#include "shotlab/metrics.hpp"
#include "shotlab/models.hpp"
#include "shotlab/parallel.hpp"
#include "shotlab/rng.hpp"

namespace shotlab::models {

namespace {

std::vector<ParamValue> numbers(std::initializer_list<double> v) { return {v.begin(), v.end()}; }

std::vector<ParamValue> words(std::initializer_list<const char*> v) {
  std::vector<ParamValue> out;
  for (const char* s : v) out.emplace_back(std::string(s));
  return out;
}

std::vector<ParamValue> integer_range(int lo, int hi) {
  std::vector<ParamValue> out;
  for (int i = lo; i <= hi; ++i) out.emplace_back(static_cast<double>(i));
  return out;
}

/// 100 values evenly spaced in log10 from 0 down to -9.
std::vector<ParamValue> smoothing_grid() {
  std::vector<ParamValue> out;
  for (int i = 0; i < 100; ++i) out.emplace_back(std::pow(10.0, -9.0 * i / 99.0));
  return out;
}

}  // namespace

std::vector<Hyperparameters> GridSpec::points() const {
  std::vector<Hyperparameters> out{Hyperparameters{}};
  for (const auto& [name, values] : axes) {
    std::vector<Hyperparameters> next;
    next.reserve(out.size() * values.size());
    for (const auto& base : out) {
      for (const auto& v : values) {
        Hyperparameters p = base;
        p[name] = v;
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::size_t GridSpec::size() const noexcept {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.second.size();
  return n;
}

GridMode parse_grid_mode(std::string_view s) {
  if (s == "full") return GridMode::Full;
  if (s == "reduced") return GridMode::Reduced;
  if (s == "fixed-best") return GridMode::FixedBest;
  throw ConfigError("unknown grid mode '" + std::string(s) + "' (expected full|reduced|fixed-best)");
}

std::string_view to_string(GridMode m) noexcept {
  switch (m) {
    case GridMode::Full: return "full";
    case GridMode::Reduced: return "reduced";
    case GridMode::FixedBest: return "fixed-best";
  }
  return "full";
}

GridSpec paper_grid(Family f) {
  switch (f) {
    case Family::LR: return {f, {{"C", numbers({1e-3, 1e-2, 1e-1, 1e0, 1e1, 1e2, 1e3})}}};
    case Family::KNN: return {f, {{"n_neighbors", integer_range(1, 50)}}};
    case Family::SVM:
      return {f, {{"C", numbers({0.1, 1, 10, 100, 1000})}, {"gamma", numbers({1, 0.1, 0.01, 0.001, 0.0001})}}};
    case Family::MLP:
      return {f,
              {{"learning_rate_init", numbers({0.001, 0.01, 0.1})},
               {"activation", words({"logistic", "tanh", "relu"})},
               {"solver", words({"sgd", "adam"})},
               {"alpha", numbers({0.0001, 0.001})}}};
    case Family::GNB: return {f, {{"var_smoothing", smoothing_grid()}}};
    case Family::RF:
      return {f,
              {{"max_features", integer_range(2, 10)},
               {"min_samples_leaf", numbers({3, 5, 8})},
               {"min_samples_split", numbers({4, 8, 12})}}};
    case Family::GBT:
      return {f,
              {{"gamma", numbers({0.5, 1, 1.5})},
               {"subsample", numbers({0.6, 0.8})},
               {"colsample_bytree", numbers({0.6, 0.8, 1.0})},
               {"max_depth", numbers({3, 4, 5})}}};
  }
  throw ConfigError("unhandled model family");
}

GridSpec reduced_grid(Family f) {
  switch (f) {
    case Family::LR: return {f, {{"C", numbers({1, 100})}}};
    case Family::KNN: return {f, {{"n_neighbors", numbers({5, 12})}}};
    case Family::SVM: return {f, {{"C", numbers({1, 10})}, {"gamma", numbers({0.1, 0.01})}}};
    case Family::MLP:
      return {f, {{"learning_rate_init", numbers({0.001, 0.01})}, {"activation", words({"relu"})},
                  {"solver", words({"adam"})}, {"alpha", numbers({0.001})}}};
    case Family::GNB: return {f, {{"var_smoothing", numbers({1e-9, 0.002})}}};
    case Family::RF:
      return {f, {{"max_features", numbers({3, 5})}, {"min_samples_leaf", numbers({8})}, {"min_samples_split", numbers({4})}}};
    case Family::GBT:
      return {f, {{"gamma", numbers({1, 1.5})}, {"subsample", numbers({0.8})}, {"colsample_bytree", numbers({0.8})},
                  {"max_depth", numbers({3, 5})}}};
  }
  throw ConfigError("unhandled model family");
}

GridSpec fixed_grid(Family f) {
  GridSpec g{f, {}};
  const auto best = best_hyperparameters(f);
  const auto& defaults = default_hyperparameters(f);
  for (const auto& [k, v] : best) {
    if (defaults.at(k) != v) g.axes.push_back({k, {v}});
  }
  return g;
}

GridSpec grid_for(Family f, GridMode mode) {
  switch (mode) {
    case GridMode::Full: return paper_grid(f);
    case GridMode::Reduced: return reduced_grid(f);
    case GridMode::FixedBest: return fixed_grid(f);
  }
  return fixed_grid(f);
}

std::uint64_t fold_seed(std::uint64_t seed) { return CounterRng(seed).split(0x666f6c64).next(); }
std::uint64_t fold_transform_seed(std::uint64_t seed, std::size_t fold) {
  return CounterRng(seed).split(0x7265736d).split(fold).next();
}
std::uint64_t fold_fit_seed(std::uint64_t seed, std::size_t fold) {
  return CounterRng(seed).split(0x666974).split(fold).next();
}

GridResult grid_search_cv(const GridSpec& grid, const LabeledMatrix& train, std::size_t k, std::uint64_t seed,
                          const FoldTransform& transform, std::size_t jobs) {
  GridResult out;
  out.points = grid.points();
  if (out.points.empty() || grid.size() == 0) throw ConfigError("grid search needs at least one grid point");
  const auto folds = dataset::kfold_indices(train.size(), k, fold_seed(seed));

  // Fold training sets do not depend on the grid point, so build them once.
  std::vector<LabeledMatrix> fit_sets(k);
  std::vector<LabeledMatrix> val_sets(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<bool> in_val(train.size(), false);
    for (auto i : folds[f]) in_val[i] = true;
    std::vector<std::size_t> tr;
    for (std::size_t i = 0; i < train.size(); ++i) {
      if (!in_val[i]) tr.push_back(i);
    }
    fit_sets[f] = train.subset(tr);
    if (transform) fit_sets[f] = transform(fit_sets[f], fold_transform_seed(seed, f));
    val_sets[f] = train.subset(folds[f]);
  }

  out.fold_f1.assign(out.points.size(), std::vector<double>(k, 0.0));
  out.mean_f1.assign(out.points.size(), 0.0);
  parallel_for(out.points.size(), jobs, [&](std::size_t g) {
    double sum = 0.0;
    bool failed = false;
    for (std::size_t f = 0; f < k && !failed; ++f) {
      try {
        const auto model = fit(grid.family, out.points[g], fit_sets[f], fold_fit_seed(seed, f));
        const auto pred = model->predict(val_sets[f].X);
        const auto c = metrics::confusion_counts(val_sets[f].y, pred);
        out.fold_f1[g][f] = metrics::from_confusion(c).f1;
        sum += out.fold_f1[g][f];
      } catch (const ConvergenceError& e) {
        log::warn(std::string("grid point skipped: ") + e.what());
        failed = true;
      } catch (const SizeError& e) {
        log::warn(std::string("grid point skipped: ") + e.what());
        failed = true;
      }
    }
    out.mean_f1[g] = failed ? -std::numeric_limits<double>::infinity() : sum / static_cast<double>(k);
  });
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < out.points.size(); ++g) {
    if (out.mean_f1[g] > best) {
      best = out.mean_f1[g];
      out.best = g;
    }
  }
  if (!std::isfinite(best)) throw TrainingError("every grid point failed to fit");
  return out;
}

}  // namespace shotlab::models
