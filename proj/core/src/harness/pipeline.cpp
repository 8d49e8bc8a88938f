#include <cmath>
#include <fstream>

#include "shotlab/csv.hpp"
#include "shotlab/error.hpp"
#include "shotlab/harness.hpp"
#include "shotlab/log.hpp"
#include "shotlab/parallel.hpp"

namespace shotlab::harness {

namespace fs = std::filesystem;

namespace {

// Bumped when a stage's output format changes so cached artifacts re-run.
constexpr std::string_view kPipelineVersion = "shotlab-pipeline/1";

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

std::string relative_key(const fs::path& root, const fs::path& p) { return p.lexically_relative(root).generic_string(); }

class StageRunner {
 public:
  StageRunner(fs::path root, const ExperimentConfig& cfg, const Progress& progress, bool force)
      : root_(std::move(root)), progress_(progress), force_(force) {
    result_.manifest.config = format_config(cfg);
    const auto path = manifest_path();
    if (!force_ && fs::exists(path)) {
      try {
        previous_ = load_manifest(path);
      } catch (const ParseError& e) {
        log::warn(std::string("ignoring unreadable manifest: ") + e.what());
      }
    }
  }

  /// Runs `body` unless the previous manifest recorded the same input digest
  /// and every recorded output still has its digest. `inputs` are paths
  /// relative to the artifact directory; `settings` covers everything else
  /// the stage reads.
  template <typename Body>
  void stage(const std::string& name, const std::vector<std::string>& inputs, const std::string& settings,
             Body&& body) {
    std::string key(kPipelineVersion);
    key += "\n" + name + "\n" + settings + "\n";
    try {
      for (const auto& in : inputs) key += in + "=" + digest_file(root_ / in) + "\n";
    } catch (const Error& e) {
      throw StageError(name, e.what());
    }
    StageRecord record{name, digest_bytes(key), {}};
    if (const auto* prev = previous_.find(name); prev && up_to_date(*prev, record.input_digest)) {
      result_.skipped.push_back(name);
      result_.manifest.stages.push_back(*prev);
      save();
      if (progress_) progress_(name + ": up to date");
      return;
    }
    if (progress_) progress_(name + ": running");
    std::vector<fs::path> outputs;
    try {
      outputs = body();
      for (const auto& p : outputs) record.outputs[relative_key(root_, p)] = digest_file(p);
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      std::string msg = e.what();
      if (!inputs.empty()) {
        msg += " (inputs:";
        for (const auto& in : inputs) msg += " " + in;
        msg += ")";
      }
      save();
      throw StageError(name, msg);
    }
    result_.executed.push_back(name);
    result_.manifest.stages.push_back(std::move(record));
    save();
  }

  PipelineResult take() { return std::move(result_); }

 private:
  fs::path manifest_path() const { return root_ / "manifest.json"; }

  bool up_to_date(const StageRecord& prev, const std::string& input_digest) const {
    if (prev.input_digest != input_digest || prev.outputs.empty()) return false;
    for (const auto& [path, digest] : prev.outputs) {
      const auto full = root_ / path;
      if (!fs::exists(full) || digest_file(full) != digest) return false;
    }
    return true;
  }

  void save() const { write_text(manifest_path(), result_.manifest.to_json()); }

  fs::path root_;
  const Progress& progress_;
  bool force_;
  ArtifactManifest previous_;
  PipelineResult result_;
};

std::string join_tokens(const ExperimentConfig& cfg) {
  std::string s = "families=";
  for (auto f : cfg.families) s += std::string(models::token(f)) + ",";
  s += "\nresamplers=";
  for (auto r : cfg.resamplers) s += std::string(resample::to_string(r)) + ",";
  return s;
}

void write_tuning(const fs::path& path, const models::GridResult& g) {
  csv::Table t;
  const auto& first = g.points.front();
  for (const auto& [k, v] : first) t.header.push_back(k);
  for (std::size_t f = 0; f < g.fold_f1.front().size(); ++f) t.header.push_back("fold" + std::to_string(f) + "_f1");
  t.header.push_back("mean_f1");
  t.header.push_back("selected");
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    std::vector<std::string> row;
    for (const auto& [k, v] : g.points[i]) row.push_back(models::format_param(v));
    for (double f1 : g.fold_f1[i]) row.push_back(csv::format_exact(f1));
    row.push_back(std::isfinite(g.mean_f1[i]) ? csv::format_exact(g.mean_f1[i]) : "failed");
    row.push_back(i == g.best ? "1" : "0");
    t.rows.push_back(std::move(row));
  }
  csv::write(path, t);
}

std::vector<fs::path> run_models(const fs::path& root, const ExperimentConfig& cfg) {
  const auto ds = dataset::read_dataset(root / "dataset.csv");
  const auto data = prepare(ds, cfg.master_seed, cfg.test_fraction);
  const auto balance = dataset::class_balance(data.train_raw.y);
  log::info("training partition: " + std::to_string(balance.positives) + " kills of " +
            std::to_string(data.train_raw.size()) + " shots");

  std::vector<fs::path> outputs;
  const auto model_dir = root / "models";
  const auto tuning_dir = root / "tuning";
  fs::remove_all(model_dir);
  fs::remove_all(tuning_dir);
  fs::create_directories(model_dir);

  // Hyperparameters are selected once per family on the imbalanced training
  // partition and then reused for every resampler.
  std::vector<models::Hyperparameters> chosen;
  for (auto f : cfg.families) {
    const auto grid = models::grid_for(f, cfg.grid_mode);
    if (grid.size() <= 1) {
      chosen.push_back(grid.points().front());
      continue;
    }
    const auto result = tune(f, cfg.grid_mode, data, resample::Strategy::None, cfg.master_seed, cfg.cv_folds, cfg.jobs);
    fs::create_directories(tuning_dir);
    const auto path = tuning_dir / (std::string(models::token(f)) + ".csv");
    write_tuning(path, result);
    outputs.push_back(path);
    chosen.push_back(result.best_point());
  }

  std::vector<LabeledMatrix> resampled;
  for (auto r : cfg.resamplers) {
    const auto token = resample::to_string(r);
    resampled.push_back(resample_raw(r, data.train_raw, data.scaler, derive_seed(cfg.master_seed, {"resample", token})));
  }

  const std::size_t nr = cfg.resamplers.size();
  std::vector<models::ModelArtifact> artifacts(cfg.families.size() * nr);
  parallel_for(artifacts.size(), cfg.jobs, [&](std::size_t i) {
    const auto f = cfg.families[i / nr];
    const auto r = cfg.resamplers[i % nr];
    const auto token = resample::to_string(r);
    artifacts[i] = fit_artifact(f, chosen[i / nr], resampled[i % nr], data.scaler,
                                derive_seed(cfg.master_seed, {"fit", models::token(f), token}));
    artifacts[i].training_resampler = std::string(token);
  });

  // Timing runs on this thread only, after every fit has finished.
  std::vector<evalreport::MetricsRow> rows;
  for (const auto& a : artifacts) {
    const auto path = model_dir / (std::string(models::token(a.model->family())) + "-" + a.training_resampler + ".json");
    write_text(path, models::serialize(a));
    outputs.push_back(path);
    rows.push_back(evaluate(a, data, a.training_resampler, cfg.timing_repeats));
  }
  const auto metrics_path = root / "metrics.csv";
  write_metrics(metrics_path, rows);
  outputs.push_back(metrics_path);
  return outputs;
}

}  // namespace

PipelineResult run_pipeline(const ExperimentConfig& cfg, const Progress& progress, bool force) {
  validate(cfg);
  const fs::path root = cfg.artifact_dir;
  try {
    fs::create_directories(root);
  } catch (const fs::filesystem_error& e) {
    throw StageError("setup", e.what());
  }
  StageRunner runner(root, cfg, progress, force);
  const std::string seed = "master_seed=" + std::to_string(cfg.master_seed);

  runner.stage("doe", {}, seed + "\nn_cases=" + std::to_string(cfg.n_cases), [&] {
    const auto path = root / "design.csv";
    doe::save_design(make_design(cfg.n_cases, cfg.master_seed), path);
    return std::vector<fs::path>{path};
  });

  runner.stage("simulate", {"design.csv"}, seed + "\nseeds_per_case=" + std::to_string(cfg.seeds_per_case), [&] {
    const auto design = doe::load_design(root / "design.csv");
    const auto sim = simulate_design(design, cfg.seeds_per_case, cfg.master_seed, cfg.jobs);
    sim::write_shots(root / "shots.csv", sim.shots);
    sim::write_runs(root / "runs.csv", sim.runs);
    return std::vector<fs::path>{root / "shots.csv", root / "runs.csv"};
  });

  runner.stage("dataset", {"design.csv", "shots.csv"}, "", [&] {
    const auto cases = doe::decode_design(doe::load_design(root / "design.csv"));
    const auto shots = sim::read_shots(root / "shots.csv");
    dataset::Dataset ds{dataset::build_records(shots, cases)};
    dataset::write_dataset(root / "dataset.csv", ds);
    return std::vector<fs::path>{root / "dataset.csv"};
  });

  runner.stage("eda", {"dataset.csv"}, "", [&] {
    const auto ds = dataset::read_dataset(root / "dataset.csv");
    auto paths = dataset::write_eda(root, ds);
    const auto corr = dataset::pearson_matrix(ds.with_label());
    const auto svg = root / "correlation.svg";
    evalreport::write_correlation_svg(svg, corr.r, dataset::column_names());
    paths.push_back(svg);
    return paths;
  });

  const std::string model_settings = seed + "\n" + join_tokens(cfg) + "\ngrid_mode=" +
                                     std::string(models::to_string(cfg.grid_mode)) +
                                     "\ntest_fraction=" + csv::format_exact(cfg.test_fraction) +
                                     "\ncv_folds=" + std::to_string(cfg.cv_folds) +
                                     "\ntiming_repeats=" + std::to_string(cfg.timing_repeats);
  runner.stage("models", {"dataset.csv"}, model_settings, [&] { return run_models(root, cfg); });

  runner.stage("report", {"metrics.csv"}, "", [&] {
    return evalreport::render_report(root, read_metrics(root / "metrics.csv"));
  });

  return runner.take();
}

}  // namespace shotlab::harness
