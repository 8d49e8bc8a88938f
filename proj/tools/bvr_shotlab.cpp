// bvr-shotlab: run the shot-outcome experiment end to end or one stage at a
// time. Exit codes: 0 success, 2 configuration error, 3 stage failure.

#include <fstream>
#include <iostream>
#include <iterator>

#include <CLI11.hpp>
#include <json.hpp>

#include "shotlab/csv.hpp"
#include "shotlab/error.hpp"
#include "shotlab/harness.hpp"
#include "shotlab/log.hpp"

namespace fs = std::filesystem;
using namespace shotlab;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

models::Hyperparameters parse_params(const std::vector<std::string>& items) {
  models::Hyperparameters hp;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + item + "'");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    try {
      hp[key] = csv::parse_double(value);
    } catch (const ParseError&) {
      hp[key] = value;
    }
  }
  return hp;
}

/// Flat JSON object of hyperparameter values (numbers or strings).
models::Hyperparameters load_params_json(const fs::path& path) {
  models::Hyperparameters hp;
  try {
    const auto doc = nlohmann::json::parse(read_text(path));
    if (!doc.is_object()) throw ConfigError(path.string() + ": expected a JSON object");
    for (const auto& [k, v] : doc.items()) {
      if (v.is_number()) hp[k] = v.get<double>();
      else if (v.is_string()) hp[k] = v.get<std::string>();
      else if (v.is_boolean()) hp[k] = v.get<bool>() ? 1.0 : 0.0;
      else throw ConfigError(path.string() + ": '" + k + "' must be a number or a string");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return hp;
}

std::string params_json(const models::Hyperparameters& hp) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [k, v] : hp) {
    if (const auto* s = std::get_if<std::string>(&v)) doc[k] = *s;
    else doc[k] = std::get<double>(v);
  }
  return doc.dump(1) + "\n";
}

struct SplitOptions {
  fs::path dataset = "dataset.csv";
  std::uint64_t seed = 42;
  double test_fraction = 0.15;

  void add(CLI::App* cmd) {
    cmd->add_option("--dataset", dataset, "dataset.csv path")->capture_default_str();
    cmd->add_option("--seed", seed, "master seed (fixes split, resampling and fit seeds)")->capture_default_str();
    cmd->add_option("--test-fraction", test_fraction, "held-out fraction")->capture_default_str();
  }

  harness::PreparedData load() const {
    return harness::prepare(dataset::read_dataset(dataset), seed, test_fraction);
  }
};

int run_stage(const std::string& name, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const StageError& e) {
    std::cerr << e.what() << "\n";
    return kExitStage;
  } catch (const std::exception& e) {
    std::cerr << "stage '" << name << "' failed: " << e.what() << "\n";
    return kExitStage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Air-combat shot outcome experiments: design, simulation, dataset, models and report"};
  app.require_subcommand(1);
  bool verbose = false;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "log progress and diagnostics");
  app.add_flag("-q,--quiet", quiet, "log errors only");

  std::function<void()> action;
  std::string stage_name;

  // run
  fs::path config_path;
  bool force = false;
  std::optional<std::size_t> jobs_override;
  auto* run = app.add_subcommand("run", "run every stage, skipping stages whose inputs are unchanged");
  run->add_option("--config", config_path, "experiment.cfg path")->required();
  run->add_flag("--force", force, "ignore the manifest and rerun every stage");
  run->add_option("--jobs", jobs_override, "override the worker count from the config");
  run->callback([&] {
    stage_name = "run";
    action = [&] {
      auto cfg = harness::load_config(config_path);
      if (jobs_override) cfg.jobs = *jobs_override;
      harness::Progress progress;
      if (!quiet) progress = [](std::string_view msg) { std::cerr << msg << "\n"; };
      const auto result = harness::run_pipeline(cfg, progress, force);
      std::cout << "artifacts in " << fs::absolute(cfg.artifact_dir).string() << " (" << result.executed.size()
                << " stages run, " << result.skipped.size() << " up to date)\n";
    };
  });

  // doe
  std::size_t n_cases = 24;
  std::uint64_t seed = 42;
  fs::path design_out = "design.csv";
  auto* doe_cmd = app.add_subcommand("doe", "draw the Latin hypercube design");
  doe_cmd->add_option("--cases", n_cases, "number of cases")->capture_default_str()->check(CLI::PositiveNumber);
  doe_cmd->add_option("--seed", seed, "master seed")->capture_default_str();
  doe_cmd->add_option("--out", design_out, "output design.csv")->capture_default_str();
  doe_cmd->callback([&] {
    stage_name = "doe";
    action = [&] {
      if (design_out.has_parent_path()) fs::create_directories(design_out.parent_path());
      doe::save_design(harness::make_design(n_cases, seed), design_out);
    };
  });

  // simulate
  fs::path design_in = "design.csv";
  std::size_t seeds_per_case = 5;
  std::size_t jobs = 1;
  fs::path sim_out_dir = ".";
  auto* sim_cmd = app.add_subcommand("simulate", "run every case and replicate of a design");
  sim_cmd->add_option("--design", design_in, "design.csv path")->capture_default_str();
  sim_cmd->add_option("--seeds,--seeds-per-case", seeds_per_case, "replicates per case")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", seed, "master seed")->capture_default_str();
  sim_cmd->add_option("--jobs", jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--out-dir", sim_out_dir, "directory for shots.csv and runs.csv")->capture_default_str();
  sim_cmd->callback([&] {
    stage_name = "simulate";
    action = [&] {
      const auto out = harness::simulate_design(doe::load_design(design_in), seeds_per_case, seed, jobs);
      fs::create_directories(sim_out_dir);
      sim::write_shots(sim_out_dir / "shots.csv", out.shots);
      sim::write_runs(sim_out_dir / "runs.csv", out.runs);
      std::cout << out.shots.size() << " shots from " << out.runs.size() << " runs\n";
    };
  });

  // build-dataset
  fs::path shots_in = "shots.csv";
  fs::path dataset_out = "dataset.csv";
  auto* ds_cmd = app.add_subcommand("build-dataset", "turn blue shot events into dataset rows");
  ds_cmd->add_option("--shots", shots_in, "shots.csv path")->capture_default_str();
  ds_cmd->add_option("--design", design_in, "design.csv path")->capture_default_str();
  ds_cmd->add_option("--out", dataset_out, "output dataset.csv")->capture_default_str();
  ds_cmd->callback([&] {
    stage_name = "dataset";
    action = [&] {
      const auto cases = doe::decode_design(doe::load_design(design_in));
      dataset::Dataset ds{dataset::build_records(sim::read_shots(shots_in), cases)};
      if (dataset_out.has_parent_path()) fs::create_directories(dataset_out.parent_path());
      dataset::write_dataset(dataset_out, ds);
      const auto balance = dataset::class_balance(ds.labeled().y);
      std::cout << ds.size() << " rows, kill fraction " << csv::format_fixed(balance.minority_fraction, 4) << "\n";
    };
  });

  // eda
  fs::path dataset_in = "dataset.csv";
  fs::path eda_out = ".";
  auto* eda_cmd = app.add_subcommand("eda", "summary statistics, correlations and mutual information");
  eda_cmd->add_option("--dataset", dataset_in, "dataset.csv path")->capture_default_str();
  eda_cmd->add_option("--out-dir", eda_out, "output directory")->capture_default_str();
  eda_cmd->callback([&] {
    stage_name = "eda";
    action = [&] {
      const auto ds = dataset::read_dataset(dataset_in);
      fs::create_directories(eda_out);
      dataset::write_eda(eda_out, ds);
      evalreport::write_correlation_svg(eda_out / "correlation.svg", dataset::pearson_matrix(ds.with_label()).r,
                                        dataset::column_names());
    };
  });

  // tune
  SplitOptions tune_split;
  std::string family_token = "rf";
  std::string grid_token = "reduced";
  std::string resampler_token = "none";
  std::size_t folds = 5;
  fs::path tune_out = "tuning.csv";
  fs::path tune_params_out;
  auto* tune_cmd = app.add_subcommand("tune", "cross-validated grid search on the training partition");
  tune_split.add(tune_cmd);
  tune_cmd->add_option("--family", family_token, "lr|knn|svm|mlp|gnb|rf|gbt")->capture_default_str();
  tune_cmd->add_option("--grid", grid_token, "full|reduced|fixed-best")->capture_default_str();
  tune_cmd->add_option("--resampler", resampler_token, "resampler applied inside each training fold")
      ->capture_default_str();
  tune_cmd->add_option("--folds", folds, "cross-validation folds")->capture_default_str();
  tune_cmd->add_option("--jobs", jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  tune_cmd->add_option("--out", tune_out, "per-point scores")->capture_default_str();
  tune_cmd->add_option("--params-out", tune_params_out, "write the selected point as params.json");
  tune_cmd->callback([&] {
    stage_name = "tune";
    action = [&] {
      const auto family = models::parse_family(family_token);
      const auto mode = models::parse_grid_mode(grid_token);
      const auto resampler = resample::parse_strategy(resampler_token);
      if (folds < 2) throw ConfigError("--folds must be at least 2");
      const auto result =
          harness::tune(family, mode, tune_split.load(), resampler, tune_split.seed, folds, jobs);
      csv::Table t;
      t.header = {"point", "mean_f1", "selected"};
      for (std::size_t i = 0; i < result.points.size(); ++i) {
        std::string desc;
        for (const auto& [k, v] : result.points[i]) desc += (desc.empty() ? "" : " ") + k + "=" + models::format_param(v);
        t.rows.push_back({desc, csv::format_exact(result.mean_f1[i]), i == result.best ? "1" : "0"});
      }
      if (tune_out.has_parent_path()) fs::create_directories(tune_out.parent_path());
      csv::write(tune_out, t);
      if (!tune_params_out.empty()) write_text(tune_params_out, params_json(result.best_point()));
      std::cout << "best: " << t.rows[result.best][0] << " (mean F1 " << csv::format_fixed(result.mean_f1[result.best], 4)
                << ")\n";
    };
  });

  // train
  SplitOptions train_split;
  std::vector<std::string> params;
  bool use_best = false;
  fs::path params_file;
  fs::path model_out = "model.json";
  auto* train_cmd = app.add_subcommand("train", "fit one model on the (resampled) training partition");
  train_split.add(train_cmd);
  train_cmd->add_option("--family", family_token, "lr|knn|svm|mlp|gnb|rf|gbt")->capture_default_str();
  train_cmd->add_option("--resampler", resampler_token, "none|smote|adasyn|tomek|enn|smote-tomek|smote-enn")
      ->capture_default_str();
  train_cmd->add_flag("--best", use_best, "start from the published best hyperparameters");
  train_cmd->add_option("--params", params_file, "JSON object of hyperparameters, as written by tune --params-out");
  train_cmd->add_option("--param", params, "hyperparameter override key=value (repeatable)");
  train_cmd->add_option("--out", model_out, "model artifact path")->capture_default_str();
  train_cmd->callback([&] {
    stage_name = "train";
    action = [&] {
      const auto family = models::parse_family(family_token);
      const auto resampler = resample::parse_strategy(resampler_token);
      models::Hyperparameters hp = use_best ? models::best_hyperparameters(family) : models::Hyperparameters{};
      if (!params_file.empty()) {
        for (const auto& [k, v] : load_params_json(params_file)) hp[k] = v;
      }
      for (const auto& [k, v] : parse_params(params)) hp[k] = v;
      models::resolve(family, hp);
      const auto artifact = harness::train(family, hp, train_split.load(), resampler, train_split.seed);
      write_text(model_out, models::serialize(artifact));
    };
  });

  // evaluate
  SplitOptions eval_split;
  std::vector<fs::path> model_paths;
  int repeats = 5;
  fs::path metrics_out = "metrics.csv";
  auto* eval_cmd = app.add_subcommand("evaluate", "score model artifacts on the test partition");
  eval_split.add(eval_cmd);
  eval_cmd->add_option("--model", model_paths, "model artifact (repeatable)")->required();
  eval_cmd->add_option("--repeats", repeats, "timed inference passes")->capture_default_str()->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", metrics_out, "metrics.csv path")->capture_default_str();
  eval_cmd->callback([&] {
    stage_name = "evaluate";
    action = [&] {
      const auto data = eval_split.load();
      std::vector<evalreport::MetricsRow> rows;
      for (const auto& p : model_paths) {
        const auto artifact = models::deserialize(read_text(p));
        rows.push_back(harness::evaluate(artifact, data, artifact.training_resampler, repeats));
      }
      if (metrics_out.has_parent_path()) fs::create_directories(metrics_out.parent_path());
      harness::write_metrics(metrics_out, rows);
    };
  });

  // report
  fs::path metrics_in = "metrics.csv";
  fs::path report_out = ".";
  auto* report_cmd = app.add_subcommand("report", "write results.csv, results.md and timings.csv");
  report_cmd->add_option("--metrics", metrics_in, "metrics.csv path")->capture_default_str();
  report_cmd->add_option("--out-dir", report_out, "output directory")->capture_default_str();
  report_cmd->callback([&] {
    stage_name = "report";
    action = [&] { evalreport::render_report(report_out, harness::read_metrics(metrics_in)); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  log::set_level(quiet ? log::Level::Error : verbose ? log::Level::Info : log::Level::Warning);
  return run_stage(stage_name, action);
}
