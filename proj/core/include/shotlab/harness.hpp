#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shotlab/dataset.hpp"
#include "shotlab/evalreport.hpp"
#include "shotlab/models.hpp"
#include "shotlab/resample.hpp"

namespace shotlab::harness {

struct ExperimentConfig {
  std::size_t n_cases = 24;
  std::size_t seeds_per_case = 5;
  std::uint64_t master_seed = 42;
  std::vector<resample::Strategy> resamplers{resample::Strategy::None, resample::Strategy::Smote};
  std::vector<models::Family> families = models::all_families();
  models::GridMode grid_mode = models::GridMode::FixedBest;
  std::filesystem::path artifact_dir = "artifacts";
  std::size_t jobs = 1;
  double test_fraction = 0.15;
  std::size_t cv_folds = 5;
  int timing_repeats = 5;

  /// 24 cases x 5 replicates.
  static ExperimentConfig desk();
  /// 240 cases x 30 replicates.
  static ExperimentConfig paper();
};

/// Flat key=value text. Blank lines and lines starting with '#' are ignored.
/// A `preset = desk|paper` line resets every field to that preset before
/// later keys apply. Unknown keys and malformed values throw ConfigError.
ExperimentConfig parse_config(std::istream& in, const std::string& source_name = "experiment.cfg");
ExperimentConfig load_config(const std::filesystem::path& path);
std::string format_config(const ExperimentConfig& cfg);
/// Throws ConfigError for values outside their valid range.
void validate(const ExperimentConfig& cfg);

using SeedTag = std::variant<std::string_view, std::uint64_t>;

/// Stable 64-bit mix of the master seed and a tag sequence.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<SeedTag> tags);

/// FNV-1a 64 as 16 lowercase hex digits.
std::string digest_bytes(std::string_view bytes);
std::string digest_file(const std::filesystem::path& path);

struct StageRecord {
  std::string name;
  /// Digest over the stage's input files and settings.
  std::string input_digest;
  /// Path relative to the artifact directory -> content digest.
  std::map<std::string, std::string> outputs;
};

struct ArtifactManifest {
  /// Resolved configuration text of the run that wrote the manifest.
  std::string config;
  std::vector<StageRecord> stages;

  const StageRecord* find(std::string_view name) const;
  std::string to_json() const;
  static ArtifactManifest from_json(std::string_view text);
};

ArtifactManifest load_manifest(const std::filesystem::path& path);

struct PipelineResult {
  ArtifactManifest manifest;
  std::vector<std::string> executed;
  std::vector<std::string> skipped;
};

using Progress = std::function<void(std::string_view)>;

/// Runs doe, simulate, dataset, eda, models and report. A stage whose input
/// digest and output files match the manifest is skipped. Throws StageError
/// naming the failed stage; finished artifacts stay on disk.
/// With `force` every stage runs.
PipelineResult run_pipeline(const ExperimentConfig& cfg, const Progress& progress = {}, bool force = false);

// Building blocks shared by the pipeline and the standalone subcommands.

doe::DesignMatrix make_design(std::size_t n_cases, std::uint64_t master_seed);

struct SimulationOutput {
  std::vector<sim::ShotEvent> shots;
  std::vector<sim::RunSummary> runs;
};

/// Replicate r of case c runs with derive_seed(master, {"sim", c, r}) and
/// run_id c * seeds_per_case + r.
SimulationOutput simulate_design(const doe::DesignMatrix& design, std::size_t seeds_per_case,
                                 std::uint64_t master_seed, std::size_t jobs);

/// Train/test partition of the dataset and the scaler fitted on the
/// training rows.
struct PreparedData {
  LabeledMatrix train_raw;
  LabeledMatrix test_raw;
  dataset::ScalerParams scaler;
  dataset::Split split;
};

PreparedData prepare(const dataset::Dataset& ds, std::uint64_t master_seed, double test_fraction);

/// Resamples `raw` with distances measured in the scaler's standardized
/// space. Returns rows in raw units: retained rows are the input rows and
/// synthetic rows interpolate the raw base and neighbor rows.
LabeledMatrix resample_raw(resample::Strategy s, const LabeledMatrix& raw, const dataset::ScalerParams& scaler,
                           std::uint64_t seed);

/// Feature representation a family is trained on.
LabeledMatrix represent(models::Family f, const LabeledMatrix& raw, const dataset::ScalerParams& scaler);

/// Cross-validated search on the training partition, resampling inside
/// each training fold.
models::GridResult tune(models::Family f, models::GridMode mode, const PreparedData& data,
                        resample::Strategy resampler, std::uint64_t master_seed, std::size_t folds,
                        std::size_t jobs = 1);

/// Fits one family on raw-unit rows, standardizing first for the families
/// that use scaled features.
models::ModelArtifact fit_artifact(models::Family f, const models::Hyperparameters& hp, const LabeledMatrix& raw,
                                   const dataset::ScalerParams& scaler, std::uint64_t seed);

/// Resamples the training partition and fits on it.
models::ModelArtifact train(models::Family f, const models::Hyperparameters& hp, const PreparedData& data,
                            resample::Strategy resampler, std::uint64_t master_seed);

/// Test-partition metrics with inference time.
evalreport::MetricsRow evaluate(const models::ModelArtifact& artifact, const PreparedData& data,
                                std::string_view resampler_token, int timing_repeats);

void write_metrics(const std::filesystem::path& path, std::span<const evalreport::MetricsRow> rows);
std::vector<evalreport::MetricsRow> read_metrics(const std::filesystem::path& path);

}  // namespace shotlab::harness
