#include "shotlab/csv.hpp"
#include "shotlab/error.hpp"
#include "shotlab/harness.hpp"
#include "shotlab/metrics.hpp"
#include "shotlab/parallel.hpp"

namespace shotlab::harness {

namespace {

std::uint64_t as_tag(std::size_t v) { return static_cast<std::uint64_t>(v); }

}  // namespace

doe::DesignMatrix make_design(std::size_t n_cases, std::uint64_t master_seed) {
  return doe::lhs_sample(doe::scenario_variables(), n_cases, derive_seed(master_seed, {"doe"}));
}

SimulationOutput simulate_design(const doe::DesignMatrix& design, std::size_t seeds_per_case,
                                 std::uint64_t master_seed, std::size_t jobs) {
  const auto cases = doe::decode_design(design);
  const std::size_t total = cases.size() * seeds_per_case;
  std::vector<sim::EngagementResult> results(total);
  parallel_for(total, jobs, [&](std::size_t run) {
    const std::size_t c = run / seeds_per_case;
    const std::size_t r = run % seeds_per_case;
    const auto seed = derive_seed(master_seed, {"sim", as_tag(c), as_tag(r)});
    results[run] = sim::run_engagement(cases[c], seed, {}, c, run);
  });
  SimulationOutput out;
  out.runs.reserve(total);
  for (auto& res : results) {
    out.shots.insert(out.shots.end(), res.events.begin(), res.events.end());
    out.runs.push_back(res.summary);
  }
  return out;
}

PreparedData prepare(const dataset::Dataset& ds, std::uint64_t master_seed, double test_fraction) {
  PreparedData p;
  const auto all = ds.labeled();
  p.split = dataset::train_test_split(all.size(), test_fraction, derive_seed(master_seed, {"split"}));
  p.train_raw = all.subset(p.split.train);
  p.test_raw = all.subset(p.split.test);
  p.scaler = dataset::fit_scaler(p.train_raw.X);
  return p;
}

LabeledMatrix resample_raw(resample::Strategy s, const LabeledMatrix& raw, const dataset::ScalerParams& scaler,
                           std::uint64_t seed) {
  if (s == resample::Strategy::None) return raw;
  const LabeledMatrix scaled{scaler.apply(raw.X), raw.y};
  const auto outcome = resample::apply(s, scaled, seed);
  LabeledMatrix out = outcome.data;
  for (std::size_t i = 0; i < outcome.retained.size(); ++i) {
    const auto src = raw.X.row(outcome.retained[i]);
    std::copy(src.begin(), src.end(), out.X.row(i).begin());
  }
  for (std::size_t j = 0; j < outcome.synthetic_rows.size(); ++j) {
    const auto& o = outcome.synthetic_origin[j];
    const auto base = raw.X.row(o.base);
    const auto nb = raw.X.row(o.neighbor);
    auto dst = out.X.row(outcome.synthetic_rows[j]);
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] = base[c] + o.u * (nb[c] - base[c]);
  }
  return out;
}

LabeledMatrix represent(models::Family f, const LabeledMatrix& raw, const dataset::ScalerParams& scaler) {
  if (!models::uses_scaled_features(f)) return raw;
  return {scaler.apply(raw.X), raw.y};
}

models::GridResult tune(models::Family f, models::GridMode mode, const PreparedData& data,
                        resample::Strategy resampler, std::uint64_t master_seed, std::size_t folds,
                        std::size_t jobs) {
  const auto grid = models::grid_for(f, mode);
  const auto rows = represent(f, data.train_raw, data.scaler);
  models::FoldTransform transform;
  if (resampler != resample::Strategy::None) {
    if (models::uses_scaled_features(f)) {
      transform = [resampler](const LabeledMatrix& fold, std::uint64_t seed) {
        return resample::apply(resampler, fold, seed).data;
      };
    } else {
      transform = [resampler, &data](const LabeledMatrix& fold, std::uint64_t seed) {
        return resample_raw(resampler, fold, data.scaler, seed);
      };
    }
  }
  const auto seed = derive_seed(master_seed, {"cv", models::token(f), resample::to_string(resampler)});
  return models::grid_search_cv(grid, rows, folds, seed, transform, jobs);
}

models::ModelArtifact fit_artifact(models::Family f, const models::Hyperparameters& hp, const LabeledMatrix& raw,
                                   const dataset::ScalerParams& scaler, std::uint64_t seed) {
  models::ModelArtifact a;
  a.model = models::fit(f, hp, represent(f, raw, scaler), seed);
  if (models::uses_scaled_features(f)) a.scaling = models::FeatureScaling{scaler.mean, scaler.std};
  a.feature_names = dataset::feature_names();
  return a;
}

models::ModelArtifact train(models::Family f, const models::Hyperparameters& hp, const PreparedData& data,
                            resample::Strategy resampler, std::uint64_t master_seed) {
  const auto token = resample::to_string(resampler);
  const auto rows = resample_raw(resampler, data.train_raw, data.scaler, derive_seed(master_seed, {"resample", token}));
  auto a = fit_artifact(f, hp, rows, data.scaler, derive_seed(master_seed, {"fit", models::token(f), token}));
  a.training_resampler = std::string(token);
  return a;
}

evalreport::MetricsRow evaluate(const models::ModelArtifact& artifact, const PreparedData& data,
                                std::string_view resampler_token, int timing_repeats) {
  const auto pred = artifact.predict(data.test_raw.X);
  const auto counts = metrics::confusion_counts(data.test_raw.y, pred);
  std::size_t sink = 0;
  const double ms = evalreport::measure_inference_time_ms(
      [&] { sink += artifact.predict(data.test_raw.X).size(); }, timing_repeats);
  if (sink == 0 && !pred.empty()) throw DataError("inference produced no predictions");
  return evalreport::make_row(std::string(models::token(artifact.model->family())), std::string(resampler_token),
                              counts, ms);
}

void write_metrics(const std::filesystem::path& path, std::span<const evalreport::MetricsRow> rows) {
  csv::Table t;
  t.header = {"model", "resampler", "accuracy", "precision", "recall", "f1", "inference_time_ms", "zero_division"};
  for (const auto& r : rows) {
    t.rows.push_back({r.model, r.resampler, csv::format_exact(r.accuracy), csv::format_exact(r.precision),
                      csv::format_exact(r.recall), csv::format_exact(r.f1), csv::format_exact(r.inference_time_ms),
                      r.zero_division ? "1" : "0"});
  }
  csv::write(path, t);
}

std::vector<evalreport::MetricsRow> read_metrics(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  const std::size_t cols[] = {t.column("model"),  t.column("resampler"),         t.column("accuracy"),
                              t.column("precision"), t.column("recall"),       t.column("f1"),
                              t.column("inference_time_ms"), t.column("zero_division")};
  std::vector<evalreport::MetricsRow> out;
  for (const auto& row : t.rows) {
    evalreport::MetricsRow r;
    r.model = row.at(cols[0]);
    r.resampler = row.at(cols[1]);
    r.accuracy = csv::parse_double(row.at(cols[2]));
    r.precision = csv::parse_double(row.at(cols[3]));
    r.recall = csv::parse_double(row.at(cols[4]));
    r.f1 = csv::parse_double(row.at(cols[5]));
    r.inference_time_ms = csv::parse_double(row.at(cols[6]));
    r.zero_division = row.at(cols[7]) == "1";
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace shotlab::harness
