#include <cmath>

#include <benchmark/benchmark.h>

#include "shotlab/doe.hpp"
#include "shotlab/models.hpp"
#include "shotlab/resample.hpp"
#include "shotlab/rng.hpp"
#include "shotlab/sim.hpp"

using namespace shotlab;

namespace {

// Two overlapping Gaussian clouds with a 1:8 class ratio.
LabeledMatrix blobs(std::size_t n, std::size_t d, std::uint64_t seed) {
  CounterRng rng(seed);
  LabeledMatrix out{Matrix(n, d), std::vector<int>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i % 9 == 0 ? 1 : 0;
    out.y[i] = label;
    for (std::size_t c = 0; c < d; ++c) {
      const double u1 = rng.uniform() + 1e-12, u2 = rng.uniform();
      const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
      out.X(i, c) = z + (label ? 1.0 : 0.0);
    }
  }
  return out;
}

void BM_LhsSample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto d = doe::lhs_sample(doe::scenario_variables(), n, seed++);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_LhsSample)->Arg(24)->Arg(240);

void BM_Engagement(benchmark::State& state) {
  const auto design = doe::lhs_sample(doe::scenario_variables(), 8, 7);
  const auto cases = doe::decode_design(design);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto r = sim::run_engagement(cases[seed % cases.size()], seed);
    ++seed;
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Engagement)->Unit(benchmark::kMillisecond);

void BM_Smote(benchmark::State& state) {
  const auto data = blobs(static_cast<std::size_t>(state.range(0)), 11, 3);
  for (auto _ : state) {
    auto out = resample::smote(data, 5, 11);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_Smote)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Fit(benchmark::State& state) {
  const auto family = models::all_families()[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(std::string(models::token(family)));
  const auto data = blobs(600, 11, 5);
  const auto hp = models::best_hyperparameters(family);
  for (auto _ : state) {
    auto m = models::fit(family, hp, data, 9);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_Fit)->DenseRange(0, 6)->Unit(benchmark::kMillisecond);

void BM_PredictTestSet(benchmark::State& state) {
  const auto family = models::all_families()[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(std::string(models::token(family)));
  const auto train = blobs(600, 11, 5);
  const auto test = blobs(200, 11, 6);
  const auto m = models::fit(family, models::best_hyperparameters(family), train, 9);
  for (auto _ : state) {
    auto p = m->predict(test.X);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_PredictTestSet)->DenseRange(0, 6)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
