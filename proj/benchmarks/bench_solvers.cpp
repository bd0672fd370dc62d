#include "bench_common.hpp"

#include "featrank/glm.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace featrank;

void BM_RidgeLogistic(benchmark::State& state) {
  const auto d = bench::planted(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(glm::fit_ridge_logistic(d.X, d.y, 1.0));
}
BENCHMARK(BM_RidgeLogistic)->Args({150, 13})->Args({150, 26})->Args({1000, 26});

void BM_L1Logistic(benchmark::State& state) {
  const auto d = bench::planted(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 2, 2);
  const double lam = 0.05 * glm::lambda_max(d.X, d.y);
  for (auto _ : state) benchmark::DoNotOptimize(glm::fit_l1_logistic(d.X, d.y, lam));
}
BENCHMARK(BM_L1Logistic)->Args({150, 13})->Args({150, 26})->Args({1000, 26});

void BM_VbArd(benchmark::State& state) {
  const auto d = bench::planted(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(glm::fit_vb_ard(d.X, d.y));
}
BENCHMARK(BM_VbArd)->Args({150, 13})->Args({150, 26})->Args({1000, 26});

void BM_VbSpikeSlab(benchmark::State& state) {
  const auto d = bench::planted(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(glm::fit_vb_spike_slab(d.X, d.y));
}
BENCHMARK(BM_VbSpikeSlab)->Args({150, 13})->Args({150, 26})->Args({1000, 26});

void BM_OvrClassifier(benchmark::State& state) {
  const auto d = bench::planted(150, static_cast<int>(state.range(0)), 4, 5);
  for (auto _ : state) benchmark::DoNotOptimize(glm::fit_ovr_classifier(d.X, d.y, 1.0));
}
BENCHMARK(BM_OvrClassifier)->Arg(5)->Arg(26);

}  // namespace
