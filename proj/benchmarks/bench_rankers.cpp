#include "bench_common.hpp"

#include "featrank/eval.hpp"
#include "featrank/rankers.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <string>

namespace {

using namespace featrank;

// range(0): method index into kAllMethods, range(1): class count.
void BM_Rank(benchmark::State& state) {
  const Method m = kAllMethods[state.range(0)];
  const auto d = bench::planted(147, 26, static_cast<int>(state.range(1)), 6);
  state.SetLabel(std::string(to_string(m)));
  for (auto _ : state) benchmark::DoNotOptimize(rank_features(m, d.X, d.y, {}, 7));
}
BENCHMARK(BM_Rank)->ArgsProduct({{0, 1, 2, 3, 4}, {2, 4}})->Unit(benchmark::kMillisecond);

void BM_BalancedAccuracy(benchmark::State& state) {
  const auto d = bench::planted(static_cast<int>(state.range(0)), 1, 4, 8);
  Labels pred = d.y;
  std::rotate(pred.begin(), pred.begin() + 1, pred.end());
  for (auto _ : state) benchmark::DoNotOptimize(balanced_accuracy(d.y, pred));
}
BENCHMARK(BM_BalancedAccuracy)->Arg(184)->Arg(100000);

void BM_Stability(benchmark::State& state) {
  std::vector<IndexList> subsets;
  for (int s = 0; s < state.range(0); ++s) {
    IndexList sub;
    for (int j = 0; j < 26; ++j)
      if ((j * 7 + s) % 3 != 0) sub.push_back(j);
    subsets.push_back(sub);
  }
  for (auto _ : state) benchmark::DoNotOptimize(stability(subsets));
}
BENCHMARK(BM_Stability)->Arg(50);

}  // namespace
