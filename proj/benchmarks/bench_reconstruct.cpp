#include <benchmark/benchmark.h>

#include "bdikit/reconstruct.hpp"

using namespace bdikit;

namespace {

void BM_MatchPair(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng = make_rng(3, 0);
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(i) + 0.3 * uniform01(rng);
    y[i] = x[i] + 0.05 * (uniform01(rng) - 0.5);
  }
  const auto cx = make_configuration(x);
  const auto cy = make_configuration(y);
  for (auto _ : state) benchmark::DoNotOptimize(match_pair(cx, cy, 0.01, 0.475));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_MatchPair)->RangeMultiplier(4)->Range(1, 1024);

}  // namespace
