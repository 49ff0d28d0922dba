#include <benchmark/benchmark.h>

#include "bdikit/presets.hpp"
#include "bdikit/regress.hpp"

using namespace bdikit;

namespace {

void BM_EstimateSigma2(benchmark::State& state) {
  const double delta = std::pow(10.0, -static_cast<double>(state.range(0)));
  const auto cells = partition(Box{{0.0}, 1.0}, delta, 1);
  RegressionScheme s;
  s.cells = cells;
  s.entries.resize(cells.n);
  Rng rng = make_rng(4, 0);
  for (std::size_t c = 0; c < cells.n; ++c) {
    s.entries[c].filled = true;
    s.entries[c].x = {cells.cell_lo(c, 0) + uniform01(rng) * cells.cell_edge()};
    s.entries[c].z = {standard_normal(rng)};
  }
  const auto k = make_kernel(1);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_sigma2(s, k, 2.0, 0.5));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cells.n));
}
BENCHMARK(BM_EstimateSigma2)->DenseRange(4, 8, 2);

void BM_EstimateOnce(benchmark::State& state) {
  const auto spec = model::make_preset("estimate-sine");
  Rng rng = make_rng(5, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_once(spec, Box{{0.0}, 1.0}, 0.5, 2.0, critical_lambda(2.0), 1e-4, 1.0, rng));
  }
}
BENCHMARK(BM_EstimateOnce)->Unit(benchmark::kMillisecond);

}  // namespace
