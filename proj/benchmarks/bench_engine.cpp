#include <benchmark/benchmark.h>

#include "bdikit/bdi.hpp"
#include "bdikit/presets.hpp"

using namespace bdikit;

namespace {

class Counter : public Sink {
 public:
  bool on_gridpoint(std::size_t, double, const Configuration& c) override {
    particles += c.size();
    return true;
  }
  std::size_t particles = 0;
};

void BM_EngineHorizon(benchmark::State& state, const char* preset) {
  const auto spec = model::make_preset(preset);
  EngineOptions eo;
  eo.dt = 0.01;
  eo.horizon = 100.0;
  Rng rng = make_rng(1, 0);
  std::size_t particle_steps = 0;
  for (auto _ : state) {
    Counter sink;
    run_engine(spec, Configuration(1), eo, rng, sink);
    particle_steps += sink.particles;
  }
  state.counters["particle_steps/s"] = benchmark::Counter(static_cast<double>(particle_steps), benchmark::Counter::kIsRate);
}
BENCHMARK_CAPTURE(BM_EngineHorizon, pure_death, "pure-death-bm");
BENCHMARK_CAPTURE(BM_EngineHorizon, binary_c2, "binary-c2");
BENCHMARK_CAPTURE(BM_EngineHorizon, estimate_sine, "estimate-sine");

void BM_RegenerativeCycles(benchmark::State& state) {
  const auto spec = model::make_preset("mm-infinity");
  const auto fs = count_power_functionals(2);
  Rng rng = make_rng(2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(run_regenerative(spec, 100, 0.02, fs, rng));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_RegenerativeCycles);

}  // namespace

BENCHMARK_MAIN();
