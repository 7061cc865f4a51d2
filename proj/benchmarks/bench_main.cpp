#include <benchmark/benchmark.h>

#include <vector>

#include "bflow/classical.hpp"
#include "bflow/grid.hpp"
#include "bflow/potential.hpp"
#include "bflow/quantum.hpp"

using namespace bflow;

namespace {

SimulationGrid bench_grid(std::size_t nx) {
  return make_dynamics_grid(0.025 * static_cast<double>(nx), nx, 1.0, 0.5);
}

}  // namespace

static void SliceSynthesis(benchmark::State& state) {
  const auto nx = static_cast<std::size_t>(state.range(0));
  const auto real = PotentialRealization::sample(CorrelationSpec(1.0, 0.5), bench_grid(nx), 1, 0);
  SliceSynthesizer synth(real);
  std::vector<double> out(nx);
  std::size_t slice = 0;
  for (auto _ : state) {
    synth.gradient(slice, out);
    slice = (slice + 1) % real.grid().nt;
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(SliceSynthesis)->RangeMultiplier(2)->Range(1024, 8192)->Complexity();

static void SplitStep(benchmark::State& state) {
  const auto nx = static_cast<std::size_t>(state.range(0));
  const auto grid = bench_grid(nx);
  const auto real = PotentialRealization::sample(CorrelationSpec(1.0, 0.5), grid, 1, 0);
  SplitStepPropagator prop(real, 1.0);
  WaveState psi = init_plane_wave(grid);
  const double dt = grid.dx() * grid.dx();
  for (auto _ : state) {
    if (psi.time + dt > 1.0) psi.time = 0.0;
    prop.step(psi, dt);
    benchmark::DoNotOptimize(psi.amplitudes.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(SplitStep)->RangeMultiplier(2)->Range(1024, 8192)->Complexity();

static void VerletStep(benchmark::State& state) {
  const auto grid = bench_grid(4096);
  const auto real = PotentialRealization::sample(CorrelationSpec(50.0, 0.5), grid, 1, 0);
  PotentialForce force(real, 50.0);
  auto ensemble = init_ensemble(state.range(0), grid);
  const double dt = grid.dx() * grid.dx();
  for (auto _ : state) {
    if (ensemble.time + dt > 1.0) {
      ensemble.time = 0.0;
      ensemble.accelerations_valid = false;
    }
    verlet_step(ensemble, force, dt);
    benchmark::DoNotOptimize(ensemble.positions.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(VerletStep)->Arg(1000)->Arg(4000)->Arg(16000);

BENCHMARK_MAIN();
