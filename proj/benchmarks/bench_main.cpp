#include <benchmark/benchmark.h>

#include <vector>

#include "anlab/diagnostics.hpp"
#include "anlab/initial_data.hpp"
#include "anlab/solver.hpp"
#include "anlab/static_soliton.hpp"

namespace {

using namespace anlab;

FieldState gaussian(std::size_t cells) {
  const auto grid = make_grid(2.5, cells);
  return initial_data(GaussianLump{}, grid, -1.0);
}

void BM_Rhs(benchmark::State& bench) {
  const auto cells = static_cast<std::size_t>(bench.range(0));
  const auto state = gaussian(cells);
  std::vector<double> du(cells);
  std::vector<double> dv(cells);
  const OuterBoundary bc = DirichletConstant{};
  for (auto _ : bench) {
    rhs(state, ModelKind::AdkinsNappi, bc, du, dv);
    benchmark::DoNotOptimize(dv.data());
  }
  bench.SetItemsProcessed(bench.iterations() * static_cast<std::int64_t>(cells));
}
BENCHMARK(BM_Rhs)->RangeMultiplier(4)->Range(1024, 16384);

void BM_StepperAdvance(benchmark::State& bench) {
  const auto cells = static_cast<std::size_t>(bench.range(0));
  auto state = gaussian(cells);
  Stepper stepper(ModelKind::AdkinsNappi, DirichletConstant{}, state.grid);
  const double dt = 0.5 * state.grid.spacing();
  for (auto _ : bench) {
    stepper.advance(state, dt);
    benchmark::DoNotOptimize(state.u.data());
  }
  bench.SetItemsProcessed(bench.iterations() * static_cast<std::int64_t>(cells));
}
BENCHMARK(BM_StepperAdvance)->RangeMultiplier(4)->Range(1024, 16384);

// The slice time creeps forward so consecutive records stay ordered.
void BM_SeriesRecord(benchmark::State& bench) {
  const auto cells = static_cast<std::size_t>(bench.range(0));
  auto state = gaussian(cells);
  SeriesRecorder recorder(ModelKind::AdkinsNappi, 0.5);
  for (auto _ : bench) {
    benchmark::DoNotOptimize(recorder.record(state));
    state.t += 1e-9;
  }
}
BENCHMARK(BM_SeriesRecord)->RangeMultiplier(4)->Range(1024, 16384);

void BM_Shoot(benchmark::State& bench) {
  const double r_max = static_cast<double>(bench.range(0));
  const double slope = solve_static(r_max, 1024, 1e-10).slope;
  for (auto _ : bench) benchmark::DoNotOptimize(shoot(slope, r_max));
}
BENCHMARK(BM_Shoot)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
