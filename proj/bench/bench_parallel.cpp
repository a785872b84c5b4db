// Serial reference paths against the OpenMP kernels.
//
//   xyqd_bench --benchmark_filter=Multistart

#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>
#include <numbers>

#include "xyqd/quantum_core.hpp"
#include "xyqd/spin_model.hpp"
#include "xyqd/sweep.hpp"

namespace {

using namespace xyqd;

const double kGamma = std::sin(std::numbers::pi / 3.0);

void BM_Multistart(benchmark::State& state, Execution mode) {
  const int n = static_cast<int>(state.range(0));
  const auto g = ground_state(build_xy_hamiltonian({n, 1.0, kGamma, 0.8}));
  OptimizerConfig opt;
  opt.starts = 12;
  for (auto _ : state) benchmark::DoNotOptimize(global_gqd(g.state, opt, mode).value);
  state.counters["threads"] = mode == Execution::serial ? 1 : omp_get_max_threads();
}

void BM_Sweep(benchmark::State& state, Execution mode) {
  const int n = static_cast<int>(state.range(0));
  const auto grid = make_grid(0.5, 1.0, 0.05);
  OptimizerConfig opt;
  opt.starts = 8;
  for (auto _ : state) benchmark::DoNotOptimize(sweep_field({n, 1.0, kGamma}, grid, opt, {}, mode).points.size());
  state.counters["points"] = static_cast<double>(grid.size());
}

BENCHMARK_CAPTURE(BM_Multistart, serial, Execution::serial)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Multistart, parallel, Execution::parallel)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Sweep, serial, Execution::serial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Sweep, parallel, Execution::parallel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
