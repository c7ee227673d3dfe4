#include <benchmark/benchmark.h>

#include "heatstab/feasibility.hpp"
#include "heatstab/legendre.hpp"
#include "heatstab/lmi.hpp"
#include "heatstab/simulator.hpp"
#include "heatstab/system.hpp"

using namespace heatstab;

static void BM_BuildOperators(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(legendre::build_operators(N));
  }
}
BENCHMARK(BM_BuildOperators)->Arg(4)->Arg(12);

static void BM_Project(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  Eigen::VectorXd u(1001);
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    u(i) = x * x * (1.0 - x) + 0.3 * std::cos(5.0 * x);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(legendre::project(u, N));
  }
}
BENCHMARK(BM_Project)->Arg(2)->Arg(8);

static void BM_AssemblePsi(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const SystemData sys = paper_example(100.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_psi(sys, N));
  }
}
BENCHMARK(BM_AssemblePsi)->Arg(0)->Arg(6)->Arg(12);

static void BM_SolveFeasibility(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const SystemData sys = paper_example(100.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_feasibility(sys, N));
  }
}
BENCHMARK(BM_SolveFeasibility)->Arg(0)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_SolveInfeasible(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const SystemData sys = paper_example(100.0, 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_feasibility(sys, N));
  }
}
BENCHMARK(BM_SolveInfeasible)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_SimulateUnitTime(benchmark::State& state) {
  const SystemData sys = paper_example(100.0, 1.0);
  Eigen::VectorXd X0(4);
  X0 << 0.0, 1.0, -1.0, 0.0;
  const auto u0 = benchmark_initial_data(sys, X0);
  SimConfig cfg;
  cfg.intervals = static_cast<int>(state.range(0));
  cfg.t_final = 1.0;
  cfg.sample_stride = 1 << 20;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(sys, X0, u0, cfg));
  }
}
BENCHMARK(BM_SimulateUnitTime)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
