// Serial Riccati reference vs. scan backend (sequential fold and OpenMP tree).

#include <benchmark/benchmark.h>

#include <random>

#include "pdilqr/harness/scenarios.hpp"
#include "pdilqr/lqr_kernels.hpp"
#include "pdilqr/parallel.hpp"
#include "pdilqr/random_qp.hpp"
#include "pdilqr/scan_lqr.hpp"

using namespace pdilqr;

namespace {

QPData make_qp(int N) {
  std::mt19937_64 rng(17);
  return random_qp(N, 8, 4, rng);
}

void BM_Riccati(benchmark::State& state) {
  const QPData qp = make_qp(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_lqr_sequential(qp));
}

void scan_bench(benchmark::State& state, ScanMode mode, int workers) {
  const QPData qp = make_qp(static_cast<int>(state.range(0)));
  ScanSettings s;
  s.mode = mode;
  s.workers = workers;
  int depth = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_lqr_scan(qp, s, &depth));
  state.counters["depth"] = depth;
  state.counters["workers"] = workers;
}

void BM_ScanFold(benchmark::State& state) { scan_bench(state, ScanMode::sequential, 1); }
void BM_ScanTreeSerial(benchmark::State& state) { scan_bench(state, ScanMode::tree, 1); }
void BM_ScanTreeOpenMP(benchmark::State& state) { scan_bench(state, ScanMode::tree, hardware_workers()); }

void sqp_bench(benchmark::State& state, Backend backend) {
  harness::RunConfig cfg;
  cfg.model = harness::ModelKind::srbd;
  cfg.horizon = static_cast<int>(state.range(0));
  const harness::Problem p = harness::build_problem(cfg, 1);
  SolverOptions opt;
  opt.backend = backend;
  opt.workers = opt.scan.workers = hardware_workers();
  for (auto _ : state) benchmark::DoNotOptimize(sqp_iterate(p.ocp, p.guess, opt));
}

void BM_SrbdIterateRiccati(benchmark::State& state) { sqp_bench(state, Backend::sequential); }
void BM_SrbdIterateScan(benchmark::State& state) { sqp_bench(state, Backend::scan); }

}  // namespace

BENCHMARK(BM_Riccati)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ScanFold)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ScanTreeSerial)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ScanTreeOpenMP)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_SrbdIterateRiccati)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SrbdIterateScan)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
