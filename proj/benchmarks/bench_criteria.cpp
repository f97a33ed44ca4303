#include <benchmark/benchmark.h>

#include "dobrushin/criteria.hpp"

using namespace dobrushin;

namespace {

void BM_IsingBound(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(dobrushin_critical_bound(SpinModel::ising(), 2).beta_J_star);
  }
}
BENCHMARK(BM_IsingBound);

void BM_PottsBound(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dobrushin_critical_bound(SpinModel::potts(q), 2).beta_J_star);
  }
}
BENCHMARK(BM_PottsBound)->Arg(3)->Arg(30)->Arg(64)->Arg(1000);

void BM_PottsScan(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(potts_scan(2, 2, 100).size());
}
BENCHMARK(BM_PottsScan)->Unit(benchmark::kMillisecond);

// Table evaluation at a fixed beta, from a cold cache each time.
void BM_DsReport(benchmark::State& state) {
  const auto block = state.range(0) == 0 ? LatticeBlock::square3x3() : LatticeBlock::cube2x2x2();
  const auto bases = enumerate_block_boundaries(block, BoundaryMode::kCurated);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ds_report(block, SpinModel::ising(), 0.2, bases).resulting_distance);
  }
}
BENCHMARK(BM_DsReport)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DsBoundSquare2x2(benchmark::State& state) {
  const auto block = LatticeBlock::square2x2();
  const auto bases = enumerate_block_boundaries(block, BoundaryMode::kCurated);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ds_critical_bound(block, SpinModel::ising(), bases).beta_J_star);
  }
}
BENCHMARK(BM_DsBoundSquare2x2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
