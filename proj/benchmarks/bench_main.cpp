#include <benchmark/benchmark.h>

#include "dicap/catalog.hpp"
#include "dicap/inner.hpp"
#include "dicap/outer.hpp"

namespace {

using namespace dicap;

void BM_Closure(benchmark::State& state) {
  const Problem& p = catalog_entry(140).problem;
  for (auto _ : state) {
    for (Mask seed = 0; seed <= p.all_messages(); ++seed) benchmark::DoNotOptimize(closure(p, seed).known);
  }
}
BENCHMARK(BM_Closure);

void BM_Canonical(benchmark::State& state) {
  const Problem& p = catalog_entry(155).problem;
  for (auto _ : state) benchmark::DoNotOptimize(p.canonical());
}
BENCHMARK(BM_Canonical);

void BM_Enumerate4(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_nonisomorphic(4).size());
}
BENCHMARK(BM_Enumerate4)->Unit(benchmark::kMillisecond);

void BM_Polymatroid(benchmark::State& state) {
  const Problem& p = catalog_entry(static_cast<int>(state.range(0))).problem;
  CapacityProfile unit = CapacityProfile::uniform(4, Rational(1));
  for (auto _ : state) benchmark::DoNotOptimize(thm1_polymatroid(p, unit));
}
BENCHMARK(BM_Polymatroid)->Arg(1)->Arg(140)->Arg(218)->Unit(benchmark::kMillisecond);

void BM_ClosureBound(benchmark::State& state) {
  const Problem& p = catalog_entry(140).problem;
  CapacityProfile unit = CapacityProfile::uniform(4, Rational(1));
  for (auto _ : state) benchmark::DoNotOptimize(thm2_sum_bound(p, unit));
}
BENCHMARK(BM_ClosureBound);

void BM_InnerAllServer(benchmark::State& state) {
  const Problem& p = catalog_entry(static_cast<int>(state.range(0))).problem;
  CapacityProfile unit = CapacityProfile::uniform(4, Rational(1));
  DeltaSpace full = DeltaSpace::full(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(distributed_cc_allserver(p, unit, ObjectiveSpec::sum(), full, true).value);
  }
}
BENCHMARK(BM_InnerAllServer)->Arg(140)->Arg(47)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
