#include <benchmark/benchmark.h>

#include "orlicz/function.hpp"
#include "orlicz/kernels.hpp"
#include "orlicz/young.hpp"

namespace {

using namespace orlicz;

struct Fixture {
  explicit Fixture(int k)
      : space(DyadicSpace::random(k, 7)),
        f(SimpleFunction::random(space, 11)),
        partition(Partition::random_intervals(space, 64, 3)),
        out(space->cells()) {}
  SpaceHandle space;
  SimpleFunction f;
  Partition partition;
  std::vector<double> out;
};

template <bool Parallel>
void BM_WeightedSum(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    double s = Parallel ? kernels::parallel::weighted_sum(fx.f.values(), fx.space->weights())
                        : kernels::serial::weighted_sum(fx.f.values(), fx.space->weights());
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(fx.space->cells()));
}

template <bool Parallel>
void BM_ModularSum(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)));
  const auto phi = YoungFunction::power_log(2.0);
  for (auto _ : state) {
    double s = Parallel
                   ? kernels::parallel::modular_sum(fx.f.values(), fx.space->weights(), phi, 0.7)
                   : kernels::serial::modular_sum(fx.f.values(), fx.space->weights(), phi, 0.7);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(fx.space->cells()));
}

template <bool Parallel>
void BM_BlockAverage(benchmark::State& state) {
  Fixture fx(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    if (Parallel) {
      kernels::parallel::block_average(fx.f.values(), fx.partition, fx.out);
    } else {
      kernels::serial::block_average(fx.f.values(), fx.partition, fx.out);
    }
    benchmark::DoNotOptimize(fx.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(fx.space->cells()));
}

}  // namespace

BENCHMARK(BM_WeightedSum<false>)->DenseRange(10, 20, 2);
BENCHMARK(BM_WeightedSum<true>)->DenseRange(10, 20, 2);
BENCHMARK(BM_ModularSum<false>)->DenseRange(10, 20, 2);
BENCHMARK(BM_ModularSum<true>)->DenseRange(10, 20, 2);
BENCHMARK(BM_BlockAverage<false>)->DenseRange(10, 20, 2);
BENCHMARK(BM_BlockAverage<true>)->DenseRange(10, 20, 2);

BENCHMARK_MAIN();
