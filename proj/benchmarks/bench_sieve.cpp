#include "idealtally/catalog.hpp"
#include "idealtally/ideal_count.hpp"

#include <benchmark/benchmark.h>

using namespace idealtally;

static void BM_CountTable(benchmark::State& state) {
    NumberField K = build_field(catalog::sqrt5());
    const auto T = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        IdealCountTable table = build_count_table(K, T);
        benchmark::DoNotOptimize(table.prefix.back());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(T));
}
BENCHMARK(BM_CountTable)->Arg(1 << 14)->Arg(1 << 17)->Arg(1 << 20);

static void BM_SegmentedSigma(benchmark::State& state) {
    NumberField K = build_field(catalog::sqrt5());
    const auto T = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sigma_segmented(K, T, 1 << 14));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(T));
}
BENCHMARK(BM_SegmentedSigma)->Arg(1 << 14)->Arg(1 << 17);

static void BM_FactorPrime(benchmark::State& state) {
    NumberField K = build_field(catalog::zeta11());
    std::uint64_t p = 10007;
    for (auto _ : state) benchmark::DoNotOptimize(factor_prime(K, p));
}
BENCHMARK(BM_FactorPrime);
