#include "idealtally/catalog.hpp"
#include "idealtally/fund_domain.hpp"

#include <benchmark/benchmark.h>

using namespace idealtally;

namespace {

struct Setup {
    NumberField K;
    PartitionSpec partition;
    Setup(const FieldConfig& cfg) : K(build_field(cfg)) {
        partition = build_partition(K, build_unit_lattice(K), choose_c(K));
    }
};

}  // namespace

static void BM_MonteCarloVolume(benchmark::State& state) {
    Setup s(catalog::sqrt5());
    DomainSpec cell = make_cell_domain(s.K, s.partition);
    const auto samples = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_volume(cell, samples, 7));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(samples));
}
BENCHMARK(BM_MonteCarloVolume)->Arg(10'000)->Arg(100'000);

static void BM_PartitionIdentity(benchmark::State& state) {
    Setup s(catalog::sqrt5());
    IdealCountTable table = build_count_table(s.K, 100);
    for (auto _ : state) {
        auto res = verify_partition_identity(s.K, s.partition, BigInt(100), table);
        benchmark::DoNotOptimize(res.point_total);
    }
}
BENCHMARK(BM_PartitionIdentity);

static void BM_ChartEval(benchmark::State& state) {
    Setup s(catalog::zeta11());
    BoundaryAtlas atlas = boundary_atlas(make_cell_domain(s.K, s.partition));
    CounterRng rng(9);
    ChartIndex chart = sample_chart(atlas, rng);
    std::vector<double> u(static_cast<std::size_t>(s.K.degree - 1), 0.3);
    for (auto _ : state) {
        u[0] = rng.uniform();
        benchmark::DoNotOptimize(atlas_chart_point(atlas, chart, u));
    }
}
BENCHMARK(BM_ChartEval);
