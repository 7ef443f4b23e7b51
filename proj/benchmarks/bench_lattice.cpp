#include "idealtally/lattice.hpp"
#include "idealtally/rng.hpp"

#include <benchmark/benchmark.h>

using namespace idealtally;

namespace {

Lattice random_lattice(CounterRng& rng, int dim) {
    for (;;) {
        Eigen::MatrixXd m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                m(i, j) = static_cast<double>(static_cast<long long>(rng.below(19)) - 9);
        try {
            return make_lattice(m);
        } catch (const std::invalid_argument&) {
        }
    }
}

}  // namespace

static void BM_LllExact(benchmark::State& state) {
    CounterRng rng(1);
    const int dim = static_cast<int>(state.range(0));
    Lattice L = random_lattice(rng, dim);
    for (auto _ : state) benchmark::DoNotOptimize(lll_reduce(L));
}
BENCHMARK(BM_LllExact)->Arg(3)->Arg(5)->Arg(8);

static void BM_LllFloating(benchmark::State& state) {
    CounterRng rng(2);
    const int dim = static_cast<int>(state.range(0));
    Lattice L = random_lattice(rng, dim);
    Lattice scaled = make_lattice(L.basis * 1.4142135623730951);
    for (auto _ : state) benchmark::DoNotOptimize(lll_reduce(scaled));
}
BENCHMARK(BM_LllFloating)->Arg(3)->Arg(5)->Arg(8);

static void BM_SuccessiveMinima(benchmark::State& state) {
    CounterRng rng(3);
    const int dim = static_cast<int>(state.range(0));
    Lattice L = random_lattice(rng, dim);
    for (auto _ : state) benchmark::DoNotOptimize(successive_minima(L, dim));
}
BENCHMARK(BM_SuccessiveMinima)->Arg(2)->Arg(4)->Arg(6);
