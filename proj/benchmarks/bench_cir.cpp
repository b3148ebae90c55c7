#include "igw/cir.hpp"

#include <benchmark/benchmark.h>

using namespace igw;

namespace {

void bm_simulate_cir(benchmark::State& state) {
    const CirConfig cfg{2.0, 1.0, static_cast<std::size_t>(state.range(0))};
    std::uint64_t stream = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_cir(cfg, {3, stream++}));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_limit_functionals(benchmark::State& state) {
    const CirConfig cfg{2.0, 1.0, static_cast<std::size_t>(state.range(0))};
    const CirPath path = simulate_cir(cfg, {3, 0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(limit_functionals(path, cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_sample_wls_slope(benchmark::State& state) {
    const CirConfig cfg{2.0, 1.0, static_cast<std::size_t>(state.range(0))};
    std::uint64_t stream = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sample_limit_law(LimitLaw::WlsSlope, cfg, 10, {5, stream += 100}));
    }
    state.SetItemsProcessed(state.iterations() * 10);
}

} // namespace

BENCHMARK(bm_simulate_cir)->Arg(1000)->Arg(10000);
BENCHMARK(bm_limit_functionals)->Arg(1000)->Arg(10000);
BENCHMARK(bm_sample_wls_slope)->Arg(250)->Arg(1000);
