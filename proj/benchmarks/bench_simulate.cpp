#include "igw/model.hpp"

#include <benchmark/benchmark.h>

using namespace igw;

namespace {

void bm_simulate_inarch(benchmark::State& state) {
    const ModelSpec spec = ModelSpec::poisson_inarch(2.0);
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t stream = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_path(spec, n, {1, stream++}));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void bm_simulate_geometric(benchmark::State& state) {
    const ModelSpec spec{OffspringDist::geometric(1.0),
                         ImmigrationDist::poisson(2.0)};
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t stream = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_path(spec, n, {1, stream++}));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void bm_simulate_bernoulli(benchmark::State& state) {
    const ModelSpec spec{OffspringDist::bernoulli(0.5),
                         ImmigrationDist::poisson(2.0)};
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t stream = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_path(spec, n, {1, stream++}));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

} // namespace

BENCHMARK(bm_simulate_inarch)->Arg(100)->Arg(1000)->Arg(100000);
BENCHMARK(bm_simulate_geometric)->Arg(100)->Arg(1000)->Arg(100000);
BENCHMARK(bm_simulate_bernoulli)->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
