#include "igw/estimators.hpp"
#include "igw/model.hpp"

#include <benchmark/benchmark.h>

using namespace igw;

namespace {

void bm_fit(benchmark::State& state, const WeightScheme& scheme) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const CountPath path = simulate_path(ModelSpec::poisson_inarch(2.0), n, {7, 0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit(path, scheme));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void bm_fit_ols(benchmark::State& state) { bm_fit(state, WeightScheme::ols()); }
void bm_fit_wei(benchmark::State& state) {
    bm_fit(state, WeightScheme::wei_winnicki());
}
void bm_fit_recip_t(benchmark::State& state) {
    bm_fit(state, WeightScheme::reciprocal_t());
}

void bm_estimate_tau(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const CountPath path = simulate_path(ModelSpec::poisson_inarch(2.0), n, {7, 0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_tau(path));
    }
}

} // namespace

BENCHMARK(bm_fit_ols)->Arg(100)->Arg(10000);
BENCHMARK(bm_fit_wei)->Arg(100)->Arg(10000);
BENCHMARK(bm_fit_recip_t)->Arg(100)->Arg(10000);
BENCHMARK(bm_estimate_tau)->Arg(10000);
