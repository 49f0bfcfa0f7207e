#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "relaysec/analytic.hpp"
#include "relaysec/montecarlo.hpp"
#include "relaysec/opa.hpp"
#include "relaysec/rng.hpp"
#include "relaysec/specfun.hpp"

using namespace relaysec;

namespace {

NetworkConfig mixed4() {
    return NetworkConfig::from_relays({{1.0, 0.1, 1.0},
                                       {0.1, 1.0, 1.0},
                                       {0.5, 0.5, 1.0},
                                       {0.25, 0.75, 1.0}});
}

void BM_AsrDfClosed(benchmark::State& state) {
    const auto config = mixed4();
    for (auto _ : state) benchmark::DoNotOptimize(asr_df_closed(config));
}
BENCHMARK(BM_AsrDfClosed);

void BM_AsrAfClosed(benchmark::State& state) {
    const auto config = NetworkConfig::iid_network(3, 0.5, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(asr_af_closed(config));
}
BENCHMARK(BM_AsrAfClosed);

void BM_DfQuadratureOracle(benchmark::State& state) {
    const auto config = NetworkConfig::iid_network(3, 0.5, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(asr_quadrature_oracle(config, Strategy::kDF));
}
BENCHMARK(BM_DfQuadratureOracle);

void BM_ExpOverPolePower(benchmark::State& state) {
    double beta = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::exp_over_pole_power(beta, 1.5, 3));
        beta = beta < 50.0 ? beta * 1.01 : 0.1;  // walk the series/cf crossover
    }
}
BENCHMARK(BM_ExpOverPolePower);

void BM_AsrKernel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(specfun::asr_kernel(2.0, 1.5, 2));
}
BENCHMARK(BM_AsrKernel);

void BM_EstimateAsrDf(benchmark::State& state) {
    const auto config = NetworkConfig::iid_network(4, 0.1, 1.0);
    const MonteCarloOptions opts{10'000, 1, 1, 0.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_asr(config, Strategy::kDF, {}, opts));
    state.SetItemsProcessed(std::int64_t(state.iterations()) * 10'000);
}
BENCHMARK(BM_EstimateAsrDf);

void BM_SolveOpa(benchmark::State& state) {
    TrialRng rng(1, 0);
    OpaProblem p;
    p.h_m.resize(4);
    p.h_e.resize(4);
    for (auto& x : p.h_m) {
        const auto [re, im] = rng.normal_pair();
        x = {re, im};
    }
    for (auto& x : p.h_e) {
        const auto [re, im] = rng.normal_pair();
        x = {re, im};
    }
    p.gamma0 = 2.0;
    for (auto _ : state) benchmark::DoNotOptimize(solve_opa(p));
}
BENCHMARK(BM_SolveOpa);

void BM_PhiloxUniform(benchmark::State& state) {
    TrialRng rng(1, 0);
    double acc = 0.0;
    for (auto _ : state) acc += rng.uniform01();
    benchmark::DoNotOptimize(acc);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxUniform);

}  // namespace

BENCHMARK_MAIN();
