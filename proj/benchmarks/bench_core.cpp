#include <benchmark/benchmark.h>

#include "ofdmici/analytic.hpp"
#include "ofdmici/channel.hpp"
#include "ofdmici/montecarlo.hpp"
#include "ofdmici/stats.hpp"

using namespace ofdmici;

namespace {

const OfdmConfig& lte_config() {
    static const OfdmConfig cfg = lte10_config(4, 1.0, 5e-6);
    return cfg;
}

const ChannelRealization& itu_channel() {
    static const ChannelRealization chan =
        realize(builtin_profile("itu_vehicular"), {750.0, 8, 1});
    return chan;
}

void BM_DirichletKernel(benchmark::State& state) {
    double ft = 0.31;
    for (auto _ : state) {
        benchmark::DoNotOptimize(dirichlet_kernel(ft));
        ft += 1e-9;
    }
}
BENCHMARK(BM_DirichletKernel);

void BM_CoefficientSet(benchmark::State& state) {
    const auto& cfg = lte_config();
    const auto& chan = itu_channel();
    for (auto _ : state) {
        benchmark::DoNotOptimize(coefficient_set(cfg, chan, 0, 150));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(cfg.used_subcarriers.size()));
}
BENCHMARK(BM_CoefficientSet);

void BM_SymbolBep(benchmark::State& state) {
    const auto cs = coefficient_set(lte_config(), itu_channel(), 0, 150);
    for (auto _ : state) {
        benchmark::DoNotOptimize(symbol_bep(lte_config(), cs));
    }
}
BENCHMARK(BM_SymbolBep);

void BM_RunBer(benchmark::State& state) {
    const std::int64_t iterations = state.range(0);
    SimSpec spec;
    spec.cfg = lte_config();
    spec.targets = {{0, 150}};
    spec.iterations = iterations;
    spec.seed = 9;
    spec.min_error_bits = 0;
    spec.bootstrap_resamples = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_ber(spec, itu_channel()));
    }
    state.SetItemsProcessed(state.iterations() * iterations);
}
BENCHMARK(BM_RunBer)->Arg(1000)->Arg(10000);

void BM_SampleIci(benchmark::State& state) {
    const auto cs = coefficient_set(lte_config(), itu_channel(), 0, 150);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_ici(lte_config(), cs, 1000, 4));
    }
}
BENCHMARK(BM_SampleIci);

void BM_MardiaSkewness(benchmark::State& state) {
    const auto cs = coefficient_set(lte_config(), itu_channel(), 0, 150);
    const auto samples = sample_ici(lte_config(), cs, static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mardia_skewness(samples));
    }
}
BENCHMARK(BM_MardiaSkewness)->Arg(1000);

void BM_MardiaKurtosis(benchmark::State& state) {
    const auto cs = coefficient_set(lte_config(), itu_channel(), 0, 150);
    const auto samples = sample_ici(lte_config(), cs, 1000, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mardia_kurtosis(samples));
    }
}
BENCHMARK(BM_MardiaKurtosis);

} // namespace

BENCHMARK_MAIN();
