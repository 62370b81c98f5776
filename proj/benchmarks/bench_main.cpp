#include <benchmark/benchmark.h>

#include <cstdint>

#include "qkdsim/engine.hpp"
#include "qkdsim/postprocess.hpp"
#include "qkdsim/rng.hpp"
#include "qkdsim/source.hpp"

using namespace qkdsim;

namespace {

Bits random_bits(std::size_t n, RandomStream& rng) {
    Bits bits(n);
    for (auto& b : bits) b = rng.bit();
    return bits;
}

void bench_monte_carlo_slots(benchmark::State& state) {
    ScenarioConfig config;
    config.mode = SimMode::monte_carlo;
    config.slot_count = static_cast<std::uint64_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        config.seed = seed++;
        benchmark::DoNotOptimize(run_link(config));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_monte_carlo_slots)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void bench_analytic_link(benchmark::State& state) {
    ScenarioConfig config;
    config.duration_s = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(run_link(config));
}
BENCHMARK(bench_analytic_link)->Unit(benchmark::kMicrosecond);

void bench_cascade(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const double error_rate = 0.05;
    RandomStream setup_rng(42);
    Bits alice = random_bits(n, setup_rng);
    Bits noisy = alice;
    for (auto& b : noisy)
        if (setup_rng.bernoulli(error_rate)) b ^= 1;
    CascadeParams params;
    std::uint64_t seed = 7;
    for (auto _ : state) {
        RandomStream rng(seed++);
        benchmark::DoNotOptimize(reconcile(alice, noisy, error_rate, params, rng));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_cascade)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

void bench_toeplitz(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t m = n / 2;
    RandomStream rng(9);
    Bits key = random_bits(n, rng);
    Bits seed = random_bits(n + m - 1, rng);
    for (auto _ : state) benchmark::DoNotOptimize(privacy_amplify(key, seed, m));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bench_toeplitz)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
