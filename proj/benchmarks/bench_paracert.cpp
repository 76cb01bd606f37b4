#include "paracert/checker.hpp"
#include "paracert/derivation.hpp"
#include "paracert/primes.hpp"

#include <benchmark/benchmark.h>

using namespace paracert;

static void BM_Sieve(benchmark::State& state) {
    SieveOptions opts;
    opts.threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(PrimeTable::build(static_cast<std::uint64_t>(state.range(0)), opts));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sieve)->Args({1 << 20, 1})->Args({1 << 24, 1})->Args({1 << 24, 4})->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_GoldbachPair(benchmark::State& state) {
    const auto policy = static_cast<GoldbachPolicy>(state.range(0));
    const PrimeTable table = PrimeTable::build(1 << 22);
    std::uint64_t m = 4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(goldbach_pair(m, table, policy));
        m = m + 2 > (1u << 22) ? 4 : m + 2;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GoldbachPair)->Arg(static_cast<int>(GoldbachPolicy::MaxQ))->Arg(static_cast<int>(GoldbachPolicy::MinQ));

static void BM_CertifyRange(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(certify_range(static_cast<std::uint64_t>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CertifyRange)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_CheckSteps(benchmark::State& state) {
    const auto result = certify_range(static_cast<std::uint64_t>(state.range(0)));
    CheckOptions opts;
    opts.threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(check_steps(result.store.steps(), result.store.target_bound(), opts));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(result.store.size()));
}
BENCHMARK(BM_CheckSteps)->Args({100000, 1})->Args({1000000, 1})->Args({1000000, 4})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
