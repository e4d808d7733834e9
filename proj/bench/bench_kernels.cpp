// Serial reference kernels against their fast or parallel counterparts.

#include "dcf/factorizer.hpp"
#include "dcf/harness.hpp"
#include "dcf/sieve.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <thread>

using namespace dcf;

namespace {

int hardware_workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

void BM_SieveReference(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::simple_sieve(static_cast<Natural>(state.range(0))));
}

void BM_SieveSegmentedSerial(benchmark::State& state)
{
    SieveOptions opts;
    opts.workers = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(sieve_primes(static_cast<Natural>(state.range(0)), opts));
}

void BM_SieveSegmentedParallel(benchmark::State& state)
{
    SieveOptions opts;
    opts.workers = hardware_workers();
    for (auto _ : state)
        benchmark::DoNotOptimize(sieve_primes(static_cast<Natural>(state.range(0)), opts));
}

void BM_TransitionNaive(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::transition_matrix_naive(static_cast<Natural>(state.range(0))));
}

void BM_TransitionStreaming(benchmark::State& state)
{
    SieveOptions opts;
    opts.workers = hardware_workers();
    for (auto _ : state)
        benchmark::DoNotOptimize(transition_matrix(static_cast<Natural>(state.range(0)), opts));
}

// A window of p values near the argument, so every residue class mod the filters is visited.
template <class F>
void over_window(benchmark::State& state, F&& f)
{
    const auto base = static_cast<Natural>(state.range(0)) / 10 * 10 + 1;
    for (auto _ : state)
        for (Natural p = base; p < base + 200; p += 10)
            benchmark::DoNotOptimize(f(p));
}

void BM_DSearchPlain(benchmark::State& state)
{
    over_window(state, [](Natural p) { return reference::dsearch_plain(p, kSevenThree); });
}

void BM_DSearchFiltered(benchmark::State& state)
{
    over_window(state, [](Natural p) { return dsearch_representations(p, kSevenThree); });
}

void BM_LambdaScan(benchmark::State& state)
{
    over_window(state, [](Natural p) { return reference::lambda_scan(p); });
}

void BM_LambdaInversion(benchmark::State& state)
{
    over_window(state, [](Natural p) { return lambda_representations(p); });
}

void BM_OracleNaive(benchmark::State& state)
{
    over_window(state, [](Natural p) { return reference::oracle_naive(p, kSevenThree); });
}

void BM_OracleDivisors(benchmark::State& state)
{
    over_window(state, [](Natural p) { return oracle_representations(p, kSevenThree); });
}

void BM_Sweep(benchmark::State& state)
{
    SweepConfig cfg;
    cfg.lo = 1;
    cfg.hi = 200'000;
    cfg.workers = static_cast<int>(state.range(0));
    cfg.cross_check = false;
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep(cfg));
}

} // namespace

BENCHMARK(BM_SieveReference)->Arg(10'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SieveSegmentedSerial)->Arg(10'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SieveSegmentedParallel)->Arg(10'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransitionNaive)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransitionStreaming)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DSearchPlain)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DSearchFiltered)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LambdaScan)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LambdaInversion)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleNaive)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleDivisors)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
