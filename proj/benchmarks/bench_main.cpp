#include <benchmark/benchmark.h>

#include "rabi/gfunction.hpp"
#include "rabi/oracle.hpp"
#include "rabi/recurrence.hpp"
#include "rabi/spectrum.hpp"
#include "rabi/sweep.hpp"

using namespace rabi;

namespace {
const ModelParams kRef{1.0, 0.7, 0.4, 0.0};
}

static void BM_EvalG(benchmark::State& state) {
    const NormalizedParams np = normalize(kRef);
    const double xs[] = {-0.4, 0.3, 1.37, 2.61, 3.5, 4.85};
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_G(Parity::Plus, xs[i], np).value);
        i = (i + 1) % 6;
    }
}
BENCHMARK(BM_EvalG);

static void BM_EvalGEps(benchmark::State& state) {
    const NormalizedParams np = normalize({1.0, 0.5, 0.7, 0.2});
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_G_eps(1.37, np).value);
    }
}
BENCHMARK(BM_EvalGEps);

static void BM_MinimalSolution(benchmark::State& state) {
    const NormalizedParams np = normalize(kRef);
    for (auto _ : state) {
        benchmark::DoNotOptimize(minimal_solution(1.37, np).v1());
    }
}
BENCHMARK(BM_MinimalSolution);

static void BM_FindRegular(benchmark::State& state) {
    const double x_max = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_regular(Parity::Plus, -1.0, x_max, kRef).size());
    }
}
BENCHMARK(BM_FindRegular)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_OracleBlock(benchmark::State& state) {
    const int n_tr = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const auto h = build(OracleModel::ParityBlockPlus, kRef, n_tr);
        benchmark::DoNotOptimize(eigensolve(h, false).values.front());
    }
}
BENCHMARK(BM_OracleBlock)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_SmallSweep(benchmark::State& state) {
    for (auto _ : state) {
        const auto s = sweep_rabi(0.4, 1.0, 0.05, 0.8, 20, 4);
        benchmark::DoNotOptimize(detect_crossings(s).size());
    }
}
BENCHMARK(BM_SmallSweep)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
