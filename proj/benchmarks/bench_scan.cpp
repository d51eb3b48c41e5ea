#include <benchmark/benchmark.h>

#include <classrank/scan.hpp>

using namespace classrank;

static void BM_RunScan(benchmark::State& state) {
    mpz_class hi(state.range(0));
    Box box{1, hi, 1, hi, true};
    for (auto _ : state) {
        auto rep = run_scan(5, 7, box, HypothesisMode::Relaxed);
        benchmark::DoNotOptimize(rep.S1);
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * state.range(0) * state.range(0));
}
BENCHMARK(BM_RunScan)->Arg(8)->Arg(15)->Arg(25);

static void BM_IdentityFuzzPoint(benchmark::State& state) {
    mpz_class q = 9973, a = 999983, b = 999979;
    for (auto _ : state) {
        auto pt = make_point(13, q, a, b);
        benchmark::DoNotOptimize(pt.D);
    }
}
BENCHMARK(BM_IdentityFuzzPoint);
