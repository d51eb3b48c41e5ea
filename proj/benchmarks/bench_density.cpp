#include <benchmark/benchmark.h>

#include <classrank/density.hpp>

using namespace classrank;

static void BM_CountCEll(benchmark::State& state) {
    Poly2 f = family_poly(5, 7);
    uint32_t ell = uint32_t(state.range(0));
    for (auto _ : state) {
        uint64_t c = count_c_ell(f, ell);
        benchmark::DoNotOptimize(c);
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(ell) * ell * ell * ell);
}
BENCHMARK(BM_CountCEll)->Arg(13)->Arg(47)->Arg(97);

static void BM_EulerProduct(benchmark::State& state) {
    for (auto _ : state) {
        auto est = euler_product(5, 7, uint32_t(state.range(0)));
        benchmark::DoNotOptimize(est.partial_product);
    }
}
BENCHMARK(BM_EulerProduct)->Arg(20)->Arg(50);

static void BM_ClassifySquarefree(benchmark::State& state) {
    // typical scan values near 10^16
    mpz_class n("8713219387132193");
    for (auto _ : state) {
        auto st = classify_squarefree(n);
        benchmark::DoNotOptimize(st.verdict);
    }
}
BENCHMARK(BM_ClassifySquarefree);
