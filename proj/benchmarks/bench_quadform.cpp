#include <benchmark/benchmark.h>

#include <classrank/family.hpp>
#include <classrank/quadform.hpp>

using namespace classrank;

namespace {

// two independent classes at a small discriminant (int64 fast path)
const QuadForm& small_f1() {
    static QuadForm f = reduce(make_form(35, 13091, mpz_class(1500625))); // disc -38713219
    return f;
}
const QuadForm& small_f2() {
    static QuadForm f = reduce(make_form(25, 591, mpz_class(390625)));
    return f;
}

// witness pair at a 39-digit discriminant (mpz path)
std::pair<QuadForm, QuadForm> big_pair() {
    auto pt = make_point(5, 1579, 21411, 21413);
    auto [f1, f2] = witness_forms(pt);
    return {reduce(f1), reduce(f2)};
}

} // namespace

static void BM_ComposeSmallDisc(benchmark::State& state) {
    QuadForm f = small_f1(), g = small_f2();
    for (auto _ : state) {
        QuadForm r = compose(f, g);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_ComposeSmallDisc);

static void BM_ComposeLargeDisc(benchmark::State& state) {
    auto [f, g] = big_pair();
    for (auto _ : state) {
        QuadForm r = compose(f, g);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_ComposeLargeDisc);

static void BM_VerifyRank2LargeDisc(benchmark::State& state) {
    auto [f, g] = big_pair();
    for (auto _ : state) {
        auto cert = verify_rank2(5, f, g);
        benchmark::DoNotOptimize(cert.valid);
    }
}
BENCHMARK(BM_VerifyRank2LargeDisc);

static void BM_EnumerateClassGroup(benchmark::State& state) {
    mpz_class disc = -mpz_class(state.range(0));
    if (mpz_fdiv_ui(disc.get_mpz_t(), 4) == 2) disc -= 1; // land on 0 or 1 mod 4
    if (mpz_fdiv_ui(disc.get_mpz_t(), 4) == 3) disc -= 2;
    for (auto _ : state) {
        auto s = enumerate_class_group(disc);
        benchmark::DoNotOptimize(s.class_number);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EnumerateClassGroup)->RangeMultiplier(10)->Range(100000, 10000000)->Complexity();
