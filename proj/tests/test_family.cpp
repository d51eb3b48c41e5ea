#include <doctest.h>

#include <classrank/family.hpp>

#include <random>

using namespace classrank;

TEST_SUITE("family") {

    TEST_CASE("eval_g worked examples") {
        CHECK(eval_g(2, 1, 5) == 31);
        CHECK(eval_g(1, 1, 5) == 5);
        CHECK(eval_g(3, 2, 5) == 211);
        CHECK(eval_g(7, 5, 5) == 6841);
    }

    TEST_CASE("eval_g identities under fuzz") {
        std::mt19937_64 rng(42);
        const unsigned ps[] = {5, 7, 11, 13};
        for (int i = 0; i < 2000; ++i) {
            unsigned p = ps[rng() % 4];
            mpz_class a((unsigned long)(rng() % 100000 + 1));
            mpz_class b((unsigned long)(rng() % 100000 + 1));
            mpz_class g = eval_g(a, b, p);
            mpz_class ap, bp;
            mpz_pow_ui(ap.get_mpz_t(), a.get_mpz_t(), p);
            mpz_pow_ui(bp.get_mpz_t(), b.get_mpz_t(), p);
            CHECK((a - b) * g == ap - bp);
            mpz_class am1;
            mpz_pow_ui(am1.get_mpz_t(), a.get_mpz_t(), p - 1);
            CHECK(eval_g(a, a, p) == p * am1);
        }
    }

    TEST_CASE("eval_f worked examples") {
        CHECK(eval_f(5, 3, 1, 1) == 947);
        CHECK(eval_f(5, 5, 7, 5) == 38713219);
        CHECK(eval_f(5, 3, 2, 1) == -43972);
    }

    TEST_CASE("eval_f is symmetric") {
        std::mt19937_64 rng(43);
        for (int i = 0; i < 2000; ++i) {
            unsigned p = (i & 1) ? 5 : 7;
            mpz_class q = next_prime(mpz_class((unsigned long)(rng() % 1000 + 2)));
            mpz_class a((unsigned long)(rng() % 100000 + 1));
            mpz_class b((unsigned long)(rng() % 100000 + 1));
            CHECK(eval_f(p, q, a, b) == eval_f(p, q, b, a));
        }
    }

    TEST_CASE("make_point worked examples") {
        auto pt = make_point(5, 5, 7, 5);
        CHECK(pt.X1 == 13091);
        CHECK(pt.Y1 == 35);
        CHECK(pt.X2 == 591);
        CHECK(pt.Y2 == 25);
        CHECK(pt.D == 38713219);
        CHECK_FALSE(pt.degenerate());

        auto deg = make_point(5, 3, 1, 1);
        CHECK(deg.X1 == 5);
        CHECK(deg.X2 == 5);
        CHECK(deg.Y1 == 3);
        CHECK(deg.Y2 == 3);
        CHECK(deg.D == 947);
        CHECK(deg.degenerate());

        // the identity holds even when D is negative
        auto neg = make_point(5, 3, 2, 1);
        CHECK(neg.D == -43972);
        CHECK(neg.X1 == 274);
        CHECK(neg.Y1 == 6);
        mpz_class y1p;
        mpz_pow_ui(y1p.get_mpz_t(), neg.Y1.get_mpz_t(), 5);
        CHECK(neg.X1 * neg.X1 - 4 * y1p == -neg.D);
    }

    TEST_CASE("identity fuzz") {
        std::mt19937_64 rng(20260808);
        const unsigned ps[] = {5, 7, 11, 13};
        for (int i = 0; i < 2000; ++i) {
            unsigned p = ps[rng() % 4];
            mpz_class q = next_prime(mpz_class((unsigned long)(rng() % 10000 + 2)));
            mpz_class a((unsigned long)(rng() % 1000000 + 1));
            mpz_class b((unsigned long)(rng() % 1000000 + 1));
            // make_point throws internal_inconsistency_error if the identity fails
            auto pt = make_point(p, q, a, b);
            CHECK(pt.D == eval_f(p, q, a, b));
        }
    }

    TEST_CASE("window comparisons are exact") {
        // (5,5,7,5) strict: lower bound holds for a = 7, upper fails
        CHECK(window_contains(5, 5, 7) == false);
        mpz_class q5p;
        mpz_ui_pow_ui(q5p.get_mpz_t(), 5, 5);
        CHECK(mpz_class(2 * 5 * 7) * mpz_class(2 * 5 * 7) * mpz_class(2 * 5 * 7) > q5p);

        auto rep = check_hypotheses(make_point(5, 5, 7, 5), HypothesisMode::Strict);
        CHECK_FALSE(rep.in_window);
        CHECK_FALSE(rep.accepted());

        auto relaxed = check_hypotheses(make_point(5, 3, 1, 1), HypothesisMode::Relaxed);
        CHECK(relaxed.coprime_ok);  // gcd(5, 3) = 1
        CHECK(relaxed.residue_ok);  // 947 = 3 mod 4
        CHECK(relaxed.positive);
        CHECK(relaxed.squarefree.verdict == SquarefreeVerdict::Squarefree);
        CHECK(relaxed.accepted());

        auto neg = check_hypotheses(make_point(5, 3, 2, 1), HypothesisMode::Relaxed);
        CHECK_FALSE(neg.positive);
        CHECK_FALSE(neg.accepted());
    }

    TEST_CASE("strict_window golden values") {
        CHECK_FALSE(strict_window(5, 11).has_value());
        CHECK_FALSE(strict_window(5, 131).has_value());
        auto w139 = strict_window(5, 139);
        REQUIRE(w139.has_value());
        CHECK(w139->first == 373);
        CHECK(w139->second == 373);
        auto w1031 = strict_window(5, 1031);
        REQUIRE(w1031.has_value());
        CHECK(w1031->first == 10522);
        CHECK(w1031->second == 10523);
        // agreement with the membership predicate at the boundary
        CHECK(window_contains(5, 139, 373));
        CHECK_FALSE(window_contains(5, 139, 372));
        CHECK_FALSE(window_contains(5, 139, 374));
    }

    TEST_CASE("witness_forms") {
        auto pt = make_point(5, 5, 7, 5);
        auto [f1, f2] = witness_forms(pt);
        CHECK(f1.a == 35);
        CHECK(f1.b == 13091);
        CHECK(f1.c == 1500625);
        CHECK(f2.a == 25);
        CHECK(f2.b == 591);
        CHECK(f2.c == 390625);
        CHECK(f1.discriminant() == -38713219);
        CHECK(f2.discriminant() == -38713219);

        auto deg = make_point(5, 3, 1, 1);
        auto [g1, g2] = witness_forms(deg);
        CHECK(g1 == g2);
        CHECK(g1 == QuadForm{3, 5, 81});

        // even X1 means -D = 0 mod 4: rejected with the residue named
        auto evenpt = make_point(5, 5, 7, 6);
        CHECK(evenpt.D > 0);
        CHECK(mpz_even_p(evenpt.X1.get_mpz_t()));
        CHECK_THROWS_WITH_AS(witness_forms(evenpt), doctest::Contains("residue"), contract_error);

        // negative D rejected up front
        CHECK_THROWS_WITH_AS(witness_forms(make_point(5, 3, 2, 1)), doctest::Contains("positive"),
                             contract_error);

        // degenerate point with a > 1: gcd(X1, Y1) = a, named in the error
        auto deg2 = make_point(5, 139, 373, 373);
        CHECK_THROWS_WITH_AS(witness_forms(deg2), doctest::Contains("gcd"), contract_error);
    }

    TEST_CASE("witness forms have content 1 and the right discriminant under fuzz") {
        std::mt19937_64 rng(9001);
        int done = 0;
        while (done < 300) {
            unsigned p = (rng() & 1) ? 5 : 7;
            mpz_class q = next_prime(mpz_class((unsigned long)(rng() % 200 + 2)));
            mpz_class a((unsigned long)(rng() % 500 + 1));
            mpz_class b((unsigned long)(rng() % 500 + 1));
            auto pt = make_point(p, q, a, b);
            if (pt.D <= 0 || mpz_fdiv_ui(pt.D.get_mpz_t(), 4) != 3) continue;
            mpz_class g1, g2;
            mpz_gcd(g1.get_mpz_t(), pt.X1.get_mpz_t(), pt.Y1.get_mpz_t());
            mpz_gcd(g2.get_mpz_t(), pt.X2.get_mpz_t(), pt.Y2.get_mpz_t());
            if (g1 != 1 || g2 != 1) continue;
            auto [f1, f2] = witness_forms(pt);
            CHECK(f1.discriminant() == -pt.D);
            CHECK(f2.discriminant() == -pt.D);
            ++done;
        }
    }
}
