#include <doctest.h>

#include <classrank/report_json.hpp>
#include <classrank/scan.hpp>

using namespace classrank;

TEST_SUITE("scan") {

    TEST_CASE("select_q worked examples") {
        CHECK(select_q(5, mpz_class("10000000000000")) == 11); // 10^(0.975) ~ 9.44 -> 11
        CHECK(select_q(5, 2) == 2);
        // X = floor(2^(200/3)): X^(3/40) = 2^5 = 32 up to rounding, next prime 37
        mpz_class big = mpz_class(1) << 200;
        mpz_class X;
        mpz_root(X.get_mpz_t(), big.get_mpz_t(), 3);
        CHECK(select_q(5, X) == 37);
        CHECK_THROWS_AS(select_q(4, mpz_class(100)), contract_error);
        CHECK_THROWS_AS(select_q(5, mpz_class(1)), contract_error);
    }

    TEST_CASE("cs_lower_bound arithmetic") {
        CHECK(cs_lower_bound_value(120, 600) == 24);
        CHECK(cs_lower_bound_value(0, 0) == 0);
        CHECK(cs_lower_bound_value(17, 17) == 17);
        CHECK(cs_lower_bound_value(5, 3) == 9); // ceil(25/3)
        CHECK_THROWS_AS(cs_lower_bound_value(3, 0), internal_inconsistency_error);
    }

    TEST_CASE("run_scan: symmetric box off the diagonal finds the collision pair") {
        Box box{5, 7, 5, 7, false};
        auto rep = run_scan(5, 5, box, HypothesisMode::Relaxed);
        bool found = false;
        for (const auto& v : rep.values) {
            if (v.D == 38713219) {
                found = true;
                CHECK(v.multiplicity() >= 2); // (7,5) and (5,7)
                CHECK(v.verdict == SquarefreeVerdict::Squarefree);
            }
        }
        CHECK(found);
        REQUIRE(rep.collisions.size() >= 1);
        bool pair_found = false;
        for (const auto& c : rep.collisions)
            if (c.a1 == 5 && c.b1 == 7 && c.a2 == 7 && c.b2 == 5) pair_found = true;
        CHECK(pair_found);
        // no self-collisions
        for (const auto& c : rep.collisions) CHECK(!(c.a1 == c.a2 && c.b1 == c.b2));
    }

    TEST_CASE("run_scan: single-point box") {
        Box box{1, 1, 1, 1, true};
        auto rep = run_scan(5, 3, box, HypothesisMode::Relaxed);
        CHECK(rep.S1 == 1); // 947 squarefree
        CHECK(rep.S2 == 1);
        CHECK(rep.cs_lower_bound == 1);
        CHECK(rep.distinct_squarefree == 1);
        CHECK(rep.certified_rank2 == 0); // degenerate witnesses
        REQUIRE(rep.values.size() == 1);
        CHECK(rep.values[0].degenerate);
        CHECK_FALSE(rep.values[0].certified);
    }

    TEST_CASE("run_scan: empty box") {
        Box box{5, 4, 1, 3, true};
        auto rep = run_scan(5, 3, box, HypothesisMode::Relaxed);
        CHECK(rep.S1 == 0);
        CHECK(rep.S2 == 0);
        CHECK(rep.cs_lower_bound == 0);
        CHECK(rep.values.empty());
        CHECK(rep.points_scanned == 0);
    }

    TEST_CASE("determinism across worker counts") {
        Box box{1, 15, 1, 15, true};
        auto r1 = run_scan(5, 7, box, HypothesisMode::Relaxed, ScanEffort{}, 1);
        auto r3 = run_scan(5, 7, box, HypothesisMode::Relaxed, ScanEffort{}, 3);
        CHECK(to_json(r1).dump(2) == to_json(r3).dump(2));
    }

    TEST_CASE("scan invariants and certificate replay") {
        Box box{1, 15, 1, 15, true};
        for (unsigned long qv : {5ul, 7ul, 11ul, 13ul}) {
            auto rep = run_scan(5, mpz_class(qv), box, HypothesisMode::Relaxed);
            CAPTURE(qv);
            CHECK(rep.S2 >= rep.S1);
            CHECK(rep.S1_probable >= rep.S1);
            CHECK(mpz_class((unsigned long)rep.distinct_squarefree) >= rep.cs_lower_bound);
            CHECK(rep.certified_rank2 <= rep.distinct_squarefree + rep.distinct_probable);
            uint64_t mult_total = 0;
            for (const auto& v : rep.values) {
                CHECK(v.multiplicity() >= 1);
                mult_total += v.multiplicity();
                if (v.certified) CHECK(replay_certificate(v.certificate));
                // symmetric box: the point set of each D is closed under swap
                for (const auto& [a, b] : v.points) {
                    bool has_swap = false;
                    for (const auto& [a2, b2] : v.points)
                        if (a2 == b && b2 == a) has_swap = true;
                    CHECK(has_swap);
                }
            }
            CHECK(mult_total == rep.points_accepted);
        }
    }

    TEST_CASE("strict mode rejects out-of-window points") {
        Box box{1, 15, 1, 15, true};
        auto rep = run_scan(5, 5, box, HypothesisMode::Strict);
        CHECK(rep.values.empty()); // the strict window at q=5 contains no integers
        CHECK(rep.rejected.window > 0);
    }

    TEST_CASE("default_box and strict_window_box") {
        Box b = default_box(5, 5);
        CHECK(b.a_lo == 1);
        CHECK(b.a_hi == 15); // ceil(5^(5/3)) = 15
        CHECK(default_box(5, 3).a_hi == 7);
        CHECK_FALSE(strict_window_box(5, 11).has_value());
        auto wb = strict_window_box(5, 139);
        REQUIRE(wb.has_value());
        CHECK(wb->a_lo == 373);
        CHECK(wb->a_hi == 373);
    }

    TEST_CASE("growth_fit") {
        std::vector<GrowthPoint> pts{{1e4, 10}, {1e8, 100}};
        auto fit = growth_fit(pts, 5);
        CHECK(fit.fitted_exponent == doctest::Approx(0.25));
        CHECK(fit.target_exponent == doctest::Approx(0.25));

        // rescaling counts by a constant leaves the slope alone
        std::vector<GrowthPoint> scaled{{1e4, 70}, {1e8, 700}};
        CHECK(growth_fit(scaled, 5).fitted_exponent == doctest::Approx(0.25));

        std::vector<GrowthPoint> flat{{1e4, 9}, {1e6, 9}, {1e8, 9}};
        CHECK(growth_fit(flat, 5).fitted_exponent == doctest::Approx(0.0));

        std::vector<GrowthPoint> sparse{{1e4, 0}, {1e8, 10}};
        CHECK_THROWS_AS(growth_fit(sparse, 5), contract_error);
    }
}
