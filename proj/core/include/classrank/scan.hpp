#ifndef CLASSRANK_SCAN_HPP
#define CLASSRANK_SCAN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "classrank/box.hpp"
#include "classrank/family.hpp"
#include "classrank/quadform.hpp"

namespace classrank {

/// q for a target X: the least prime >= ceil(constant * X^((p-2)/(2p(p-1)))),
/// with the ceiling decided in exact integer arithmetic (denominators
/// cleared, d-th roots through exact root extraction).
mpz_class select_q(unsigned p, const mpz_class& X, const mpq_class& constant = 1);

/// Default sweep box [1, ceil(q^(p/(p-2)))]^2: the parameter window scaled to
/// constant 1.
Box default_box(unsigned p, const mpz_class& q);

/// Box spanned by the integers strictly inside the parameter window for q;
/// nullopt when the window holds no integer (typical below q ~ 10^3 at
/// p = 5).
std::optional<Box> strict_window_box(unsigned p, const mpz_class& q);

/// ceil(S1^2 / S2) in exact integer arithmetic; 0 when S2 = 0 (S1 must then
/// be 0 too, anything else is an internal inconsistency).
mpz_class cs_lower_bound_value(const mpz_class& S1, const mpz_class& S2);

struct CollisionQuad {
    mpz_class a1, b1, a2, b2;
};

/// One distinct accepted discriminant D with everything the scan learned
/// about it.
struct DistinctValue {
    mpz_class D;
    std::vector<std::pair<mpz_class, mpz_class>> points; // all (a,b) with f_q(a,b) = D, row-major
    SquarefreeVerdict verdict = SquarefreeVerdict::Squarefree;
    bool fundamental_known = false; // true iff verdict is exactly Squarefree (-D == 1 mod 4 holds for accepted D)
    bool degenerate = false;        // representative point has a == b
    bool certified = false;         // rank-2 certificate valid
    Rank2Certificate certificate;

    uint64_t multiplicity() const { return points.size(); }
    const std::pair<mpz_class, mpz_class>& representative() const { return points.front(); }
};

struct RejectionTally {
    uint64_t nonpositive = 0;     // D <= 0
    uint64_t residue = 0;         // -D != 1 mod 4
    uint64_t coprime = 0;         // gcd(X_j, Y_j) > 1
    uint64_t not_squarefree = 0;  // witness prime square divides D
    uint64_t window = 0;          // strict mode: (a,b) outside the window
    uint64_t size = 0;            // strict mode: size inequality failed
};

struct ScanEffort {
    unsigned long trial_bound = 10'000;
    FactorEffort factor;
};

/// Everything the (a,b) |-> D sweep produces. S1/S2 run over exactly
/// squarefree D; the _probable pair also admits SquarefreeUpToBound D.
/// Certificates for D that are only probably squarefree still prove a
/// (Z/p)^2 subgroup of the form class group of discriminant -D; that group
/// is the ideal class group of Q(sqrt(-D)) only when -D is fundamental,
/// which is exactly what fundamental_known records.
struct ScanReport {
    unsigned p = 5;
    mpz_class q;
    std::string X; // decimal string when q was derived from X, else empty
    Box box;
    HypothesisMode mode = HypothesisMode::Relaxed;
    mpz_class S1 = 0, S2 = 0;
    mpz_class S1_probable = 0, S2_probable = 0;
    uint64_t distinct_squarefree = 0;
    uint64_t distinct_probable = 0;
    mpz_class cs_lower_bound = 0; // over the squarefree-only S1, S2
    uint64_t certified_rank2 = 0;
    std::vector<DistinctValue> values; // ascending by D
    std::vector<CollisionQuad> collisions;
    RejectionTally rejected;
    uint64_t points_scanned = 0;
    uint64_t points_accepted = 0;
};

/// Sweeps the box, groups by D, classifies squarefreeness once per distinct
/// D, certifies one witness pair per accepted D, re-verifies every
/// collision against the exact collision identity, and asserts the
/// Cauchy-Schwarz bound on its own output. Deterministic for fixed inputs,
/// independent of the worker count.
ScanReport run_scan(unsigned p, const mpz_class& q, const Box& box, HypothesisMode mode,
                    const ScanEffort& effort = {}, unsigned workers = 1);

struct GrowthPoint {
    double X = 0;
    uint64_t count = 0;
};

struct GrowthFit {
    std::vector<GrowthPoint> points;
    double fitted_exponent = 0;
    double target_exponent = 0; // 1/(p-1)
};

/// Least-squares slope of log(count) against log(X), over points with
/// count > 0; at least two such points are required.
GrowthFit growth_fit(const std::vector<GrowthPoint>& points, unsigned p);

} // namespace classrank

#endif
