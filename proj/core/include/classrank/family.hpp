#ifndef CLASSRANK_FAMILY_HPP
#define CLASSRANK_FAMILY_HPP

#include <optional>
#include <utility>

#include <gmpxx.h>

#include "classrank/number.hpp"
#include "classrank/quadform.hpp"

namespace classrank {

/// One member of the discriminant family: D = f_q(a,b) together with the
/// two witness pairs satisfying X_j^2 - 4 Y_j^p = -D exactly.
struct FamilyPoint {
    unsigned p = 5;
    mpz_class q, a, b;
    mpz_class D;  // f_q(a,b)
    mpz_class g;  // g(a,b)
    mpz_class X1, Y1, X2, Y2;

    bool degenerate() const { return a == b; } // witnesses coincide
};

/// g(a,b) = (a^p - b^p)/(a - b) = sum_{i=0}^{p-1} a^i b^{p-1-i};
/// at a = b the removable singularity evaluates to p a^(p-1).
mpz_class eval_g(const mpz_class& a, const mpz_class& b, unsigned p);

/// f_q(a,b) = 2(a^p + b^p) q^p - (a-b)^2 q^(2p) - g(a,b)^2.
/// May be negative; positivity is the caller's check.
mpz_class eval_f(unsigned p, const mpz_class& q, const mpz_class& a, const mpz_class& b);

/// Builds the point and asserts the defining identity on both witness
/// pairs. A failure is an arithmetic bug, not bad input.
FamilyPoint make_point(unsigned p, const mpz_class& q, const mpz_class& a, const mpz_class& b);

enum class HypothesisMode { Strict, Relaxed };

const char* to_string(HypothesisMode m);

/// Outcome of all hypothesis checks for one point.
///  Strict acceptance: every flag true and an exactly Squarefree verdict.
///  Relaxed acceptance: positive, residue, coprimality, and a verdict of at
///  least SquarefreeUpToBound. The strict window is typically empty below
///  astronomically large q, which is why Relaxed is the desk-scale default.
struct HypothesisReport {
    bool in_window = false;  // both a,b strictly inside the parameter window for q
    bool size_ok = false;    // f_q(a,b) >= 4 a b^((p-1)/2) q^((p+1)/2)
    bool positive = false;   // D > 0
    bool residue_ok = false; // -D == 1 (mod 4)
    bool coprime_ok = false; // gcd(X_j, Y_j) = 1 for j = 1, 2
    SquarefreeStatus squarefree;
    HypothesisMode mode = HypothesisMode::Relaxed;

    bool accepted() const;
};

HypothesisReport check_hypotheses(const FamilyPoint& pt, HypothesisMode mode,
                                  unsigned long trial_bound = 10'000, const FactorEffort& effort = {});

/// Exact test of lo < x < hi where lo = q^(p/(p-2))/(2p) and
/// hi = (1/(2p) + 1/(2^p p^p)) q^(p/(p-2)), with denominators cleared so the
/// comparison is pure integer arithmetic. The window has relative width
/// 1/(2^(p-1) p^(p-1)); floating point would misclassify.
bool window_contains(unsigned p, const mpz_class& q, const mpz_class& x);

/// Integers inside the strict window, as [lo, hi]; nullopt when empty.
std::optional<std::pair<mpz_class, mpz_class>> strict_window(unsigned p, const mpz_class& q);

/// The two witness forms (Y_j, X_j, Y_j^(p-1)) of discriminant -D.
/// Requires D > 0, -D == 1 (mod 4) and gcd(X_j, Y_j) = 1; the rejection
/// names the failed condition.
std::pair<QuadForm, QuadForm> witness_forms(const FamilyPoint& pt);

} // namespace classrank

#endif
