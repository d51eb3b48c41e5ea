#ifndef CLASSRANK_NUMBER_HPP
#define CLASSRANK_NUMBER_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "classrank/errors.hpp"

namespace classrank {

/// Partially factored nonnegative integer. The product of prime^exponent
/// over prime_powers, times cofactor, equals the input. Every listed prime
/// is (probable) prime; the cofactor has no prime factor <= the trial bound
/// used to produce it.
struct PartialFactorization {
    std::vector<std::pair<mpz_class, unsigned>> prime_powers;
    mpz_class cofactor = 1;

    bool complete() const { return cofactor == 1; }
    mpz_class recompose() const;
};

enum class SquarefreeVerdict { Squarefree, NotSquarefree, SquarefreeUpToBound };

/// Three-valued squarefreeness classification.
///  - Squarefree:          complete factorization found, all exponents 1.
///  - NotSquarefree:       a witness prime l with l^2 | n is recorded.
///  - SquarefreeUpToBound: no prime <= bound has square dividing n and the
///    unfactored cofactor is not a perfect power, but the factorization
///    effort budget ran out before a definite answer.
struct SquarefreeStatus {
    SquarefreeVerdict verdict = SquarefreeVerdict::Squarefree;
    unsigned long bound = 0;       // trial-division limit actually used
    bool cofactor_checked = false; // cofactor tested for perfect-power shape
    mpz_class witness = 0;         // prime l with l^2 | n, when NotSquarefree
    PartialFactorization factorization;

    bool exact() const { return verdict != SquarefreeVerdict::SquarefreeUpToBound; }
};

const char* to_string(SquarefreeVerdict v);

/// Effort knobs for factorization-backed operations. rho_iterations is the
/// total Pollard-rho iteration budget per call; trial_bound the largest
/// prime used for trial division.
struct FactorEffort {
    unsigned long trial_bound = 10'000;
    unsigned long rho_iterations = 4'000'000;
};

/// Miller-Rabin primality. Deterministic (fixed 13-witness set) for
/// n < 3.317e24; beyond that, 64 rounds with bases derived from a fixed
/// seed and n itself, so the answer is a pure function of n.
/// Composite inputs always return false.
bool is_probable_prime(const mpz_class& n);

/// Least prime >= ceil(n). Returns 2 for n < 2.
mpz_class next_prime(const mpz_class& n);
mpz_class next_prime(double n);

/// Trial division up to effort.trial_bound, then Pollard rho within the
/// iteration budget. The returned cofactor is 1 (complete) or a composite
/// with no prime factor <= the trial bound.
PartialFactorization factorize(const mpz_class& n, const FactorEffort& effort = {});

/// Squarefreeness of n >= 1. Escalates to full factorization when the
/// cofactor splits within the effort budget; running out of budget is not
/// an error, it downgrades the verdict to SquarefreeUpToBound.
SquarefreeStatus classify_squarefree(const mpz_class& n, unsigned long trial_bound = 10'000,
                                     const FactorEffort& effort = {});

inline SquarefreeStatus classify_squarefree(const mpz_class& n, const FactorEffort& effort) {
    return classify_squarefree(n, effort.trial_bound, effort);
}

/// sigma_0(n) from a complete factorization. Incomplete input is rejected.
mpz_class divisor_count(const PartialFactorization& f);

/// Primes below bound (inclusive), cached and shared; bound <= 10^8.
const std::vector<uint32_t>& primes_up_to(uint32_t bound);

} // namespace classrank

#endif
