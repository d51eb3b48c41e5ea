#ifndef CLASSRANK_DENSITY_HPP
#define CLASSRANK_DENSITY_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "classrank/box.hpp"
#include "classrank/number.hpp"
#include "classrank/poly2.hpp"

namespace classrank {

/// Number of pairs (x, y) in (Z/l^2)^2 with f(x, y) = 0 mod l^2, by
/// exhaustive evaluation of all l^4 cells (row-differencing makes each cell
/// a handful of modular additions, but every cell is visited). Primes
/// beyond the cap are a resource error: the default cap 997 already means
/// 10^12 evaluations.
uint64_t count_c_ell(const Poly2& f, uint32_t ell, unsigned workers = 1, uint32_t ell_cap = 997);

/// First (a, b) in row-major order over (Z/l^2)^2 with f_q(a, b) != 0
/// mod l^2. nullopt means the scan was exhausted, which the hypotheses
/// q > p prime rule out mathematically.
std::optional<std::pair<uint32_t, uint32_t>> lemma32_witness(unsigned p, const mpz_class& q,
                                                             uint32_t ell);

struct CEllEntry {
    uint32_t ell = 0;
    uint64_t c_ell = 0;
};

/// Truncated Euler product for the squarefree-value density of f:
/// exact partial product over l <= truncation of (1 - c_l / l^4), plus a
/// rational lower bound for the tail computed from c_l <= tail_constant * l^2.
/// The partial product is exact; the tail constant (when not supplied) is
/// the empirical 2 * max(c_l / l^2) and the tail is labeled heuristic.
struct DensityEstimate {
    uint32_t truncation = 0;
    mpq_class partial_product = 1;
    mpq_class tail_lower = 1;
    mpq_class tail_constant = 0;
    bool heuristic_tail = true; // tail_constant was estimated, not supplied
    std::vector<CEllEntry> c_values;

    mpq_class lower() const { return partial_product * tail_lower; }
};

/// Estimate for an arbitrary integer-coefficient polynomial.
DensityEstimate euler_product_for(const Poly2& f, uint32_t truncation,
                                  std::optional<mpq_class> tail_constant = std::nullopt,
                                  unsigned workers = 1);

/// Estimate for the family polynomial f_q; requires q > p.
DensityEstimate euler_product(unsigned p, const mpz_class& q, uint32_t truncation,
                              std::optional<mpq_class> tail_constant = std::nullopt,
                              unsigned workers = 1);

/// Empirical squarefree counts of |f_q(a,b)| over a box. Only exact
/// Squarefree verdicts enter the numerator; UpToBound and zero values are
/// reported separately.
struct BoxDensity {
    uint64_t total = 0;
    uint64_t squarefree = 0;
    uint64_t probable = 0; // verdict SquarefreeUpToBound
    uint64_t not_squarefree = 0;
    uint64_t zero = 0; // f(a,b) = 0, excluded from every other bucket

    mpq_class fraction() const {
        return total ? mpq_class(squarefree) / mpq_class(total) : mpq_class(0);
    }
};

BoxDensity empirical_density(unsigned p, const mpz_class& q, const Box& box,
                             unsigned long trial_bound = 10'000, const FactorEffort& effort = {},
                             unsigned workers = 1);

} // namespace classrank

#endif
