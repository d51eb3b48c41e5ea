#include "classrank/density.hpp"

#include "classrank/family.hpp"
#include "classrank/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace classrank {

unsigned default_workers() {
    if (const char* env = std::getenv("CLASSRANK_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 1024) return unsigned(v);
    }
    return 1;
}

namespace {

// f as rows of (dx, coeff mod m) grouped by y-degree, coefficients reduced
// into [0, m)
struct ModPoly {
    uint64_t m;
    unsigned deg_y;
    // coeff_by_y[j] holds the x-polynomial multiplying y^j, dense in x
    std::vector<std::vector<uint64_t>> coeff_by_y;

    ModPoly(const Poly2& f, uint64_t modulus) : m(modulus) {
        if (!f.integer_coefficients())
            throw contract_error("modular counting requires integer coefficients");
        int dy = f.degree_y(), dx = f.degree_x();
        deg_y = unsigned(std::max(dy, 0));
        coeff_by_y.assign(deg_y + 1, std::vector<uint64_t>(size_t(std::max(dx, 0)) + 1, 0));
        for (const auto& [k, v] : f.terms()) {
            unsigned long r = mpz_fdiv_ui(v.get_num().get_mpz_t(), (unsigned long)m);
            coeff_by_y[k.second][k.first] = r;
        }
    }

    // coefficients of the univariate polynomial in y at x, each in [0, m)
    void row(uint64_t x, std::vector<uint64_t>& out) const {
        out.assign(deg_y + 1, 0);
        for (unsigned j = 0; j <= deg_y; ++j) {
            const auto& cs = coeff_by_y[j];
            uint64_t acc = 0;
            for (size_t i = cs.size(); i-- > 0;) acc = (acc * x + cs[i]) % m;
            out[j] = acc;
        }
    }

    uint64_t eval(uint64_t x, uint64_t y, const std::vector<uint64_t>& row_coeffs) const {
        uint64_t acc = 0;
        for (size_t j = row_coeffs.size(); j-- > 0;) acc = (acc * y + row_coeffs[j]) % m;
        (void)x;
        return acc;
    }
};

// zeros of the univariate poly (coeffs mod m) over y in [0, m), counting by
// forward differences: after seeding values at y = 0..d, each step is d
// modular additions.
uint64_t count_row_zeros(const std::vector<uint64_t>& coeffs, uint64_t m) {
    size_t d = coeffs.size() - 1;
    std::vector<uint64_t> table(d + 1);
    for (size_t y = 0; y <= d; ++y) {
        uint64_t acc = 0;
        for (size_t j = d + 1; j-- > 0;) acc = (acc * y + coeffs[j]) % m;
        table[y] = acc;
    }
    // in-place forward differences: table[k] = Delta^k f(0)
    for (size_t k = 1; k <= d; ++k)
        for (size_t i = d; i >= k; --i) {
            table[i] = table[i] >= table[i - 1] ? table[i] - table[i - 1]
                                                : table[i] + m - table[i - 1];
            if (i == k) break;
        }
    uint64_t zeros = 0;
    for (uint64_t y = 0; y < m; ++y) {
        if (table[0] == 0) ++zeros;
        for (size_t k = 0; k < d; ++k) {
            table[k] += table[k + 1];
            if (table[k] >= m) table[k] -= m;
        }
    }
    return zeros;
}

} // namespace

uint64_t count_c_ell(const Poly2& f, uint32_t ell, unsigned workers, uint32_t ell_cap) {
    if (!is_probable_prime(mpz_class(ell))) throw contract_error("count_c_ell: l must be prime");
    if (ell > ell_cap)
        throw resource_limit_error("count_c_ell: l = " + std::to_string(ell) +
                                   " exceeds the exhaustive budget cap " + std::to_string(ell_cap));
    if (f.is_zero()) {
        uint64_t m = uint64_t(ell) * ell;
        return m * m;
    }
    ModPoly mp(f, uint64_t(ell) * ell);
    const uint64_t m = mp.m;
    std::vector<uint64_t> partial(workers ? workers : 1, 0);
    run_chunked(m, workers, [&](size_t slot, uint64_t xb, uint64_t xe) {
        std::vector<uint64_t> coeffs;
        uint64_t zeros = 0;
        for (uint64_t x = xb; x < xe; ++x) {
            mp.row(x, coeffs);
            zeros += count_row_zeros(coeffs, m);
        }
        partial[slot] = zeros;
    });
    uint64_t total = 0;
    for (uint64_t z : partial) total += z;
    return total;
}

std::optional<std::pair<uint32_t, uint32_t>> lemma32_witness(unsigned p, const mpz_class& q,
                                                             uint32_t ell) {
    if (!is_probable_prime(mpz_class(p)) || p < 5)
        throw contract_error("lemma32: p must be a prime >= 5");
    if (!is_probable_prime(q)) throw contract_error("lemma32: q must be prime");
    if (q <= p) throw contract_error("lemma32: requires q > p");
    if (!is_probable_prime(mpz_class(ell))) throw contract_error("lemma32: l must be prime");
    ModPoly mp(family_poly(p, q), uint64_t(ell) * ell);
    const uint64_t m = mp.m;
    std::vector<uint64_t> coeffs;
    for (uint64_t a = 0; a < m; ++a) {
        mp.row(a, coeffs);
        for (uint64_t b = 0; b < m; ++b)
            if (mp.eval(a, b, coeffs) != 0) return std::make_pair(uint32_t(a), uint32_t(b));
    }
    return std::nullopt;
}

DensityEstimate euler_product_for(const Poly2& f, uint32_t truncation,
                                  std::optional<mpq_class> tail_constant, unsigned workers) {
    DensityEstimate est;
    est.truncation = truncation;
    const auto& primes = primes_up_to(truncation);
    mpq_class max_ratio = 0;
    for (uint32_t ell : primes) {
        if (ell > truncation) break;
        uint64_t c = count_c_ell(f, ell, workers);
        est.c_values.push_back(CEllEntry{ell, c});
        mpz_class l2 = mpz_class(ell) * ell;
        mpz_class l4 = l2 * l2;
        mpq_class factor = 1 - mpq_class(mpz_class((unsigned long)c)) / mpq_class(l4);
        if (factor <= 0)
            throw internal_inconsistency_error(
                "euler_product: vanishing factor at l = " + std::to_string(ell) +
                " contradicts the no-fixed-square-divisor lemma");
        est.partial_product *= factor;
        mpq_class ratio = mpq_class(mpz_class((unsigned long)c)) / mpq_class(l2);
        if (ratio > max_ratio) max_ratio = ratio;
    }
    if (tail_constant) {
        est.tail_constant = *tail_constant;
        est.heuristic_tail = false;
    } else {
        est.tail_constant = 2 * max_ratio;
        est.heuristic_tail = true;
    }
    // tail over primes l > L: prod (1 - C/l^2) >= prod over all integers
    // n > L of (1 - K/n^2) with K = ceil(C), and with s = ceil(sqrt(K)),
    // 1 - K/n^2 >= (n-s)(n+s)/n^2, whose product telescopes to
    // prod_{j=1..s} (M-j)/(M+j-1) at M = L+1.
    if (est.tail_constant == 0) {
        est.tail_lower = 1;
        return est;
    }
    mpz_class K = est.tail_constant.get_num() / est.tail_constant.get_den();
    if (K * est.tail_constant.get_den() < est.tail_constant.get_num()) ++K; // ceil
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), K.get_mpz_t());
    if (s * s < K) ++s;
    mpz_class M = mpz_class(truncation) + 1;
    if (M - s <= 0) {
        est.tail_lower = 0; // valid, vacuous lower bound
        return est;
    }
    mpq_class tail = 1;
    for (mpz_class j = 1; j <= s; ++j) tail *= mpq_class(M - j) / mpq_class(M + j - 1);
    est.tail_lower = tail;
    return est;
}

DensityEstimate euler_product(unsigned p, const mpz_class& q, uint32_t truncation,
                              std::optional<mpq_class> tail_constant, unsigned workers) {
    if (!is_probable_prime(mpz_class(p)) || p < 5)
        throw contract_error("euler_product: p must be a prime >= 5");
    if (!is_probable_prime(q)) throw contract_error("euler_product: q must be prime");
    if (q <= p) throw contract_error("euler_product: requires q > p");
    return euler_product_for(family_poly(p, q), truncation, std::move(tail_constant), workers);
}

BoxDensity empirical_density(unsigned p, const mpz_class& q, const Box& box,
                             unsigned long trial_bound, const FactorEffort& effort,
                             unsigned workers) {
    if (box.empty()) throw contract_error("empirical_density: box is empty");
    mpz_class cells = box.cell_count();
    if (!cells.fits_ulong_p() || cells.get_ui() > (1ull << 32))
        throw resource_limit_error("empirical_density: box has too many cells");
    mpz_class width_z = box.b_hi - box.b_lo + 1;
    uint64_t width = width_z.get_ui();
    mpz_class rows_z = box.a_hi - box.a_lo + 1;
    uint64_t rows = rows_z.get_ui();
    uint64_t n = rows * width;

    std::vector<BoxDensity> partial(workers ? workers : 1);
    run_chunked(n, workers, [&](size_t slot, uint64_t ib, uint64_t ie) {
        BoxDensity local;
        for (uint64_t i = ib; i < ie; ++i) {
            mpz_class a = box.a_lo + mpz_class((unsigned long)(i / width));
            mpz_class b = box.b_lo + mpz_class((unsigned long)(i % width));
            if (!box.include_diagonal && a == b) continue;
            ++local.total;
            mpz_class v = eval_f(p, q, a, b);
            if (v == 0) {
                ++local.zero;
                continue;
            }
            mpz_class av = abs(v);
            SquarefreeStatus st = classify_squarefree(av, trial_bound, effort);
            switch (st.verdict) {
            case SquarefreeVerdict::Squarefree: ++local.squarefree; break;
            case SquarefreeVerdict::SquarefreeUpToBound: ++local.probable; break;
            case SquarefreeVerdict::NotSquarefree: ++local.not_squarefree; break;
            }
        }
        partial[slot] = local;
    });
    BoxDensity out;
    for (const auto& part : partial) {
        out.total += part.total;
        out.squarefree += part.squarefree;
        out.probable += part.probable;
        out.not_squarefree += part.not_squarefree;
        out.zero += part.zero;
    }
    return out;
}

} // namespace classrank
