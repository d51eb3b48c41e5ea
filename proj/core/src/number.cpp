#include "classrank/number.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace classrank {

const char* to_string(SquarefreeVerdict v) {
    switch (v) {
    case SquarefreeVerdict::Squarefree: return "squarefree";
    case SquarefreeVerdict::NotSquarefree: return "not_squarefree";
    case SquarefreeVerdict::SquarefreeUpToBound: return "squarefree_up_to_bound";
    }
    return "?";
}

mpz_class PartialFactorization::recompose() const {
    mpz_class n = cofactor;
    for (const auto& [p, e] : prime_powers) {
        mpz_class pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        n *= pe;
    }
    return n;
}

namespace {

std::mutex sieve_mutex;
std::vector<uint32_t> sieve_primes{2, 3, 5, 7};
uint32_t sieve_limit = 10;

} // namespace

const std::vector<uint32_t>& primes_up_to(uint32_t bound) {
    std::lock_guard lock(sieve_mutex);
    if (bound > 100'000'000)
        throw resource_limit_error("prime sieve bound exceeds 10^8");
    if (bound > sieve_limit) {
        uint32_t n = std::max(bound, sieve_limit * 2);
        std::vector<bool> composite(size_t(n) + 1, false);
        sieve_primes.clear();
        for (uint32_t p = 2; p <= n; ++p) {
            if (composite[p]) continue;
            sieve_primes.push_back(p);
            for (uint64_t m = uint64_t(p) * p; m <= n; m += p) composite[size_t(m)] = true;
        }
        sieve_limit = n;
    }
    return sieve_primes;
}

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return uint64_t((unsigned __int128)a * b % m);
}

uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

bool miller_rabin_u64(uint64_t n, uint64_t a) {
    a %= n;
    if (a == 0) return true;
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

// The first 13 primes are a deterministic witness set for
// n < 3,317,044,064,679,887,385,961,981 (~3.3e24), which covers uint64.
constexpr uint64_t kSmallWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : kSmallWitnesses) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    if (n < 43 * 43) return true;
    for (uint64_t a : kSmallWitnesses)
        if (!miller_rabin_u64(n, a)) return false;
    return true;
}

bool miller_rabin_mpz(const mpz_class& n, const mpz_class& a) {
    if (mpz_divisible_p(a.get_mpz_t(), n.get_mpz_t())) return true;
    mpz_class d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    mpz_class x, nm1 = n - 1;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == nm1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
        if (x == nm1) return true;
    }
    return false;
}

const mpz_class& deterministic_threshold() {
    static const mpz_class t("3317044064679887385961981");
    return t;
}

} // namespace

bool is_probable_prime(const mpz_class& n) {
    if (n < 2) return false;
    if (n.fits_ulong_p()) return is_prime_u64(n.get_ui());
    if (mpz_even_p(n.get_mpz_t())) return false;
    for (uint64_t a : kSmallWitnesses)
        if (!miller_rabin_mpz(n, mpz_class(static_cast<unsigned long>(a)))) return false;
    if (n < deterministic_threshold()) return true;
    // 64 extra rounds: error < 4^-64 = 2^-128. Bases are a fixed function
    // of n, so repeated calls agree byte-for-byte.
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(mpz_class((n % 0x7fffffff) ^ 0x5eed));
    mpz_class nm3 = n - 3;
    for (int round = 0; round < 64; ++round) {
        mpz_class a = rng.get_z_range(nm3) + 2;
        if (!miller_rabin_mpz(n, a)) return false;
    }
    return true;
}

mpz_class next_prime(const mpz_class& n) {
    if (n <= 2) return 2;
    mpz_class c = n;
    if ((c & 1) == 0) ++c;
    while (!is_probable_prime(c)) c += 2;
    return c;
}

mpz_class next_prime(double n) {
    if (n <= 2.0) return 2;
    mpz_class c;
    mpz_set_d(c.get_mpz_t(), std::ceil(n));
    return next_prime(c);
}

namespace {

// Brent's rho on 64-bit n (odd, composite). Returns 0 if the budget runs out.
uint64_t pollard_rho_u64(uint64_t n, unsigned long& budget) {
    if ((n & 1) == 0) return 2;
    for (uint64_t c = 1; budget > 0; ++c) {
        uint64_t x = 2, ys = 2, y = 2, d = 1;
        uint64_t r = 1, q = 1;
        do {
            x = y;
            for (uint64_t i = 0; i < r && budget > 0; ++i) { y = mulmod_u64(y, y, n) + c; if (y >= n) y -= n; --budget; }
            for (uint64_t k = 0; k < r && d == 1 && budget > 0; k += 128) {
                ys = y;
                uint64_t lim = std::min<uint64_t>(128, r - k);
                for (uint64_t i = 0; i < lim; ++i) {
                    y = mulmod_u64(y, y, n) + c; if (y >= n) y -= n;
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                    --budget;
                    if (budget == 0) break;
                }
                d = std::gcd(q, n);
            }
            r <<= 1;
        } while (d == 1 && budget > 0);
        if (d == n) {
            // backtrack one by one
            do {
                ys = mulmod_u64(ys, ys, n) + c; if (ys >= n) ys -= n;
                d = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (d == 1);
        }
        if (d != 1 && d != n) return d;
    }
    return 0;
}

mpz_class pollard_rho_mpz(const mpz_class& n, unsigned long& budget) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(0xC0FFEEu);
    while (budget > 0) {
        mpz_class c = rng.get_z_range(n - 3) + 1;
        mpz_class x = rng.get_z_range(n - 2) + 1, y = x, d = 1, diff, acc = 1, xs;
        unsigned batch = 0;
        bool cycled = false;
        std::vector<mpz_class> trail;
        trail.reserve(130);
        while (budget > 0) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            --budget;
            diff = x - y;
            if (diff == 0) { cycled = true; break; }
            acc = acc * diff % n;
            trail.push_back(diff);
            if (++batch == 128 || budget == 0) {
                mpz_gcd(d.get_mpz_t(), acc.get_mpz_t(), n.get_mpz_t());
                if (d != 1) break;
                batch = 0;
                acc = 1;
                trail.clear();
            }
        }
        if (d == n) {
            // a batch swallowed two factors at once; replay it singly
            for (const auto& t : trail) {
                mpz_gcd(d.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
                if (d != 1 && d != n) return d;
            }
            continue;
        }
        if (d != 1 && d != n) return d;
        if (!cycled && budget == 0) break;
    }
    return 0;
}

mpz_class find_factor(const mpz_class& n, unsigned long& budget) {
    if (n.fits_ulong_p())
        return mpz_class(static_cast<unsigned long>(pollard_rho_u64(n.get_ui(), budget)));
    return pollard_rho_mpz(n, budget);
}

// Splits m (no prime factor <= the trial bound used upstream) into probable
// primes within the rho budget; unsplit composites multiply into cofactor.
void split_cofactor(const mpz_class& m, unsigned long& budget,
                    std::map<mpz_class, unsigned>& primes, mpz_class& cofactor) {
    if (m == 1) return;
    if (is_probable_prime(m)) {
        primes[m] += 1;
        return;
    }
    if (mpz_perfect_power_p(m.get_mpz_t())) {
        for (unsigned long e = 2; e <= mpz_sizeinbase(m.get_mpz_t(), 2); ++e) {
            mpz_class root;
            if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), e) != 0) {
                std::map<mpz_class, unsigned> sub;
                mpz_class subco = 1;
                split_cofactor(root, budget, sub, subco);
                if (subco != 1) {
                    cofactor *= m;
                    return;
                }
                for (const auto& [p, k] : sub) primes[p] += k * unsigned(e);
                return;
            }
        }
    }
    if (budget == 0) {
        cofactor *= m;
        return;
    }
    mpz_class f = find_factor(m, budget);
    if (f == 0 || f == 1 || f == m) {
        cofactor *= m;
        return;
    }
    split_cofactor(f, budget, primes, cofactor);
    split_cofactor(m / f, budget, primes, cofactor);
}

struct TrialResult {
    std::vector<std::pair<mpz_class, unsigned>> prime_powers;
    mpz_class remaining;     // coprime to every prime <= bound
    bool complete = false;   // remaining == 1, or remaining is prime (p^2 > remaining reached)
    uint32_t square_witness = 0; // first prime with exponent >= 2 (squarefree callers bail early)
};

TrialResult trial_divide(const mpz_class& n, unsigned long bound, bool stop_at_square) {
    TrialResult out;
    const auto& primes = primes_up_to(uint32_t(std::min<unsigned long>(bound, 100'000'000)));
    mpz_class m = n;
    bool m_small = m.fits_ulong_p();
    uint64_t ms = m_small ? m.get_ui() : 0;
    for (uint32_t p : primes) {
        if (p > bound) break;
        if (m_small) {
            if (uint64_t(p) * p > ms) {
                if (ms > 1) out.prime_powers.emplace_back(mpz_class(static_cast<unsigned long>(ms)), 1);
                ms = 1;
                break;
            }
            if (ms % p == 0) {
                unsigned e = 0;
                do { ms /= p; ++e; } while (ms % p == 0);
                if (e >= 2 && stop_at_square) {
                    out.square_witness = p;
                    return out;
                }
                out.prime_powers.emplace_back(p, e);
            }
        } else {
            if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
                unsigned e = 0;
                do {
                    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                    ++e;
                } while (mpz_divisible_ui_p(m.get_mpz_t(), p));
                if (e >= 2 && stop_at_square) {
                    out.square_witness = p;
                    return out;
                }
                out.prime_powers.emplace_back(p, e);
                if (m.fits_ulong_p()) {
                    m_small = true;
                    ms = m.get_ui();
                }
            }
        }
    }
    out.remaining = m_small ? mpz_class(static_cast<unsigned long>(ms)) : m;
    if (out.remaining == 1) {
        out.complete = true;
    } else {
        // complete iff every prime <= min(bound, sqrt(remaining)) was tried
        mpz_class b2 = mpz_class(bound) * mpz_class(bound);
        if (b2 >= out.remaining) {
            out.prime_powers.emplace_back(out.remaining, 1);
            out.remaining = 1;
            out.complete = true;
        }
    }
    return out;
}

} // namespace

PartialFactorization factorize(const mpz_class& n, const FactorEffort& effort) {
    if (n < 1) throw contract_error("factorize: n must be >= 1");
    PartialFactorization out;
    if (n == 1) return out;
    TrialResult tr = trial_divide(n, effort.trial_bound, false);
    out.prime_powers = std::move(tr.prime_powers);
    if (tr.complete) return out;
    mpz_class m = tr.remaining;
    if (is_probable_prime(m)) {
        out.prime_powers.emplace_back(m, 1);
        return out;
    }
    unsigned long budget = effort.rho_iterations;
    std::map<mpz_class, unsigned> found;
    mpz_class cofactor = 1;
    split_cofactor(m, budget, found, cofactor);
    for (const auto& [p, e] : found) out.prime_powers.emplace_back(p, e);
    out.cofactor = cofactor;
    return out;
}

SquarefreeStatus classify_squarefree(const mpz_class& n, unsigned long trial_bound,
                                     const FactorEffort& effort) {
    if (n < 1) throw contract_error("classify_squarefree: n must be >= 1");
    if (trial_bound < 2) throw contract_error("classify_squarefree: trial_bound must be >= 2");
    SquarefreeStatus st;
    st.bound = trial_bound;
    if (n == 1) {
        st.verdict = SquarefreeVerdict::Squarefree;
        return st;
    }
    TrialResult tr = trial_divide(n, trial_bound, true);
    if (tr.square_witness != 0) {
        st.verdict = SquarefreeVerdict::NotSquarefree;
        st.witness = tr.square_witness;
        return st;
    }
    st.factorization.prime_powers = std::move(tr.prime_powers);
    if (tr.complete) {
        st.verdict = SquarefreeVerdict::Squarefree;
        return st;
    }
    mpz_class m = tr.remaining;
    if (is_probable_prime(m)) {
        st.factorization.prime_powers.emplace_back(m, 1);
        st.verdict = SquarefreeVerdict::Squarefree;
        return st;
    }
    // m composite, coprime to every prime <= trial_bound
    st.cofactor_checked = true;
    if (mpz_perfect_power_p(m.get_mpz_t())) {
        // m = k^e, e >= 2: certainly not squarefree. Dig a witness prime out
        // of k; k has no factor <= trial_bound so rho gets a generous budget
        // here (downgrading to UpToBound would assert the cofactor is not a
        // perfect power, which would be false).
        for (unsigned long e = 2; e <= mpz_sizeinbase(m.get_mpz_t(), 2); ++e) {
            mpz_class root;
            if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), e) != 0) {
                mpz_class k = root;
                unsigned long big_budget = std::max(effort.rho_iterations, 100'000'000ul);
                while (!is_probable_prime(k)) {
                    mpz_class f = find_factor(k, big_budget);
                    if (f == 0 || f == 1 || f == k)
                        throw resource_limit_error(
                            "classify_squarefree: perfect-power cofactor resisted factorization");
                    mpz_class other = k / f;
                    k = f < other ? f : other;
                }
                st.verdict = SquarefreeVerdict::NotSquarefree;
                st.witness = k;
                return st;
            }
        }
    }
    unsigned long budget = effort.rho_iterations;
    std::map<mpz_class, unsigned> found;
    mpz_class cofactor = 1;
    split_cofactor(m, budget, found, cofactor);
    for (const auto& [p, e] : found) {
        if (e >= 2) {
            st.verdict = SquarefreeVerdict::NotSquarefree;
            st.witness = p;
            return st;
        }
        st.factorization.prime_powers.emplace_back(p, e);
    }
    if (cofactor != 1) {
        st.verdict = SquarefreeVerdict::SquarefreeUpToBound;
        st.factorization.cofactor = cofactor;
        return st;
    }
    st.verdict = SquarefreeVerdict::Squarefree;
    return st;
}

mpz_class divisor_count(const PartialFactorization& f) {
    if (!f.complete()) throw contract_error("divisor_count: factorization is incomplete");
    mpz_class d = 1;
    for (const auto& [p, e] : f.prime_powers) d *= (e + 1);
    return d;
}

} // namespace classrank
