#include "classrank/quadform.hpp"

#include "classrank/number.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

namespace classrank {

bool QuadForm::operator<(const QuadForm& o) const {
    int r = cmp(a, o.a);
    if (r == 0) r = cmp(b, o.b);
    if (r == 0) r = cmp(c, o.c);
    return r < 0;
}

std::string QuadForm::str() const {
    std::ostringstream os;
    os << "(" << a << ", " << b << ", " << c << ")";
    return os.str();
}

QuadForm make_form(const mpz_class& a, const mpz_class& b, const mpz_class& c) {
    if (a <= 0) throw contract_error("form: leading coefficient must be positive");
    QuadForm f{a, b, c};
    if (f.discriminant() >= 0) throw contract_error("form: discriminant must be negative");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g != 1) throw contract_error("form: not primitive, content " + g.get_str());
    return f;
}

QuadForm principal_form(const mpz_class& disc) {
    if (disc >= 0) throw contract_error("principal_form: discriminant must be negative");
    unsigned long r = mpz_fdiv_ui(disc.get_mpz_t(), 4);
    if (r == 0) return QuadForm{1, 0, -disc / 4};
    if (r == 1) return QuadForm{1, 1, (1 - disc) / 4};
    throw contract_error("principal_form: discriminant must be 0 or 1 mod 4");
}

namespace {

// ---------------------------------------------------------------------
// int64/__int128 fast path. Eligible whenever both operands have
// |a|, |b| < 2^30 and c < 2^57 with |disc| < 2^56; every intermediate
// below then stays under 2^122.
// ---------------------------------------------------------------------

using i64 = int64_t;
using i128 = __int128;

struct FormI {
    i64 a, b, c;
    bool operator==(const FormI& o) const { return a == o.a && b == o.b && c == o.c; }
};

i128 floordiv_i128(i128 num, i128 den) {
    i128 q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    return q;
}

// b <- b mod 2a in (-a, a], c adjusted to keep the discriminant
void normalize_i(i128& a, i128& b, i128& c) {
    i128 k = floordiv_i128(a - b, 2 * a);
    if (k != 0) {
        i128 b2 = b + 2 * a * k;
        c += k * ((b + b2) / 2);
        b = b2;
    }
}

void reduce_i(i128& a, i128& b, i128& c) {
    normalize_i(a, b, c);
    while (a > c) {
        std::swap(a, c);
        b = -b;
        normalize_i(a, b, c);
    }
    if (a == c && b < 0) b = -b;
}

void ext_gcd_i(i64 x, i64 y, i64& g, i64& u, i64& v) {
    i64 old_r = x, r = y, old_u = 1, uu = 0, old_v = 0, vv = 1;
    while (r != 0) {
        i64 q = old_r / r;
        i64 t = old_r - q * r; old_r = r; r = t;
        t = old_u - q * uu; old_u = uu; uu = t;
        t = old_v - q * vv; old_v = vv; vv = t;
    }
    if (old_r < 0) { old_r = -old_r; old_u = -old_u; old_v = -old_v; }
    g = old_r; u = old_u; v = old_v;
}

FormI compose_i(const FormI& f1, const FormI& f2, i64 disc) {
    i64 s = (f1.b + f2.b) / 2;
    i64 g0, u0, v0;
    ext_gcd_i(f1.a, f2.a, g0, u0, v0);
    i64 d, v1, w;
    ext_gcd_i(g0, s, d, v1, w);
    i128 v = (i128)v0 * v1;
    i64 a2d = f2.a / d;
    i128 a3 = (i128)(f1.a / d) * a2d;
    i128 t = ((i128)(s - f2.b) * v - (i128)w * f2.c) * a2d * 2;
    i128 b3 = f2.b + t;
    // normalize b3 before squaring it for c3
    i128 m = 2 * a3;
    b3 %= m;
    if (b3 > a3) b3 -= m;
    if (b3 <= -a3) b3 += m;
    i128 c3 = (b3 * b3 - disc) / (4 * a3);
    reduce_i(a3, b3, c3);
    return FormI{(i64)a3, (i64)b3, (i64)c3};
}

FormI power_i(const FormI& f, uint64_t k, i64 disc, const FormI& id) {
    FormI result = id, base = f;
    while (k) {
        if (k & 1) result = compose_i(result, base, disc);
        base = compose_i(base, base, disc);
        k >>= 1;
    }
    return result;
}

constexpr i64 kFastAB = i64(1) << 30;
constexpr i64 kFastC = i64(1) << 57;
constexpr i64 kFastDisc = i64(1) << 56;

bool fast_eligible(const QuadForm& f) {
    return f.a.fits_slong_p() && f.b.fits_slong_p() && f.c.fits_slong_p() &&
           std::abs(f.a.get_si()) < kFastAB && std::abs(f.b.get_si()) < kFastAB &&
           f.c.get_si() < kFastC;
}

FormI to_i(const QuadForm& f) { return FormI{f.a.get_si(), f.b.get_si(), f.c.get_si()}; }

QuadForm from_i(const FormI& f) {
    return QuadForm{mpz_class(static_cast<long>(f.a)), mpz_class(static_cast<long>(f.b)),
                    mpz_class(static_cast<long>(f.c))};
}

// ---------------------------------------------------------------------
// mpz slow path
// ---------------------------------------------------------------------

void normalize_mpz(mpz_class& a, mpz_class& b, mpz_class& c) {
    mpz_class k = a - b, two_a = 2 * a;
    mpz_fdiv_q(k.get_mpz_t(), k.get_mpz_t(), two_a.get_mpz_t());
    if (k != 0) {
        mpz_class b2 = b + two_a * k;
        c += k * ((b + b2) / 2);
        b = b2;
    }
}

void reduce_mpz(mpz_class& a, mpz_class& b, mpz_class& c) {
    normalize_mpz(a, b, c);
    while (a > c) {
        mpz_swap(a.get_mpz_t(), c.get_mpz_t());
        b = -b;
        normalize_mpz(a, b, c);
    }
    if (a == c && b < 0) b = -b;
}

QuadForm compose_mpz(const QuadForm& f1, const QuadForm& f2, const mpz_class& disc) {
    mpz_class s = (f1.b + f2.b) / 2;
    mpz_class g0, u0, v0;
    mpz_gcdext(g0.get_mpz_t(), u0.get_mpz_t(), v0.get_mpz_t(), f1.a.get_mpz_t(), f2.a.get_mpz_t());
    mpz_class d, v1, w;
    mpz_gcdext(d.get_mpz_t(), v1.get_mpz_t(), w.get_mpz_t(), g0.get_mpz_t(), s.get_mpz_t());
    mpz_class v = v0 * v1;
    mpz_class a2d = f2.a / d;
    mpz_class a3 = (f1.a / d) * a2d;
    mpz_class t = ((s - f2.b) * v - w * f2.c) * a2d * 2;
    mpz_class b3 = f2.b + t;
    mpz_class m = 2 * a3;
    mpz_fdiv_r(b3.get_mpz_t(), b3.get_mpz_t(), m.get_mpz_t());
    if (b3 > a3) b3 -= m;
    mpz_class c3 = (b3 * b3 - disc) / (4 * a3);
    reduce_mpz(a3, b3, c3);
    return QuadForm{a3, b3, c3};
}

void require_valid(const QuadForm& f, const char* op) {
    if (f.a <= 0) throw contract_error(std::string(op) + ": leading coefficient must be positive");
    if (f.discriminant() >= 0)
        throw contract_error(std::string(op) + ": nonnegative discriminant rejected");
}

} // namespace

bool is_reduced(const QuadForm& f) {
    if (f.a <= 0 || f.c < f.a) return false;
    mpz_class ab;
    mpz_abs(ab.get_mpz_t(), f.b.get_mpz_t());
    if (ab > f.a) return false;
    if ((ab == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

QuadForm reduce(const QuadForm& f) {
    require_valid(f, "reduce");
    if (fast_eligible(f)) {
        i128 a = f.a.get_si(), b = f.b.get_si(), c = f.c.get_si();
        reduce_i(a, b, c);
        return QuadForm{mpz_class(static_cast<long>((i64)a)), mpz_class(static_cast<long>((i64)b)),
                        mpz_class(static_cast<long>((i64)c))};
    }
    mpz_class a = f.a, b = f.b, c = f.c;
    reduce_mpz(a, b, c);
    return QuadForm{a, b, c};
}

QuadForm compose(const QuadForm& f, const QuadForm& g) {
    require_valid(f, "compose");
    require_valid(g, "compose");
    mpz_class disc = f.discriminant();
    if (disc != g.discriminant())
        throw contract_error("compose: discriminants differ: " + disc.get_str() + " vs " +
                             g.discriminant().get_str());
    QuadForm rf = reduce(f), rg = reduce(g);
    if (disc > -kFastDisc && fast_eligible(rf) && fast_eligible(rg))
        return from_i(compose_i(to_i(rf), to_i(rg), disc.get_si()));
    return compose_mpz(rf, rg, disc);
}

QuadForm power(const QuadForm& f, const mpz_class& k) {
    require_valid(f, "power");
    if (k < 0) throw contract_error("power: exponent must be nonnegative");
    QuadForm result = principal_form(f.discriminant());
    QuadForm base = reduce(f);
    mpz_class e = k;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = compose(result, base);
        base = compose(base, base);
        e >>= 1;
    }
    return result;
}

QuadForm inverse(const QuadForm& f) {
    require_valid(f, "inverse");
    return reduce(QuadForm{f.a, -f.b, f.c});
}

// ---------------------------------------------------------------------
// class group oracle
// ---------------------------------------------------------------------

namespace {

struct Table {
    i64 disc;
    std::vector<FormI> forms; // sorted by (a, b, c); forms[id_index] == identity
    size_t id_index = 0;
    std::unordered_map<uint64_t, uint32_t> index; // (a,b) -> position

    static uint64_t key(i64 a, i64 b) { return (uint64_t(a) << 32) ^ uint64_t(uint32_t(b)); }
    uint32_t find(const FormI& f) const { return index.at(key(f.a, f.b)); }
};

i64 isqrt_i64(i64 n) {
    i64 r = (i64)std::sqrt((double)n);
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

Table enumerate_table(const mpz_class& disc, const ClassGroupOptions& opts) {
    if (disc >= 0) throw contract_error("class group oracle: discriminant must be negative");
    unsigned long r4 = mpz_fdiv_ui(disc.get_mpz_t(), 4);
    if (r4 != 0 && r4 != 1)
        throw contract_error("class group oracle: discriminant must be 0 or 1 mod 4");
    mpz_class absd = -disc;
    if (absd > opts.oracle_bound)
        throw resource_limit_error("class group oracle: |disc| = " + absd.get_str() +
                                   " exceeds the configured bound " + opts.oracle_bound.get_str());
    if (absd >= kFastDisc)
        throw resource_limit_error("class group oracle: |disc| >= 2^56 is outside the oracle range");

    Table t;
    t.disc = -absd.get_si();
    i64 d = absd.get_si();
    i64 amax = isqrt_i64(d / 3);
    int parity = int(r4 & 1); // b parity equals disc parity
    for (i64 a = 1; a <= amax; ++a) {
        i64 four_a = 4 * a;
        i64 b0 = -a + 1;
        if (((b0 & 1) ^ parity) != 0) ++b0;
        for (i64 b = b0; b <= a; b += 2) {
            i64 num = b * b + d;
            if (num % four_a != 0) continue;
            i64 c = num / four_a;
            if (c < a) continue;
            if (a == c && b < 0) continue;
            i64 g = std::gcd(std::gcd(a, std::abs(b)), c);
            if (g != 1) continue;
            t.forms.push_back(FormI{a, b, c});
        }
    }
    std::sort(t.forms.begin(), t.forms.end(), [](const FormI& x, const FormI& y) {
        return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
    });
    t.index.reserve(t.forms.size() * 2);
    for (uint32_t i = 0; i < t.forms.size(); ++i)
        t.index.emplace(Table::key(t.forms[i].a, t.forms[i].b), i);
    FormI id{1, parity, (parity == 0) ? d / 4 : (d + 1) / 4};
    t.id_index = t.find(id);
    return t;
}

uint32_t compose_idx(const Table& t, uint32_t i, uint32_t j) {
    return t.find(compose_i(t.forms[i], t.forms[j], t.disc));
}

uint32_t power_idx(const Table& t, uint32_t i, uint64_t k) {
    FormI r = power_i(t.forms[i], k, t.disc, t.forms[t.id_index]);
    return t.find(r);
}

std::vector<std::pair<uint64_t, unsigned>> factor_u64(uint64_t n) {
    std::vector<std::pair<uint64_t, unsigned>> out;
    PartialFactorization f = factorize(mpz_class(static_cast<unsigned long>(n)),
                                       FactorEffort{100'000, 50'000'000});
    if (!f.complete())
        throw internal_inconsistency_error("failed to factor a class number");
    for (const auto& [p, e] : f.prime_powers) out.emplace_back(p.get_ui(), e);
    return out;
}

// Per-prime partition of the Sylow p-subgroup, from the statistics of
// p-power orders: with c_k = #{g in G : g^(p^k) = 1} = (h/p^v) * p^(sum_i min(e_i,k)),
// the conjugate partition falls out of successive differences.
std::vector<unsigned> sylow_partition(const Table& t, uint64_t h, uint64_t p, unsigned v) {
    uint64_t m = h;
    for (unsigned i = 0; i < v; ++i) m /= p;
    std::vector<uint64_t> count_exponent(v + 1, 0);
    for (uint32_t i = 0; i < t.forms.size(); ++i) {
        uint32_t x = power_idx(t, i, m);
        unsigned e = 0;
        while (x != t.id_index) {
            x = power_idx(t, x, p);
            ++e;
            if (e > v)
                throw internal_inconsistency_error("p-power order exceeds the Sylow exponent");
        }
        ++count_exponent[e];
    }
    std::vector<unsigned> s(v + 1, 0); // s[k] = sum_i min(e_i, k)
    uint64_t cumulative = 0;
    for (unsigned k = 0; k <= v; ++k) {
        cumulative += count_exponent[k];
        if (cumulative % m != 0)
            throw internal_inconsistency_error("torsion count is not a multiple of the fiber size");
        uint64_t q = cumulative / m;
        unsigned log = 0;
        while (q > 1) {
            if (q % p != 0) throw internal_inconsistency_error("torsion count is not a p-power");
            q /= p;
            ++log;
        }
        s[k] = log;
    }
    // parts_ge[k] = #{i : e_i >= k} = s[k] - s[k-1]
    std::vector<unsigned> parts_ge(v + 1, 0);
    for (unsigned k = 1; k <= v; ++k) parts_ge[k] = s[k] - s[k - 1];
    std::vector<unsigned> partition;
    for (unsigned i = 1; i <= parts_ge[1]; ++i) {
        unsigned e = 0;
        for (unsigned k = 1; k <= v; ++k)
            if (parts_ge[k] >= i) e = k;
        partition.push_back(e);
    }
    unsigned total = std::accumulate(partition.begin(), partition.end(), 0u);
    if (total != v) throw internal_inconsistency_error("Sylow partition does not sum to v_p(h)");
    return partition; // weakly decreasing
}

// Independent basis of the Sylow p-subgroup: greedy over elements in order
// of decreasing p-power order, accepting a candidate only when it extends
// the generated subgroup by a full direct factor.
std::vector<uint32_t> sylow_basis(const Table& t, uint64_t h, uint64_t p, unsigned v,
                                  const std::vector<unsigned>& partition) {
    uint64_t m = h;
    for (unsigned i = 0; i < v; ++i) m /= p;
    std::map<uint32_t, unsigned> sylow; // element index -> exponent e with ord = p^e
    for (uint32_t i = 0; i < t.forms.size(); ++i) {
        uint32_t x = power_idx(t, i, m);
        if (sylow.count(x)) continue;
        unsigned e = 0;
        uint32_t y = x;
        while (y != t.id_index) {
            y = power_idx(t, y, p);
            ++e;
        }
        sylow.emplace(x, e);
    }
    std::vector<std::pair<uint32_t, unsigned>> candidates(sylow.begin(), sylow.end());
    std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) {
        return x.second != y.second ? x.second > y.second : x.first < y.first;
    });
    uint64_t sylow_size = 1;
    for (unsigned i = 0; i < v; ++i) sylow_size *= p;

    std::set<uint32_t> span{uint32_t(t.id_index)};
    std::vector<uint32_t> basis;
    size_t slot = 0;
    for (const auto& [cand, e] : candidates) {
        if (span.size() == sylow_size) break;
        if (slot >= partition.size() || e != partition[slot]) continue;
        if (span.count(cand)) continue;
        uint64_t ord = 1;
        for (unsigned i = 0; i < e; ++i) ord *= p;
        uint64_t want = span.size() * ord;
        std::set<uint32_t> next(span);
        uint32_t acc = cand;
        bool direct = true;
        for (uint64_t j = 1; j < ord && direct; ++j) {
            for (uint32_t s : span)
                if (!next.insert(compose_idx(t, s, acc)).second) { direct = false; break; }
            acc = compose_idx(t, acc, cand);
        }
        if (!direct || next.size() != want) continue;
        span.swap(next);
        basis.push_back(cand);
        ++slot;
    }
    if (span.size() != sylow_size)
        throw internal_inconsistency_error("Sylow basis search did not span the subgroup");
    return basis;
}

ClassGroupStructure structure_from_table(const Table& t) {
    ClassGroupStructure out;
    out.discriminant = mpz_class(static_cast<long>(t.disc));
    uint64_t h = t.forms.size();
    out.class_number = mpz_class(static_cast<unsigned long>(h));
    if (h == 1) return out;

    auto hfac = factor_u64(h);
    // per prime: partition (decreasing) and basis element indices
    struct PrimePart {
        uint64_t p;
        std::vector<unsigned> partition;
        std::vector<uint32_t> basis;
    };
    std::vector<PrimePart> parts;
    size_t slots = 0;
    for (const auto& [p, v] : hfac) {
        PrimePart pp;
        pp.p = p;
        pp.partition = sylow_partition(t, h, p, v);
        pp.basis = sylow_basis(t, h, p, v, pp.partition);
        if (pp.basis.size() != pp.partition.size())
            throw internal_inconsistency_error("Sylow basis size disagrees with the partition");
        slots = std::max(slots, pp.partition.size());
        parts.push_back(std::move(pp));
    }
    // divisor for slot i (0 = largest) is the product over primes of p^partition[i]
    for (size_t slot = 0; slot < slots; ++slot) {
        mpz_class d = 1;
        uint32_t gen = uint32_t(t.id_index);
        for (const auto& pp : parts) {
            if (slot >= pp.partition.size()) continue;
            mpz_class pe;
            mpz_ui_pow_ui(pe.get_mpz_t(), (unsigned long)pp.p, pp.partition[slot]);
            d *= pe;
            gen = compose_idx(t, gen, pp.basis[slot]);
        }
        out.elementary_divisors.push_back(d);
        out.generators.push_back(from_i(t.forms[gen]));
    }
    std::reverse(out.elementary_divisors.begin(), out.elementary_divisors.end());
    std::reverse(out.generators.begin(), out.generators.end());
    mpz_class prod = 1;
    for (const auto& d : out.elementary_divisors) prod *= d;
    if (prod != out.class_number)
        throw internal_inconsistency_error("elementary divisors do not multiply to h");
    return out;
}

} // namespace

ClassGroupStructure enumerate_class_group(const mpz_class& disc, const ClassGroupOptions& opts) {
    Table t = enumerate_table(disc, opts);
    return structure_from_table(t);
}

unsigned p_rank(const ClassGroupStructure& structure, const mpz_class& p) {
    if (p < 2 || !is_probable_prime(p)) throw contract_error("p_rank: p must be prime");
    unsigned rank = 0;
    for (const auto& d : structure.elementary_divisors)
        if (mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) ++rank;
    return rank;
}

OracleAudit audit_class_group(const mpz_class& disc, uint64_t assoc_samples, uint64_t seed,
                              const ClassGroupOptions& opts) {
    Table t = enumerate_table(disc, opts);
    OracleAudit audit;
    audit.structure = structure_from_table(t);
    const uint32_t n = uint32_t(t.forms.size());
    const i64 d = t.disc;

    auto valid_member = [&](const FormI& f) {
        if (f.a <= 0 || f.c < f.a) return false;
        i64 ab = std::abs(f.b);
        if (ab > f.a) return false;
        if ((ab == f.a || f.a == f.c) && f.b < 0) return false;
        if (f.b * f.b - 4 * f.a * f.c != d) return false;
        return std::gcd(std::gcd(f.a, ab), f.c) == 1;
    };

    audit.closure_ok = audit.commutative_ok = true;
    for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t j = i; j < n; ++j) {
            FormI r = compose_i(t.forms[i], t.forms[j], d);
            ++audit.compositions;
            if (!valid_member(r)) { audit.closure_ok = false; break; }
            if (i != j) {
                FormI r2 = compose_i(t.forms[j], t.forms[i], d);
                ++audit.compositions;
                if (!(r == r2)) { audit.commutative_ok = false; break; }
            }
        }
        if (!audit.closure_ok || !audit.commutative_ok) break;
    }

    audit.identity_ok = true;
    const FormI& id = t.forms[t.id_index];
    for (uint32_t i = 0; i < n && audit.identity_ok; ++i) {
        FormI r = compose_i(id, t.forms[i], d);
        ++audit.compositions;
        audit.identity_ok = (r == t.forms[i]);
    }

    audit.inverse_ok = true;
    for (uint32_t i = 0; i < n && audit.inverse_ok; ++i) {
        i128 ia = t.forms[i].a, ib = -t.forms[i].b, ic = t.forms[i].c;
        reduce_i(ia, ib, ic);
        FormI inv{(i64)ia, (i64)ib, (i64)ic};
        if (!valid_member(inv)) { audit.inverse_ok = false; break; }
        FormI r = compose_i(t.forms[i], inv, d);
        ++audit.compositions;
        audit.inverse_ok = (r == id);
    }

    audit.associative_ok = true;
    auto assoc_check = [&](uint32_t i, uint32_t j, uint32_t k) {
        FormI lhs = compose_i(compose_i(t.forms[i], t.forms[j], d), t.forms[k], d);
        FormI rhs = compose_i(t.forms[i], compose_i(t.forms[j], t.forms[k], d), d);
        audit.compositions += 4;
        return lhs == rhs;
    };
    if (assoc_samples == 0) {
        for (uint32_t i = 0; i < n && audit.associative_ok; ++i)
            for (uint32_t j = 0; j < n && audit.associative_ok; ++j)
                for (uint32_t k = 0; k < n && audit.associative_ok; ++k)
                    audit.associative_ok = assoc_check(i, j, k);
    } else {
        std::mt19937_64 rng(seed);
        for (uint64_t s = 0; s < assoc_samples && audit.associative_ok; ++s)
            audit.associative_ok = assoc_check(uint32_t(rng() % n), uint32_t(rng() % n),
                                               uint32_t(rng() % n));
    }

    // brute-force p-torsion vs the derived divisors, for every prime p | h
    audit.torsion_ok = true;
    for (const auto& [p, v] : factor_u64(n)) {
        (void)v;
        uint64_t torsion = 0;
        for (uint32_t i = 0; i < n; ++i)
            if (power_idx(t, i, p) == t.id_index) ++torsion;
        unsigned rank = p_rank(audit.structure, mpz_class(static_cast<unsigned long>(p)));
        uint64_t expect = 1;
        for (unsigned r = 0; r < rank; ++r) expect *= p;
        if (torsion != expect) { audit.torsion_ok = false; break; }
    }
    return audit;
}

// ---------------------------------------------------------------------
// rank-2 certificate
// ---------------------------------------------------------------------

Rank2Certificate verify_rank2(unsigned p, const QuadForm& f1, const QuadForm& f2) {
    if (p < 5 || !is_probable_prime(mpz_class(p)))
        throw contract_error("verify_rank2: p must be a prime >= 5");
    mpz_class disc = f1.discriminant();
    if (disc != f2.discriminant())
        throw contract_error("verify_rank2: discriminants differ");
    Rank2Certificate cert;
    cert.p = p;
    cert.discriminant = disc;
    cert.f1 = reduce(f1);
    cert.f2 = reduce(f2);
    QuadForm id = principal_form(disc);

    auto record = [&](std::string relation, bool expect_principal, const QuadForm& value) {
        bool principal = (value == id);
        cert.transcript.push_back(
            Rank2Check{std::move(relation), expect_principal, principal, principal == expect_principal});
    };

    record("F1", false, cert.f1);
    record("F2", false, cert.f2);
    record("F1^p", true, power(cert.f1, p));
    record("F2^p", true, power(cert.f2, p));
    QuadForm f2t = id; // F2^t, t running 0..p-1
    for (unsigned t = 0; t < p; ++t) {
        record("F1*F2^" + std::to_string(t), false, compose(cert.f1, f2t));
        if (t + 1 < p) f2t = compose(f2t, cert.f2);
    }
    cert.valid = std::all_of(cert.transcript.begin(), cert.transcript.end(),
                             [](const Rank2Check& c) { return c.ok; });
    return cert;
}

bool replay_certificate(const Rank2Certificate& cert) {
    Rank2Certificate fresh = verify_rank2(cert.p, cert.f1, cert.f2);
    if (fresh.transcript.size() != cert.transcript.size() || fresh.valid != cert.valid)
        return false;
    for (size_t i = 0; i < fresh.transcript.size(); ++i) {
        const auto& a = fresh.transcript[i];
        const auto& b = cert.transcript[i];
        if (a.relation != b.relation || a.expect_principal != b.expect_principal ||
            a.observed_principal != b.observed_principal || a.ok != b.ok)
            return false;
    }
    return true;
}

} // namespace classrank
