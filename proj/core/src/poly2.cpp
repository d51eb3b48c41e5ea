#include "classrank/poly2.hpp"

#include "classrank/number.hpp"

#include <sstream>

namespace classrank {

Poly2 Poly2::constant(const mpq_class& v) {
    Poly2 p;
    if (v != 0) p.terms_[{0, 0}] = v;
    return p;
}

Poly2 Poly2::monomial(unsigned dx, unsigned dy, const mpq_class& coeff) {
    Poly2 p;
    if (coeff != 0) p.terms_[{dx, dy}] = coeff;
    return p;
}

bool Poly2::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0});
}

bool Poly2::integer_coefficients() const {
    for (const auto& [k, v] : terms_)
        if (v.get_den() != 1) return false;
    return true;
}

mpq_class Poly2::coeff(unsigned dx, unsigned dy) const {
    auto it = terms_.find({dx, dy});
    return it == terms_.end() ? mpq_class(0) : it->second;
}

int Poly2::degree_x() const {
    int d = -1;
    for (const auto& [k, v] : terms_) d = std::max(d, int(k.first));
    return d;
}

int Poly2::degree_y() const {
    int d = -1;
    for (const auto& [k, v] : terms_) d = std::max(d, int(k.second));
    return d;
}

int Poly2::total_degree() const {
    int d = -1;
    for (const auto& [k, v] : terms_) d = std::max(d, int(k.first + k.second));
    return d;
}

void Poly2::set_coeff(unsigned dx, unsigned dy, const mpq_class& v) {
    if (v == 0)
        terms_.erase({dx, dy});
    else
        terms_[{dx, dy}] = v;
}

Poly2 Poly2::operator-() const {
    Poly2 r;
    for (const auto& [k, v] : terms_) r.terms_[k] = -v;
    return r;
}

Poly2 Poly2::operator+(const Poly2& o) const {
    Poly2 r = *this;
    for (const auto& [k, v] : o.terms_) {
        auto [it, fresh] = r.terms_.emplace(k, v);
        if (!fresh) {
            it->second += v;
            if (it->second == 0) r.terms_.erase(it);
        }
    }
    return r;
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + (-o); }

Poly2 Poly2::operator*(const Poly2& o) const {
    Poly2 r;
    for (const auto& [k1, v1] : terms_) {
        for (const auto& [k2, v2] : o.terms_) {
            Key k{k1.first + k2.first, k1.second + k2.second};
            auto [it, fresh] = r.terms_.emplace(k, v1 * v2);
            if (!fresh) {
                it->second += v1 * v2;
                if (it->second == 0) r.terms_.erase(it);
            }
        }
    }
    return r;
}

Poly2 Poly2::operator*(const mpq_class& s) const {
    Poly2 r;
    if (s == 0) return r;
    for (const auto& [k, v] : terms_) r.terms_[k] = v * s;
    return r;
}

Poly2 Poly2::derivative_x() const {
    Poly2 r;
    for (const auto& [k, v] : terms_)
        if (k.first > 0) r.terms_[{k.first - 1, k.second}] = v * k.first;
    return r;
}

Poly2 Poly2::derivative_y() const {
    Poly2 r;
    for (const auto& [k, v] : terms_)
        if (k.second > 0) r.terms_[{k.first, k.second - 1}] = v * k.second;
    return r;
}

mpq_class Poly2::eval(const mpq_class& x, const mpq_class& y) const {
    // powers cached up to the degrees present
    std::map<unsigned, mpq_class> xp{{0, 1}}, yp{{0, 1}};
    auto pow_of = [](std::map<unsigned, mpq_class>& cache, const mpq_class& base, unsigned e) {
        auto it = cache.upper_bound(e);
        --it; // largest cached exponent <= e; exponent 0 is always present
        mpq_class v = it->second;
        for (unsigned i = it->first; i < e; ++i) v *= base;
        cache[e] = v;
        return v;
    };
    mpq_class acc = 0;
    for (const auto& [k, v] : terms_) acc += v * pow_of(xp, x, k.first) * pow_of(yp, y, k.second);
    return acc;
}

mpz_class Poly2::eval_z(const mpz_class& x, const mpz_class& y) const {
    if (!integer_coefficients())
        throw contract_error("eval_z: polynomial has non-integer coefficients");
    std::map<unsigned, mpz_class> xp{{0, 1}}, yp{{0, 1}};
    auto pow_of = [](std::map<unsigned, mpz_class>& cache, const mpz_class& base, unsigned e) {
        auto it = cache.upper_bound(e);
        --it; // largest cached exponent <= e; exponent 0 is always present
        mpz_class v = it->second;
        for (unsigned i = it->first; i < e; ++i) v *= base;
        cache[e] = v;
        return v;
    };
    mpz_class acc = 0;
    for (const auto& [k, v] : terms_)
        acc += v.get_num() * pow_of(xp, x, k.first) * pow_of(yp, y, k.second);
    return acc;
}

Poly2 Poly2::coeff_of_x(unsigned k) const {
    Poly2 r;
    for (const auto& [key, v] : terms_)
        if (key.first == k) r.terms_[{0, key.second}] = v;
    return r;
}

std::string Poly2::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [k, v] = *it;
        if (!first) os << " + ";
        os << v;
        if (k.first) os << "*x^" << k.first;
        if (k.second) os << "*y^" << k.second;
        first = false;
    }
    return os.str();
}

namespace {

// ----- univariate helpers in Q[y]: polynomials with deg_x = 0 -----

int deg_y(const Poly2& f) { return f.degree_y(); }

mpq_class lead_y(const Poly2& f) {
    int d = deg_y(f);
    return d < 0 ? mpq_class(0) : f.coeff(0, unsigned(d));
}

// f = q*g + r with deg_y(r) < deg_y(g); rational arithmetic
void univ_divmod(const Poly2& f, const Poly2& g, Poly2& q, Poly2& r) {
    int dg = deg_y(g);
    if (dg < 0) throw contract_error("polynomial division by zero");
    mpq_class lg = lead_y(g);
    q = Poly2{};
    r = f;
    while (!r.is_zero() && deg_y(r) >= dg) {
        int dr = deg_y(r);
        mpq_class factor = r.coeff(0, unsigned(dr)) / lg;
        Poly2 t = Poly2::monomial(0, unsigned(dr - dg), factor);
        q = q + t;
        r = r - t * g;
    }
}

Poly2 univ_divide_exact(const Poly2& f, const Poly2& g) {
    Poly2 q, r;
    univ_divmod(f, g, q, r);
    if (!r.is_zero())
        throw internal_inconsistency_error("exact polynomial division left a remainder");
    return q;
}

Poly2 univ_gcd(const Poly2& f, const Poly2& g) {
    Poly2 a = f, b = g;
    while (!b.is_zero()) {
        Poly2 q, r;
        univ_divmod(a, b, q, r);
        a = b;
        b = r;
    }
    if (a.is_zero()) return a;
    return a * (mpq_class(1) / lead_y(a)); // monic
}

Poly2 univ_pow(const Poly2& f, unsigned e) {
    Poly2 r = Poly2::constant(1);
    for (unsigned i = 0; i < e; ++i) r = r * f;
    return r;
}

// ----- x-main-variable helpers; coefficients live in Q[y] -----

Poly2 lead_x(const Poly2& f) { return f.coeff_of_x(unsigned(f.degree_x())); }

Poly2 shift_x(const Poly2& f, unsigned k) {
    Poly2 r;
    for (const auto& [key, v] : f.terms()) {
        Poly2 t = Poly2::monomial(key.first + k, key.second, v);
        r = r + t;
    }
    return r;
}

/// content of f in Q[y]: monic gcd of the x-coefficients
Poly2 content_x(const Poly2& f) {
    Poly2 c;
    int dx = f.degree_x();
    for (int k = 0; k <= dx; ++k) {
        Poly2 ck = f.coeff_of_x(unsigned(k));
        if (ck.is_zero()) continue;
        c = c.is_zero() ? (ck * (mpq_class(1) / lead_y(ck))) : univ_gcd(c, ck);
        if (c.is_constant()) return Poly2::constant(1);
    }
    return c;
}

/// divide every x-coefficient by the y-only polynomial d, exactly
Poly2 divide_by_ypoly(const Poly2& f, const Poly2& d) {
    if (d.is_constant()) {
        mpq_class c = d.coeff(0, 0);
        if (c == 0) throw contract_error("division by zero polynomial");
        return f * (mpq_class(1) / c);
    }
    Poly2 r;
    int dx = f.degree_x();
    for (int k = 0; k <= dx; ++k) {
        Poly2 ck = f.coeff_of_x(unsigned(k));
        if (ck.is_zero()) continue;
        r = r + shift_x(univ_divide_exact(ck, d), unsigned(k));
    }
    return r;
}

/// pseudo-remainder: lc(B)^(deg A - deg B + 1) * A = Q*B + R, returns R
Poly2 prem_x(const Poly2& A, const Poly2& B) {
    int db = B.degree_x();
    if (db < 0) throw contract_error("prem: division by zero");
    Poly2 lb = lead_x(B);
    Poly2 R = A;
    int e = A.degree_x() - db + 1;
    while (!R.is_zero() && R.degree_x() >= db) {
        int dr = R.degree_x();
        Poly2 lr = lead_x(R);
        R = R * lb - shift_x(lr, unsigned(dr - db)) * B;
        --e;
    }
    for (; e > 0; --e) R = R * lb;
    return R;
}

Poly2 normalize_lex(const Poly2& f) {
    if (f.is_zero()) return f;
    mpq_class lead = f.terms().rbegin()->second; // map is lex-ordered on (dx, dy)
    return f * (mpq_class(1) / lead);
}

/// subresultant PRS on x-primitive A, B; returns the primitive gcd part
Poly2 subresultant_gcd_x(Poly2 A, Poly2 B) {
    if (A.degree_x() < B.degree_x()) std::swap(A, B);
    Poly2 g = Poly2::constant(1), h = Poly2::constant(1);
    while (true) {
        int delta = A.degree_x() - B.degree_x();
        Poly2 R = prem_x(A, B);
        if (R.is_zero()) {
            Poly2 cb = content_x(B);
            return divide_by_ypoly(B, cb);
        }
        if (R.degree_x() == 0) return Poly2::constant(1);
        A = B;
        Poly2 divisor = g * univ_pow(h, unsigned(delta));
        B = divide_by_ypoly(R, divisor);
        g = lead_x(A);
        if (delta == 0) {
            // h unchanged
        } else if (delta == 1) {
            h = g;
        } else {
            h = divide_by_ypoly(univ_pow(g, unsigned(delta)), univ_pow(h, unsigned(delta - 1)));
        }
    }
}

} // namespace

bool divides(const Poly2& g, const Poly2& f) {
    if (g.is_zero()) return f.is_zero();
    if (f.is_zero()) return true;
    if (g.is_constant()) return true;
    if (g.degree_x() == 0) {
        // g in Q[y]: every x-coefficient of f must be divisible
        int dx = f.degree_x();
        for (int k = 0; k <= dx; ++k) {
            Poly2 ck = f.coeff_of_x(unsigned(k));
            if (ck.is_zero()) continue;
            Poly2 q, r;
            univ_divmod(ck, g, q, r);
            if (!r.is_zero()) return false;
        }
        return true;
    }
    if (f.degree_x() < g.degree_x()) return false;
    // split into content and primitive part; Gauss's lemma does the rest
    Poly2 cf = content_x(f), cg = content_x(g);
    Poly2 q, r;
    univ_divmod(cf, cg, q, r);
    if (!r.is_zero()) return false;
    Poly2 pf = divide_by_ypoly(f, cf), pg = divide_by_ypoly(g, cg);
    return prem_x(pf, pg).is_zero();
}

Poly2 gcd2(const Poly2& f, const Poly2& g) {
    if (f.is_zero() && g.is_zero()) throw contract_error("gcd2: gcd(0, 0) is undefined");
    if (f.is_zero()) return normalize_lex(g);
    if (g.is_zero()) return normalize_lex(f);
    if (f.is_constant() || g.is_constant()) return Poly2::constant(1);
    int fx = f.degree_x(), gx = g.degree_x();
    if (fx == 0 && gx == 0) return normalize_lex(univ_gcd(f, g));
    if (fx == 0) return normalize_lex(univ_gcd(f, content_x(g)));
    if (gx == 0) return normalize_lex(univ_gcd(g, content_x(f)));
    Poly2 cf = content_x(f), cg = content_x(g);
    Poly2 c = univ_gcd(cf, cg);
    Poly2 pf = divide_by_ypoly(f, cf), pg = divide_by_ypoly(g, cg);
    Poly2 gp = subresultant_gcd_x(pf, pg);
    return normalize_lex(c * gp);
}

Poly2 family_poly(unsigned p, const mpz_class& q) {
    if (p < 5) throw contract_error("family_poly: p must be >= 5");
    mpz_class qp;
    mpz_pow_ui(qp.get_mpz_t(), q.get_mpz_t(), p);
    mpq_class qpq(qp), q2pq(qp * qp);
    Poly2 f = (Poly2::monomial(p, 0, 1) + Poly2::monomial(0, p, 1)) * (2 * qpq);
    Poly2 xy = Poly2::x() - Poly2::y();
    f = f - xy * xy * q2pq;
    Poly2 gp;
    for (unsigned i = 0; i < p; ++i) gp = gp + Poly2::monomial(i, p - 1 - i, 1);
    return f - gp * gp;
}

bool lemma31_criterion(const Poly2& f) {
    if (f.is_zero()) throw contract_error("squarefree test: zero polynomial");
    if (f.is_constant()) return true;
    return gcd2(f, f.derivative_x()).is_constant() && gcd2(f, f.derivative_y()).is_constant();
}

bool poly_is_squarefree(const Poly2& f) {
    if (f.is_zero()) throw contract_error("squarefree test: zero polynomial");
    if (f.is_constant()) return true;
    return gcd2(gcd2(f, f.derivative_x()), f.derivative_y()).is_constant();
}

bool check_lemma31(unsigned p, const mpz_class& q) {
    if (p < 5 || !is_probable_prime(mpz_class(p)))
        throw contract_error("lemma31: p must be a prime >= 5");
    if (q < 5 || !is_probable_prime(q))
        throw contract_error("lemma31: q must be a prime >= 5");
    return lemma31_criterion(family_poly(p, q));
}

} // namespace classrank
