#include "classrank/family.hpp"

namespace classrank {

const char* to_string(HypothesisMode m) {
    return m == HypothesisMode::Strict ? "strict" : "relaxed";
}

mpz_class eval_g(const mpz_class& a, const mpz_class& b, unsigned p) {
    // Horner over sum_{i=0}^{p-1} a^i b^{p-1-i}; the sum form is also right
    // at the removable singularity a == b, where it gives p a^(p-1).
    mpz_class acc = 1, bp = 1;
    for (unsigned i = 1; i < p; ++i) {
        bp *= b;
        acc = acc * a + bp;
    }
    return acc;
}

mpz_class eval_f(unsigned p, const mpz_class& q, const mpz_class& a, const mpz_class& b) {
    mpz_class ap, bp, qp, q2p;
    mpz_pow_ui(ap.get_mpz_t(), a.get_mpz_t(), p);
    mpz_pow_ui(bp.get_mpz_t(), b.get_mpz_t(), p);
    mpz_pow_ui(qp.get_mpz_t(), q.get_mpz_t(), p);
    q2p = qp * qp;
    mpz_class g = eval_g(a, b, p);
    mpz_class amb = a - b;
    return 2 * (ap + bp) * qp - amb * amb * q2p - g * g;
}

FamilyPoint make_point(unsigned p, const mpz_class& q, const mpz_class& a, const mpz_class& b) {
    FamilyPoint pt;
    pt.p = p;
    pt.q = q;
    pt.a = a;
    pt.b = b;
    pt.g = eval_g(a, b, p);
    mpz_class qp;
    mpz_pow_ui(qp.get_mpz_t(), q.get_mpz_t(), p);
    mpz_class shift = (a - b) * qp;
    pt.X1 = pt.g + shift;
    pt.Y1 = a * q;
    pt.X2 = pt.g - shift;
    pt.Y2 = b * q;
    pt.D = eval_f(p, q, a, b);
    // The defining identity is asserted, never assumed.
    mpz_class y1p, y2p;
    mpz_pow_ui(y1p.get_mpz_t(), pt.Y1.get_mpz_t(), p);
    mpz_pow_ui(y2p.get_mpz_t(), pt.Y2.get_mpz_t(), p);
    if (pt.X1 * pt.X1 - 4 * y1p != -pt.D || pt.X2 * pt.X2 - 4 * y2p != -pt.D)
        throw internal_inconsistency_error("family identity X^2 - 4Y^p = -D failed at (p=" +
                                           std::to_string(p) + ", q=" + q.get_str() + ", a=" +
                                           a.get_str() + ", b=" + b.get_str() + ")");
    return pt;
}

bool HypothesisReport::accepted() const {
    bool base = positive && residue_ok && coprime_ok;
    if (mode == HypothesisMode::Strict)
        return base && in_window && size_ok && squarefree.verdict == SquarefreeVerdict::Squarefree;
    return base && squarefree.verdict != SquarefreeVerdict::NotSquarefree;
}

bool window_contains(unsigned p, const mpz_class& q, const mpz_class& x) {
    if (x <= 0) return false;
    // lower: x > q^(p/(p-2)) / (2p)   <=>  (2 p x)^(p-2) > q^p
    mpz_class qp;
    mpz_pow_ui(qp.get_mpz_t(), q.get_mpz_t(), p);
    mpz_class lhs;
    mpz_class base = 2 * p * x;
    mpz_pow_ui(lhs.get_mpz_t(), base.get_mpz_t(), p - 2);
    if (!(lhs > qp)) return false;
    // upper: x < (u/v) q^(p/(p-2)) with u = 2^(p-1) p^(p-1) + 1, v = 2^p p^p
    //        <=>  (v x)^(p-2) < u^(p-2) q^p
    mpz_class u, v, pp;
    mpz_ui_pow_ui(pp.get_mpz_t(), p, p - 1);
    u = (mpz_class(1) << (p - 1)) * pp + 1;
    v = (mpz_class(1) << p) * pp * p;
    mpz_class lv, ru;
    base = v * x;
    mpz_pow_ui(lv.get_mpz_t(), base.get_mpz_t(), p - 2);
    mpz_pow_ui(ru.get_mpz_t(), u.get_mpz_t(), p - 2);
    return lv < ru * qp;
}

std::optional<std::pair<mpz_class, mpz_class>> strict_window(unsigned p, const mpz_class& q) {
    mpz_class qp;
    mpz_pow_ui(qp.get_mpz_t(), q.get_mpz_t(), p);
    // smallest a with (2pa)^(p-2) > q^p: 2pa must reach the smallest integer
    // t with t^(p-2) > q^p, i.e. t = floor((q^p)^(1/(p-2))) + 1
    mpz_class t;
    mpz_root(t.get_mpz_t(), qp.get_mpz_t(), p - 2);
    ++t;
    mpz_class two_p = 2 * mpz_class(p);
    mpz_class lo;
    mpz_cdiv_q(lo.get_mpz_t(), t.get_mpz_t(), two_p.get_mpz_t());
    // largest a with (v a)^(p-2) < u^(p-2) q^p
    mpz_class u, v, pp;
    mpz_ui_pow_ui(pp.get_mpz_t(), p, p - 1);
    u = (mpz_class(1) << (p - 1)) * pp + 1;
    v = (mpz_class(1) << p) * pp * p;
    mpz_class w, s;
    mpz_pow_ui(w.get_mpz_t(), u.get_mpz_t(), p - 2);
    w *= qp;
    int exact = mpz_root(s.get_mpz_t(), w.get_mpz_t(), p - 2);
    if (exact != 0) --s;
    mpz_class hi;
    mpz_fdiv_q(hi.get_mpz_t(), s.get_mpz_t(), v.get_mpz_t());
    if (lo > hi || hi <= 0) return std::nullopt;
    return std::make_pair(lo, hi);
}

HypothesisReport check_hypotheses(const FamilyPoint& pt, HypothesisMode mode,
                                  unsigned long trial_bound, const FactorEffort& effort) {
    HypothesisReport rep;
    rep.mode = mode;
    rep.in_window = window_contains(pt.p, pt.q, pt.a) && window_contains(pt.p, pt.q, pt.b);
    rep.positive = pt.D > 0;
    // size: f >= 4 a b^((p-1)/2) q^((p+1)/2); p odd so both exponents integral
    mpz_class bs, qs;
    mpz_pow_ui(bs.get_mpz_t(), pt.b.get_mpz_t(), (pt.p - 1) / 2);
    mpz_pow_ui(qs.get_mpz_t(), pt.q.get_mpz_t(), (pt.p + 1) / 2);
    rep.size_ok = pt.D >= 4 * pt.a * bs * qs;
    rep.residue_ok = mpz_fdiv_ui(pt.D.get_mpz_t(), 4) == 3; // -D == 1 (mod 4)
    mpz_class g1, g2;
    mpz_gcd(g1.get_mpz_t(), pt.X1.get_mpz_t(), pt.Y1.get_mpz_t());
    mpz_gcd(g2.get_mpz_t(), pt.X2.get_mpz_t(), pt.Y2.get_mpz_t());
    rep.coprime_ok = (g1 == 1 && g2 == 1);
    if (pt.D > 0) {
        rep.squarefree = classify_squarefree(pt.D, trial_bound, effort);
    } else if (pt.D < 0) {
        rep.squarefree = classify_squarefree(-pt.D, trial_bound, effort);
    } else {
        rep.squarefree.verdict = SquarefreeVerdict::NotSquarefree;
        rep.squarefree.witness = 2; // 4 | 0
        rep.squarefree.bound = trial_bound;
    }
    return rep;
}

std::pair<QuadForm, QuadForm> witness_forms(const FamilyPoint& pt) {
    if (pt.D <= 0)
        throw contract_error("witness_forms: D must be positive, got " + pt.D.get_str());
    if (mpz_fdiv_ui(pt.D.get_mpz_t(), 4) != 3)
        throw contract_error("witness_forms: residue violated, -D = " + mpz_class(-pt.D).get_str() +
                             " is not 1 mod 4");
    mpz_class g1, g2;
    mpz_gcd(g1.get_mpz_t(), pt.X1.get_mpz_t(), pt.Y1.get_mpz_t());
    mpz_gcd(g2.get_mpz_t(), pt.X2.get_mpz_t(), pt.Y2.get_mpz_t());
    if (g1 != 1)
        throw contract_error("witness_forms: gcd(X1, Y1) = " + g1.get_str() + " is not 1");
    if (g2 != 1)
        throw contract_error("witness_forms: gcd(X2, Y2) = " + g2.get_str() + " is not 1");
    mpz_class y1e, y2e;
    mpz_pow_ui(y1e.get_mpz_t(), pt.Y1.get_mpz_t(), pt.p - 1);
    mpz_pow_ui(y2e.get_mpz_t(), pt.Y2.get_mpz_t(), pt.p - 1);
    QuadForm f1 = make_form(pt.Y1, pt.X1, y1e);
    QuadForm f2 = make_form(pt.Y2, pt.X2, y2e);
    if (f1.discriminant() != -pt.D || f2.discriminant() != -pt.D)
        throw internal_inconsistency_error("witness form discriminant disagrees with -D");
    return {f1, f2};
}

} // namespace classrank
