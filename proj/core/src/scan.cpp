#include "classrank/scan.hpp"

#include "classrank/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace classrank {

mpz_class select_q(unsigned p, const mpz_class& X, const mpq_class& constant) {
    if (p < 5 || !is_probable_prime(mpz_class(p)))
        throw contract_error("select_q: p must be a prime >= 5");
    if (X < 2) throw contract_error("select_q: X must be >= 2");
    if (constant <= 0) throw contract_error("select_q: constant must be positive");
    const unsigned r = p - 2;
    const unsigned d = 2 * p * (p - 1);
    // ceil(c * X^(r/d)): the smallest n with (n v)^d >= u^d X^r, c = u/v
    mpz_class u = constant.get_num(), v = constant.get_den();
    mpz_class w, xr;
    mpz_pow_ui(xr.get_mpz_t(), X.get_mpz_t(), r);
    mpz_pow_ui(w.get_mpz_t(), u.get_mpz_t(), d);
    w *= xr;
    mpz_class t;
    int exact = mpz_root(t.get_mpz_t(), w.get_mpz_t(), d);
    if (exact == 0) ++t; // t is now the least integer with t^d >= w
    mpz_class n;
    mpz_cdiv_q(n.get_mpz_t(), t.get_mpz_t(), v.get_mpz_t());
    return next_prime(n);
}

Box default_box(unsigned p, const mpz_class& q) {
    // ceil(q^(p/(p-2))): least B with B^(p-2) >= q^p
    mpz_class qp, b;
    mpz_pow_ui(qp.get_mpz_t(), q.get_mpz_t(), p);
    int exact = mpz_root(b.get_mpz_t(), qp.get_mpz_t(), p - 2);
    if (exact == 0) ++b;
    return Box{1, b, 1, b, true};
}

std::optional<Box> strict_window_box(unsigned p, const mpz_class& q) {
    auto w = strict_window(p, q);
    if (!w) return std::nullopt;
    return Box{w->first, w->second, w->first, w->second, true};
}

mpz_class cs_lower_bound_value(const mpz_class& S1, const mpz_class& S2) {
    if (S1 < 0 || S2 < 0) throw contract_error("cs_lower_bound: sums must be nonnegative");
    if (S2 == 0) {
        if (S1 != 0)
            throw internal_inconsistency_error("cs_lower_bound: S2 = 0 with S1 = " + S1.get_str());
        return 0;
    }
    mpz_class num = S1 * S1 + S2 - 1;
    mpz_class out;
    mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), S2.get_mpz_t());
    return out;
}

namespace {

struct PointOutcome {
    mpz_class a, b, D;
    bool accepted = false;
    // rejection flags (strict checks only consulted in strict mode)
    bool positive = false, residue = false, coprime = false, window = false, size = false;
};

void verify_collision_identity(unsigned p, const mpz_class& q, const mpz_class& a1,
                               const mpz_class& b1, const mpz_class& a2, const mpz_class& b2) {
    // 4 q^p (a1^p - a2^p) = (g(a1,b1) + (a1-b1) q^p)^2 - (g(a2,b2) + (a2-b2) q^p)^2,
    // both sides built independently from scratch
    mpz_class qp, a1p, a2p;
    mpz_pow_ui(qp.get_mpz_t(), q.get_mpz_t(), p);
    mpz_pow_ui(a1p.get_mpz_t(), a1.get_mpz_t(), p);
    mpz_pow_ui(a2p.get_mpz_t(), a2.get_mpz_t(), p);
    mpz_class lhs = 4 * qp * (a1p - a2p);
    mpz_class u = eval_g(a1, b1, p) + (a1 - b1) * qp;
    mpz_class v = eval_g(a2, b2, p) + (a2 - b2) * qp;
    mpz_class rhs = u * u - v * v;
    if (lhs != rhs)
        throw internal_inconsistency_error(
            "collision identity failed for (" + a1.get_str() + "," + b1.get_str() + ") vs (" +
            a2.get_str() + "," + b2.get_str() + ")");
}

} // namespace

ScanReport run_scan(unsigned p, const mpz_class& q, const Box& box, HypothesisMode mode,
                    const ScanEffort& effort, unsigned workers) {
    if (p < 5 || !is_probable_prime(mpz_class(p)))
        throw contract_error("run_scan: p must be a prime >= 5");
    if (!is_probable_prime(q)) throw contract_error("run_scan: q must be prime");
    ScanReport rep;
    rep.p = p;
    rep.q = q;
    rep.box = box;
    rep.mode = mode;
    if (box.empty()) return rep;
    mpz_class cells = (box.a_hi - box.a_lo + 1) * (box.b_hi - box.b_lo + 1);
    if (!cells.fits_ulong_p() || cells.get_ui() > (1ull << 32))
        throw resource_limit_error("run_scan: box has too many cells");
    const uint64_t width = mpz_class(box.b_hi - box.b_lo + 1).get_ui();
    const uint64_t n = mpz_class(cells).get_ui();

    // phase 1: evaluate every cell (data-parallel, slot-indexed so the
    // merge is order-deterministic)
    std::vector<PointOutcome> outcomes(n);
    run_chunked(n, workers, [&](size_t, uint64_t ib, uint64_t ie) {
        for (uint64_t i = ib; i < ie; ++i) {
            PointOutcome& out = outcomes[i];
            out.a = box.a_lo + mpz_class((unsigned long)(i / width));
            out.b = box.b_lo + mpz_class((unsigned long)(i % width));
            if (!box.include_diagonal && out.a == out.b) {
                out.D = 0;
                continue;
            }
            FamilyPoint pt = make_point(p, q, out.a, out.b);
            out.D = pt.D;
            out.positive = pt.D > 0;
            out.residue = mpz_fdiv_ui(pt.D.get_mpz_t(), 4) == 3;
            mpz_class g1, g2;
            mpz_gcd(g1.get_mpz_t(), pt.X1.get_mpz_t(), pt.Y1.get_mpz_t());
            mpz_gcd(g2.get_mpz_t(), pt.X2.get_mpz_t(), pt.Y2.get_mpz_t());
            out.coprime = (g1 == 1 && g2 == 1);
            if (mode == HypothesisMode::Strict) {
                out.window = window_contains(p, q, out.a) && window_contains(p, q, out.b);
                mpz_class bs, qs;
                mpz_pow_ui(bs.get_mpz_t(), pt.b.get_mpz_t(), (p - 1) / 2);
                mpz_pow_ui(qs.get_mpz_t(), pt.q.get_mpz_t(), (p + 1) / 2);
                out.size = pt.D >= 4 * pt.a * bs * qs;
            }
        }
    });

    // phase 2: serial tally and grouping by D
    std::map<mpz_class, std::vector<uint64_t>> groups; // D -> outcome indices, row-major order
    for (uint64_t i = 0; i < n; ++i) {
        const PointOutcome& out = outcomes[i];
        if (!box.include_diagonal && out.a == out.b) continue;
        ++rep.points_scanned;
        if (!out.positive) { ++rep.rejected.nonpositive; continue; }
        if (!out.residue) { ++rep.rejected.residue; continue; }
        if (!out.coprime) { ++rep.rejected.coprime; continue; }
        if (mode == HypothesisMode::Strict) {
            if (!out.window) { ++rep.rejected.window; continue; }
            if (!out.size) { ++rep.rejected.size; continue; }
        }
        groups[out.D].push_back(i);
    }

    // phase 3: classify squarefreeness once per distinct D (data-parallel)
    std::vector<const mpz_class*> distinct;
    distinct.reserve(groups.size());
    for (const auto& [D, idx] : groups) distinct.push_back(&D);
    std::vector<SquarefreeStatus> verdicts(distinct.size());
    run_chunked(distinct.size(), workers, [&](size_t, uint64_t ib, uint64_t ie) {
        for (uint64_t i = ib; i < ie; ++i)
            verdicts[i] = classify_squarefree(*distinct[i], effort.trial_bound, effort.factor);
    });

    // phase 4: certify one witness pair per accepted D (data-parallel)
    std::vector<DistinctValue> values(distinct.size());
    std::vector<char> keep(distinct.size(), 0);
    run_chunked(distinct.size(), workers, [&](size_t, uint64_t ib, uint64_t ie) {
        for (uint64_t i = ib; i < ie; ++i) {
            const mpz_class& D = *distinct[i];
            const SquarefreeStatus& st = verdicts[i];
            bool ok = (mode == HypothesisMode::Strict)
                          ? st.verdict == SquarefreeVerdict::Squarefree
                          : st.verdict != SquarefreeVerdict::NotSquarefree;
            if (!ok) continue;
            keep[i] = 1;
            DistinctValue& val = values[i];
            val.D = D;
            for (uint64_t idx : groups.at(D))
                val.points.emplace_back(outcomes[idx].a, outcomes[idx].b);
            val.verdict = st.verdict;
            val.fundamental_known = (st.verdict == SquarefreeVerdict::Squarefree);
            const auto& [ra, rb] = val.representative();
            val.degenerate = (ra == rb);
            FamilyPoint pt = make_point(p, q, ra, rb);
            auto [f1, f2] = witness_forms(pt);
            val.certificate = verify_rank2(p, f1, f2);
            val.certified = val.certificate.valid;
        }
    });

    // phase 5: serial aggregation in ascending-D order
    for (size_t i = 0; i < values.size(); ++i) {
        if (!keep[i]) {
            ++rep.rejected.not_squarefree;
            continue;
        }
        DistinctValue& val = values[i];
        mpz_class mult(static_cast<unsigned long>(val.multiplicity()));
        if (val.verdict == SquarefreeVerdict::Squarefree) {
            rep.S1 += mult;
            rep.S2 += mult * mult;
            ++rep.distinct_squarefree;
        } else {
            ++rep.distinct_probable;
        }
        rep.S1_probable += mult;
        rep.S2_probable += mult * mult;
        if (val.certified) ++rep.certified_rank2;
        rep.points_accepted += val.multiplicity();

        // collisions: all unordered pairs inside the group, identity-checked;
        // and, per fixed first coordinate, the root-count bound
        std::map<mpz_class, uint64_t> per_a;
        for (const auto& [a, b] : val.points) ++per_a[a];
        for (const auto& [a, cnt] : per_a)
            if (cnt > 2 * uint64_t(p - 1))
                throw internal_inconsistency_error(
                    "collision multiplicity " + std::to_string(cnt) + " at a = " + a.get_str() +
                    " exceeds the degree bound 2(p-1)");
        for (size_t s = 0; s < val.points.size(); ++s) {
            for (size_t t = s + 1; t < val.points.size(); ++t) {
                const auto& [a1, b1] = val.points[s];
                const auto& [a2, b2] = val.points[t];
                verify_collision_identity(p, q, a1, b1, a2, b2);
                rep.collisions.push_back(CollisionQuad{a1, b1, a2, b2});
            }
        }
        rep.values.push_back(std::move(val));
    }

    rep.cs_lower_bound = cs_lower_bound_value(rep.S1, rep.S2);
    if (mpz_class(static_cast<unsigned long>(rep.distinct_squarefree)) < rep.cs_lower_bound)
        throw internal_inconsistency_error("Cauchy-Schwarz bound exceeded the distinct count");
    return rep;
}

GrowthFit growth_fit(const std::vector<GrowthPoint>& points, unsigned p) {
    if (p < 2) throw contract_error("growth_fit: p must be at least 2");
    GrowthFit fit;
    fit.points = points;
    fit.target_exponent = 1.0 / double(p - 1);
    std::vector<std::pair<double, double>> logs;
    for (const auto& pt : points) {
        if (pt.count == 0) continue;
        if (pt.X <= 0) throw contract_error("growth_fit: X must be positive");
        logs.emplace_back(std::log(pt.X), std::log(double(pt.count)));
    }
    if (logs.size() < 2)
        throw contract_error("growth_fit: need at least two points with positive counts");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : logs) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = double(logs.size());
    double denom = m * sxx - sx * sx;
    if (denom == 0) throw contract_error("growth_fit: degenerate X values");
    fit.fitted_exponent = (m * sxy - sx * sy) / denom;
    return fit;
}

} // namespace classrank
