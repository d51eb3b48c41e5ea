#include "classrank/report_json.hpp"

#include <sstream>

namespace classrank {

namespace {

std::string zstr(const mpz_class& z) { return z.get_str(); }
mpz_class zparse(const json& j) { return mpz_class(j.get<std::string>()); }

std::string qstr(const mpq_class& q) { return q.get_str(); }
mpq_class qparse(const json& j) {
    mpq_class v(j.get<std::string>());
    v.canonicalize();
    return v;
}

SquarefreeVerdict verdict_from_string(const std::string& s) {
    if (s == "squarefree") return SquarefreeVerdict::Squarefree;
    if (s == "not_squarefree") return SquarefreeVerdict::NotSquarefree;
    if (s == "squarefree_up_to_bound") return SquarefreeVerdict::SquarefreeUpToBound;
    throw contract_error("unknown squarefree verdict: " + s);
}

} // namespace

json to_json(const QuadForm& f) {
    return json{{"a", zstr(f.a)}, {"b", zstr(f.b)}, {"c", zstr(f.c)}};
}

QuadForm quadform_from_json(const json& j) {
    return QuadForm{zparse(j.at("a")), zparse(j.at("b")), zparse(j.at("c"))};
}

json to_json(const Rank2Certificate& cert) {
    json checks = json::array();
    for (const auto& c : cert.transcript)
        checks.push_back(json{{"relation", c.relation},
                              {"expect_principal", c.expect_principal},
                              {"observed_principal", c.observed_principal},
                              {"ok", c.ok}});
    return json{{"p", cert.p},
                {"discriminant", zstr(cert.discriminant)},
                {"f1", to_json(cert.f1)},
                {"f2", to_json(cert.f2)},
                {"transcript", checks},
                {"valid", cert.valid}};
}

Rank2Certificate certificate_from_json(const json& j) {
    Rank2Certificate cert;
    cert.p = j.at("p").get<unsigned>();
    cert.discriminant = zparse(j.at("discriminant"));
    cert.f1 = quadform_from_json(j.at("f1"));
    cert.f2 = quadform_from_json(j.at("f2"));
    for (const auto& c : j.at("transcript"))
        cert.transcript.push_back(Rank2Check{c.at("relation").get<std::string>(),
                                             c.at("expect_principal").get<bool>(),
                                             c.at("observed_principal").get<bool>(),
                                             c.at("ok").get<bool>()});
    cert.valid = j.at("valid").get<bool>();
    return cert;
}

json to_json(const Box& box) {
    return json{{"a_lo", zstr(box.a_lo)},
                {"a_hi", zstr(box.a_hi)},
                {"b_lo", zstr(box.b_lo)},
                {"b_hi", zstr(box.b_hi)},
                {"include_diagonal", box.include_diagonal}};
}

Box box_from_json(const json& j) {
    return Box{zparse(j.at("a_lo")), zparse(j.at("a_hi")), zparse(j.at("b_lo")),
               zparse(j.at("b_hi")), j.at("include_diagonal").get<bool>()};
}

json to_json(const ScanReport& report) {
    json values = json::array();
    for (const auto& v : report.values) {
        json points = json::array();
        for (const auto& [a, b] : v.points) points.push_back(json::array({zstr(a), zstr(b)}));
        values.push_back(json{{"D", zstr(v.D)},
                              {"points", points},
                              {"multiplicity", v.multiplicity()},
                              {"squarefree_verdict", to_string(v.verdict)},
                              {"fundamental_known", v.fundamental_known},
                              {"degenerate", v.degenerate},
                              {"certified", v.certified},
                              {"certificate", to_json(v.certificate)}});
    }
    json collisions = json::array();
    for (const auto& c : report.collisions)
        collisions.push_back(json{{"a1", zstr(c.a1)},
                                  {"b1", zstr(c.b1)},
                                  {"a2", zstr(c.a2)},
                                  {"b2", zstr(c.b2)}});
    return json{{"p", report.p},
                {"q", zstr(report.q)},
                {"X", report.X},
                {"box", to_json(report.box)},
                {"mode", to_string(report.mode)},
                {"S1", zstr(report.S1)},
                {"S2", zstr(report.S2)},
                {"S1_probable", zstr(report.S1_probable)},
                {"S2_probable", zstr(report.S2_probable)},
                {"distinct_squarefree", report.distinct_squarefree},
                {"distinct_probable", report.distinct_probable},
                {"cs_lower_bound", zstr(report.cs_lower_bound)},
                {"certified_rank2", report.certified_rank2},
                {"values", values},
                {"collisions", collisions},
                {"rejected", json{{"nonpositive", report.rejected.nonpositive},
                                  {"residue", report.rejected.residue},
                                  {"coprime", report.rejected.coprime},
                                  {"not_squarefree", report.rejected.not_squarefree},
                                  {"window", report.rejected.window},
                                  {"size", report.rejected.size}}},
                {"points_scanned", report.points_scanned},
                {"points_accepted", report.points_accepted}};
}

ScanReport scan_report_from_json(const json& j) {
    ScanReport rep;
    rep.p = j.at("p").get<unsigned>();
    rep.q = zparse(j.at("q"));
    rep.X = j.at("X").get<std::string>();
    rep.box = box_from_json(j.at("box"));
    rep.mode = j.at("mode").get<std::string>() == "strict" ? HypothesisMode::Strict
                                                           : HypothesisMode::Relaxed;
    rep.S1 = zparse(j.at("S1"));
    rep.S2 = zparse(j.at("S2"));
    rep.S1_probable = zparse(j.at("S1_probable"));
    rep.S2_probable = zparse(j.at("S2_probable"));
    rep.distinct_squarefree = j.at("distinct_squarefree").get<uint64_t>();
    rep.distinct_probable = j.at("distinct_probable").get<uint64_t>();
    rep.cs_lower_bound = zparse(j.at("cs_lower_bound"));
    rep.certified_rank2 = j.at("certified_rank2").get<uint64_t>();
    for (const auto& vj : j.at("values")) {
        DistinctValue v;
        v.D = zparse(vj.at("D"));
        for (const auto& pt : vj.at("points"))
            v.points.emplace_back(zparse(pt.at(0)), zparse(pt.at(1)));
        v.verdict = verdict_from_string(vj.at("squarefree_verdict").get<std::string>());
        v.fundamental_known = vj.at("fundamental_known").get<bool>();
        v.degenerate = vj.at("degenerate").get<bool>();
        v.certified = vj.at("certified").get<bool>();
        v.certificate = certificate_from_json(vj.at("certificate"));
        rep.values.push_back(std::move(v));
    }
    for (const auto& cj : j.at("collisions"))
        rep.collisions.push_back(CollisionQuad{zparse(cj.at("a1")), zparse(cj.at("b1")),
                                               zparse(cj.at("a2")), zparse(cj.at("b2"))});
    const auto& rj = j.at("rejected");
    rep.rejected.nonpositive = rj.at("nonpositive").get<uint64_t>();
    rep.rejected.residue = rj.at("residue").get<uint64_t>();
    rep.rejected.coprime = rj.at("coprime").get<uint64_t>();
    rep.rejected.not_squarefree = rj.at("not_squarefree").get<uint64_t>();
    rep.rejected.window = rj.at("window").get<uint64_t>();
    rep.rejected.size = rj.at("size").get<uint64_t>();
    rep.points_scanned = j.at("points_scanned").get<uint64_t>();
    rep.points_accepted = j.at("points_accepted").get<uint64_t>();
    return rep;
}

json to_json(const DensityEstimate& est) {
    json cvals = json::array();
    for (const auto& e : est.c_values) cvals.push_back(json{{"ell", e.ell}, {"c_ell", e.c_ell}});
    return json{{"truncation", est.truncation},
                {"partial_product", qstr(est.partial_product)},
                {"tail_lower", qstr(est.tail_lower)},
                {"tail_constant", qstr(est.tail_constant)},
                {"heuristic_tail", est.heuristic_tail},
                {"c_values", cvals}};
}

DensityEstimate density_from_json(const json& j) {
    DensityEstimate est;
    est.truncation = j.at("truncation").get<uint32_t>();
    est.partial_product = qparse(j.at("partial_product"));
    est.tail_lower = qparse(j.at("tail_lower"));
    est.tail_constant = qparse(j.at("tail_constant"));
    est.heuristic_tail = j.at("heuristic_tail").get<bool>();
    for (const auto& e : j.at("c_values"))
        est.c_values.push_back(CEllEntry{e.at("ell").get<uint32_t>(), e.at("c_ell").get<uint64_t>()});
    return est;
}

json to_json(const ClassGroupStructure& structure) {
    json divisors = json::array();
    for (const auto& d : structure.elementary_divisors) divisors.push_back(zstr(d));
    json gens = json::array();
    for (const auto& g : structure.generators) gens.push_back(to_json(g));
    json ranks = json::object();
    for (unsigned long pr : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul}) {
        unsigned rank = 0;
        for (const auto& d : structure.elementary_divisors)
            if (mpz_divisible_ui_p(d.get_mpz_t(), pr)) ++rank;
        ranks[std::to_string(pr)] = rank;
    }
    return json{{"discriminant", zstr(structure.discriminant)},
                {"class_number", zstr(structure.class_number)},
                {"elementary_divisors", divisors},
                {"p_ranks", ranks},
                {"generators", gens}};
}

json to_json(const GrowthFit& fit) {
    json pts = json::array();
    for (const auto& p : fit.points)
        pts.push_back(json{{"X", p.X}, {"count", p.count}});
    return json{{"points", pts},
                {"fitted_exponent", fit.fitted_exponent},
                {"target_exponent", fit.target_exponent}};
}

std::string scan_report_csv(const ScanReport& report) {
    std::ostringstream os;
    os << "D,a,b,multiplicity,squarefree_verdict,certified\n";
    for (const auto& v : report.values) {
        const auto& [a, b] = v.representative();
        os << v.D.get_str() << "," << a.get_str() << "," << b.get_str() << ","
           << v.multiplicity() << "," << to_string(v.verdict) << ","
           << (v.certified ? "true" : "false") << "\n";
    }
    return os.str();
}

} // namespace classrank
