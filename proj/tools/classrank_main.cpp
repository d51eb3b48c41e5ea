// classrank: CLI front door for the discriminant-family machinery.
//
// Subcommands: classgroup, scan, density, lemmas, verify.
// Exit codes: 0 success, 2 usage/config error, 3 resource bound exceeded,
// 4 internal consistency failure (an exact identity failed, i.e. a bug).

#include <CLI11.hpp>

#include <classrank/density.hpp>
#include <classrank/family.hpp>
#include <classrank/parallel.hpp>
#include <classrank/poly2.hpp>
#include <classrank/quadform.hpp>
#include <classrank/report_json.hpp>
#include <classrank/scan.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace classrank;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitInternal = 4;

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw contract_error("cannot open output file: " + path);
    out << text;
}

mpz_class parse_mpz(const std::string& s, const char* what) {
    try {
        // accept scientific shorthand like 1e13 for whole numbers
        auto epos = s.find_first_of("eE");
        if (epos != std::string::npos) {
            mpz_class mantissa(s.substr(0, epos));
            long exp = std::stol(s.substr(epos + 1));
            if (exp < 0) throw std::invalid_argument("negative exponent");
            mpz_class scale;
            mpz_ui_pow_ui(scale.get_mpz_t(), 10, (unsigned long)exp);
            return mantissa * scale;
        }
        return mpz_class(s);
    } catch (const std::exception&) {
        throw contract_error(std::string(what) + ": cannot parse integer '" + s + "'");
    }
}

// "lo:hi,lo:hi" with half-open ranges, mirroring the usual slice syntax
Box parse_box(const std::string& spec) {
    auto comma = spec.find(',');
    if (comma == std::string::npos) throw contract_error("box: expected 'alo:ahi,blo:bhi'");
    auto parse_range = [](const std::string& r, mpz_class& lo, mpz_class& hi) {
        auto colon = r.find(':');
        if (colon == std::string::npos) throw contract_error("box: expected 'lo:hi' in " + r);
        lo = parse_mpz(r.substr(0, colon), "box");
        hi = parse_mpz(r.substr(colon + 1), "box") - 1; // half-open to inclusive
        if (lo > hi) throw contract_error("box: empty or reversed range " + r);
    };
    Box box;
    parse_range(spec.substr(0, comma), box.a_lo, box.a_hi);
    parse_range(spec.substr(comma + 1), box.b_lo, box.b_hi);
    return box;
}

unsigned check_p(long p) {
    if (p < 5 || !is_probable_prime(mpz_class(p)))
        throw contract_error("p must be a prime >= 5, got " + std::to_string(p));
    return unsigned(p);
}

int cmd_classgroup(long disc_in, const std::string& bound, const std::string& out_path) {
    mpz_class disc(disc_in);
    if (disc >= 0) throw contract_error("classgroup: discriminant must be negative");
    unsigned long r = mpz_fdiv_ui(disc.get_mpz_t(), 4);
    if (r != 0 && r != 1) throw contract_error("classgroup: discriminant must be 0 or 1 mod 4");
    ClassGroupOptions opts;
    if (!bound.empty()) opts.oracle_bound = parse_mpz(bound, "bound");
    ClassGroupStructure s = enumerate_class_group(disc, opts);
    write_output(to_json(s).dump(2) + "\n", out_path);
    return kExitOk;
}

int cmd_scan(long p_in, const std::string& q_str, const std::vector<std::string>& xs,
             const std::string& box_spec, bool strict_window_flag, bool skip_diagonal,
             const std::string& mode_str, unsigned long trial_bound, unsigned long rho_budget,
             unsigned workers, const mpq_class& constant, const std::string& format,
             const std::string& out_path) {
    unsigned p = check_p(p_in);
    HypothesisMode mode = mode_str == "strict" ? HypothesisMode::Strict : HypothesisMode::Relaxed;
    ScanEffort effort;
    effort.trial_bound = trial_bound;
    effort.factor.trial_bound = trial_bound;
    effort.factor.rho_iterations = rho_budget;

    struct Job {
        mpz_class q;
        std::string X;
    };
    std::vector<Job> jobs;
    if (!q_str.empty()) {
        jobs.push_back(Job{parse_mpz(q_str, "q"), ""});
    } else {
        for (const auto& xstr : xs) {
            mpz_class X = parse_mpz(xstr, "X");
            jobs.push_back(Job{select_q(p, X, constant), xstr});
        }
    }

    json reports = json::array();
    std::string csv;
    std::vector<GrowthPoint> growth;
    for (const auto& job : jobs) {
        Box box;
        bool window_empty = false;
        if (strict_window_flag) {
            auto wb = strict_window_box(p, job.q);
            if (!wb) {
                window_empty = true;
                box = Box{1, 0, 1, 0, true}; // empty
            } else {
                box = *wb;
            }
        } else if (!box_spec.empty()) {
            box = parse_box(box_spec);
        } else {
            box = default_box(p, job.q);
        }
        if (skip_diagonal) box.include_diagonal = false;
        ScanReport rep = run_scan(p, job.q, box, mode, effort, workers);
        rep.X = job.X;
        json j = to_json(rep);
        j["strict_window_empty"] = window_empty;
        reports.push_back(std::move(j));
        csv += scan_report_csv(rep);
        if (!job.X.empty())
            growth.push_back(GrowthPoint{mpz_get_d(parse_mpz(job.X, "X").get_mpz_t()),
                                         rep.distinct_squarefree});
        std::cerr << "scan p=" << p << " q=" << rep.q.get_str()
                  << (job.X.empty() ? "" : " X=" + job.X) << ": S1=" << rep.S1.get_str()
                  << " S2=" << rep.S2.get_str() << " cs_bound=" << rep.cs_lower_bound.get_str()
                  << " distinct_squarefree=" << rep.distinct_squarefree
                  << " certified=" << rep.certified_rank2
                  << (window_empty ? " (strict window empty)" : "") << "\n";
    }
    json doc;
    doc["reports"] = std::move(reports);
    if (growth.size() >= 2) {
        size_t positive = 0;
        for (const auto& g : growth) positive += g.count > 0 ? 1 : 0;
        if (positive >= 2) doc["growth_fit"] = to_json(growth_fit(growth, p));
    }
    if (format == "csv")
        write_output(csv, out_path);
    else
        write_output(doc.dump(2) + "\n", out_path);
    return kExitOk;
}

int cmd_density(long p_in, const std::string& q_str, uint32_t L, unsigned workers,
                const std::string& out_path) {
    unsigned p = check_p(p_in);
    mpz_class q = parse_mpz(q_str, "q");
    DensityEstimate est = euler_product(p, q, L, std::nullopt, workers);
    json j = to_json(est);
    j["partial_product_decimal"] = est.partial_product.get_d();
    j["lower_decimal"] = est.lower().get_d();
    write_output(j.dump(2) + "\n", out_path);
    return kExitOk;
}

int cmd_lemmas(long p_in, const std::string& q_str, uint32_t lmax, const std::string& out_path) {
    unsigned p = check_p(p_in);
    mpz_class q = parse_mpz(q_str, "q");
    if (q <= p) throw contract_error("lemmas: requires q > p");
    bool l31 = check_lemma31(p, q);
    json witnesses = json::array();
    bool all_found = true;
    for (uint32_t ell : primes_up_to(lmax)) {
        if (ell > lmax) break;
        auto w = lemma32_witness(p, q, ell);
        if (!w) {
            all_found = false;
            witnesses.push_back(json{{"ell", ell}, {"witness", nullptr}});
        } else {
            witnesses.push_back(json{{"ell", ell}, {"witness", json::array({w->first, w->second})}});
        }
    }
    json j{{"p", p},
           {"q", q.get_str()},
           {"lemma31", l31 ? "PASS" : "FAIL"},
           {"lemma32", all_found ? "witness found for every ell <= " + std::to_string(lmax)
                                 : "FAIL: some ell has no witness"},
           {"witnesses", witnesses}};
    write_output(j.dump(2) + "\n", out_path);
    return (l31 && all_found) ? kExitOk : kExitInternal;
}

int cmd_verify(const std::string& in_path) {
    std::ifstream in(in_path);
    if (!in) throw contract_error("verify: cannot open " + in_path);
    json doc = json::parse(in);
    std::vector<Rank2Certificate> certs;
    if (doc.contains("transcript")) {
        certs.push_back(certificate_from_json(doc));
    } else if (doc.contains("values")) {
        ScanReport rep = scan_report_from_json(doc);
        for (const auto& v : rep.values)
            if (v.certified) certs.push_back(v.certificate);
    } else if (doc.contains("reports")) {
        for (const auto& rj : doc.at("reports")) {
            ScanReport rep = scan_report_from_json(rj);
            for (const auto& v : rep.values)
                if (v.certified) certs.push_back(v.certificate);
        }
    } else {
        throw contract_error("verify: no certificate found in " + in_path);
    }
    if (certs.empty()) {
        std::cout << "no certificates to replay\n";
        return kExitOk;
    }
    bool all_ok = true, all_valid = true;
    for (const auto& cert : certs) {
        bool ok = replay_certificate(cert);
        all_ok = all_ok && ok;
        all_valid = all_valid && cert.valid;
        std::cout << "disc " << cert.discriminant.get_str() << " p=" << cert.p << ": replay "
                  << (ok ? "MATCH" : "MISMATCH") << ", certificate "
                  << (cert.valid ? "VALID" : "INVALID") << "\n";
    }
    if (!all_ok) return kExitInternal;
    return all_valid ? kExitOk : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"explicit imaginary quadratic discriminant families with p-rank 2 certificates"};
    app.require_subcommand(1);

    // classgroup
    auto* cg = app.add_subcommand("classgroup", "enumerate a form class group oracle");
    long cg_disc = 0;
    std::string cg_bound, cg_out;
    cg->add_option("--disc", cg_disc, "negative discriminant, 0 or 1 mod 4")->required();
    cg->add_option("--bound", cg_bound, "oracle bound on |disc| (default 10^7)");
    cg->add_option("--out", cg_out, "output path (default stdout)");

    // scan
    auto* sc = app.add_subcommand("scan", "sweep an (a,b) box and certify rank-2 discriminants");
    long sc_p = 0;
    std::string sc_q;
    std::vector<std::string> sc_X;
    std::string sc_box, sc_mode = "relaxed", sc_format = "json", sc_out;
    bool sc_strictwin = false, sc_skipdiag = false;
    unsigned long sc_trial = 10'000, sc_rho = 4'000'000;
    unsigned sc_workers = default_workers();
    unsigned long sc_seed = 0;
    std::string sc_constant = "1";
    sc->add_option("--p", sc_p, "prime p >= 5")->required();
    auto* optq = sc->add_option("--q", sc_q, "explicit prime q");
    auto* optx = sc->add_option(
        "--X", sc_X, "discriminant budget X; q = next prime near X^((p-2)/(2p(p-1))); repeatable");
    optq->excludes(optx);
    optx->excludes(optq);
    sc->add_option("--box", sc_box, "half-open box 'alo:ahi,blo:bhi' (default: window-sized)");
    sc->add_flag("--strict-window", sc_strictwin, "use exactly the integers in the strict window");
    sc->add_flag("--skip-diagonal", sc_skipdiag, "exclude a = b cells");
    sc->add_option("--mode", sc_mode, "strict|relaxed (default relaxed)")
        ->check(CLI::IsMember({"strict", "relaxed"}));
    sc->add_option("--trial-bound", sc_trial, "trial division bound (default 10000)");
    sc->add_option("--effort", sc_rho, "Pollard rho iteration budget (default 4e6)");
    sc->add_option("--workers", sc_workers, "data-parallel width (default CLASSRANK_WORKERS or 1)");
    sc->add_option("--constant", sc_constant, "rational constant in q = next_prime(c X^...)");
    sc->add_option("--seed", sc_seed, "random seed (reserved for fuzz harnesses)");
    sc->add_option("--format", sc_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    sc->add_option("--out", sc_out, "output path (default stdout)");

    // density
    auto* de = app.add_subcommand("density", "Euler product for squarefree values of f_q");
    long de_p = 0;
    std::string de_q, de_out;
    uint32_t de_L = 50;
    unsigned de_workers = default_workers();
    de->add_option("--p", de_p, "prime p >= 5")->required();
    de->add_option("--q", de_q, "prime q > p")->required();
    de->add_option("--L", de_L, "truncation prime bound (default 50)");
    de->add_option("--workers", de_workers, "data-parallel width");
    de->add_option("--out", de_out, "output path (default stdout)");

    // lemmas
    auto* le = app.add_subcommand("lemmas", "squarefreeness lemmas for f_q");
    long le_p = 0;
    std::string le_q, le_out;
    uint32_t le_lmax = 50;
    le->add_option("--p", le_p, "prime p >= 5")->required();
    le->add_option("--q", le_q, "prime q > p")->required();
    le->add_option("--lmax", le_lmax, "check witnesses for all primes <= lmax (default 50)");
    le->add_option("--out", le_out, "output path (default stdout)");

    // verify
    auto* ve = app.add_subcommand("verify", "replay stored rank-2 certificates");
    std::string ve_in;
    ve->add_option("--in", ve_in, "certificate or scan-report JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the message
        return kExitUsage;
    }

    try {
        if (cg->parsed()) return cmd_classgroup(cg_disc, cg_bound, cg_out);
        if (sc->parsed()) {
            if (sc_q.empty() && sc_X.empty())
                throw contract_error("scan: exactly one of --q / --X is required");
            mpq_class constant(sc_constant);
            constant.canonicalize();
            return cmd_scan(sc_p, sc_q, sc_X, sc_box, sc_strictwin, sc_skipdiag, sc_mode, sc_trial,
                            sc_rho, sc_workers, constant, sc_format, sc_out);
        }
        if (de->parsed()) return cmd_density(de_p, de_q, de_L, de_workers, de_out);
        if (le->parsed()) return cmd_lemmas(le_p, le_q, le_lmax, le_out);
        if (ve->parsed()) return cmd_verify(ve_in);
    } catch (const contract_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const resource_limit_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const internal_inconsistency_error& e) {
        std::cerr << "internal inconsistency (bug): " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
