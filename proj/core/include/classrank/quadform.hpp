#ifndef CLASSRANK_QUADFORM_HPP
#define CLASSRANK_QUADFORM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "classrank/errors.hpp"

namespace classrank {

/// Primitive integral binary quadratic form a x^2 + b x y + c y^2 of
/// negative discriminant b^2 - 4ac, a > 0. The computational stand-in for
/// an ideal class of the order of that discriminant.
struct QuadForm {
    mpz_class a, b, c;

    mpz_class discriminant() const { return b * b - 4 * a * c; }
    bool operator==(const QuadForm& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const QuadForm& o) const;
    std::string str() const;
};

/// Validates a > 0, discriminant < 0 and gcd(a,b,c) = 1; throws contract_error.
QuadForm make_form(const mpz_class& a, const mpz_class& b, const mpz_class& c);

/// Identity class: (1, 0, -D/4) or (1, 1, (1-D)/4) by residue of D mod 4.
QuadForm principal_form(const mpz_class& disc);

/// Unique reduced representative: |b| <= a <= c with b >= 0 whenever
/// |b| = a or a = c.
QuadForm reduce(const QuadForm& f);

bool is_reduced(const QuadForm& f);

/// Gauss/Dirichlet composition of the classes of f and g, reduced.
/// Forms of different discriminants are rejected.
QuadForm compose(const QuadForm& f, const QuadForm& g);

/// Reduced k-th power by square-and-multiply; power(f, 0) is principal.
QuadForm power(const QuadForm& f, const mpz_class& k);

/// Class inverse: the reduction of (a, -b, c).
QuadForm inverse(const QuadForm& f);

/// Elementary-divisor decomposition of a form class group.
struct ClassGroupStructure {
    mpz_class discriminant;
    mpz_class class_number;
    std::vector<mpz_class> elementary_divisors; // d1 | d2 | ... | dk, each > 1
    std::vector<QuadForm> generators;           // generators[i] has order elementary_divisors[i]
};

struct ClassGroupOptions {
    mpz_class oracle_bound = 10'000'000; // largest |disc| the oracle accepts
};

/// Small-discriminant oracle: enumerates all reduced primitive forms, then
/// derives the group structure from element orders under composition.
/// |disc| beyond the configured bound is a resource error, not a contract
/// violation.
ClassGroupStructure enumerate_class_group(const mpz_class& disc, const ClassGroupOptions& opts = {});

/// Number of elementary divisors divisible by p.
unsigned p_rank(const ClassGroupStructure& structure, const mpz_class& p);

/// Exhaustive verification of the oracle's composition table:
/// closure + commutativity on every ordered pair, identity and inverse for
/// every element, associativity on sampled triples (all triples when
/// assoc_samples = 0), and p-torsion counts against the derived divisors.
struct OracleAudit {
    ClassGroupStructure structure;
    bool closure_ok = false;
    bool commutative_ok = false;
    bool identity_ok = false;
    bool inverse_ok = false;
    bool associative_ok = false;
    bool torsion_ok = false;
    uint64_t compositions = 0;
};
OracleAudit audit_class_group(const mpz_class& disc, uint64_t assoc_samples, uint64_t seed,
                              const ClassGroupOptions& opts = {});

/// One replayable step of a rank-2 certificate.
struct Rank2Check {
    std::string relation;    // "F1", "F2", "F1^p", "F2^p", or "F1*F2^t"
    bool expect_principal;   // required outcome for the certificate to hold
    bool observed_principal;
    bool ok;                 // observed == expected
};

/// Composition-only certificate that <[F1],[F2]> = (Z/p)^2 inside the form
/// class group of the common discriminant. Validity needs every transcript
/// entry to hold: F1, F2 nonprincipal, F1^p and F2^p principal, and
/// F1*F2^t nonprincipal for t = 0..p-1. p prime then forces orders exactly
/// p with trivial intersection, so a valid certificate is an unconditional
/// proof.
struct Rank2Certificate {
    unsigned p = 0;
    mpz_class discriminant;
    QuadForm f1, f2;
    std::vector<Rank2Check> transcript;
    bool valid = false;
};

Rank2Certificate verify_rank2(unsigned p, const QuadForm& f1, const QuadForm& f2);

/// Reruns every transcript check from the stored forms and compares with the
/// recorded outcomes. True iff all recomputed entries match.
bool replay_certificate(const Rank2Certificate& cert);

} // namespace classrank

#endif
