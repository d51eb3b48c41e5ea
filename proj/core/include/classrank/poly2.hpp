#ifndef CLASSRANK_POLY2_HPP
#define CLASSRANK_POLY2_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "classrank/errors.hpp"

namespace classrank {

/// Bivariate polynomial over Q, sparse map from (deg_x, deg_y) to a nonzero
/// exact rational coefficient.
class Poly2 {
public:
    using Key = std::pair<unsigned, unsigned>;
    using Terms = std::map<Key, mpq_class>;

    Poly2() = default;
    static Poly2 constant(const mpq_class& v);
    static Poly2 monomial(unsigned dx, unsigned dy, const mpq_class& coeff);
    static Poly2 x() { return monomial(1, 0, 1); }
    static Poly2 y() { return monomial(0, 1, 1); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool integer_coefficients() const;
    mpq_class coeff(unsigned dx, unsigned dy) const;
    int degree_x() const;     // -1 for the zero polynomial
    int degree_y() const;
    int total_degree() const;

    void set_coeff(unsigned dx, unsigned dy, const mpq_class& v);

    Poly2 operator-() const;
    Poly2 operator+(const Poly2& o) const;
    Poly2 operator-(const Poly2& o) const;
    Poly2 operator*(const Poly2& o) const;
    Poly2 operator*(const mpq_class& s) const;
    bool operator==(const Poly2& o) const { return terms_ == o.terms_; }

    Poly2 derivative_x() const;
    Poly2 derivative_y() const;

    mpq_class eval(const mpq_class& x, const mpq_class& y) const;
    mpz_class eval_z(const mpz_class& x, const mpz_class& y) const; // integer coeffs only

    /// Coefficient of x^k, a polynomial in y alone.
    Poly2 coeff_of_x(unsigned k) const;

    std::string str() const;

private:
    Terms terms_; // no zero coefficients stored
};

/// True iff g divides f exactly (viewing x as the main variable).
bool divides(const Poly2& g, const Poly2& f);

/// GCD in Q[x,y] via primitive-part Euclid (subresultant remainder
/// sequence) with x as the main variable and contents in Q[y]. The result
/// is scaled so its lexicographic (x before y) leading coefficient is 1;
/// the gcd with a nonzero constant is 1.
Poly2 gcd2(const Poly2& f, const Poly2& g);

/// f_q as a symbolic polynomial:
/// 2 (x^p + y^p) q^p - (x - y)^2 q^(2p) - (x^(p-1) + ... + y^(p-1))^2.
Poly2 family_poly(unsigned p, const mpz_class& q);

/// The characteristic-zero derivative criterion as applied to f_q:
/// gcd2(f, df/dx) and gcd2(f, df/dy) both constant. Equivalent to
/// squarefreeness whenever f has trivial content in each variable
/// separately, which holds for f_q (its x^(2p-2) and y^(2p-2) coefficients
/// are -1).
bool lemma31_criterion(const Poly2& f);

bool check_lemma31(unsigned p, const mpz_class& q);

/// Squarefreeness of an arbitrary f in Q[x,y]: gcd2(f, df/dx, df/dy) is
/// constant. (The two-gcd form above can reject squarefree inputs like
/// x*(x-y), whose y-content-free part still shares the factor x with
/// df/dy.)
bool poly_is_squarefree(const Poly2& f);

} // namespace classrank

#endif
