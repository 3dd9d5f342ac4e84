#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ctcoul/scalar.hpp"

namespace ctcoul {

// Dense univariate polynomial over one coefficient field. Coefficients are
// stored in ascending powers and kept normalized (no trailing exact zeros),
// so degree() == -1 identifies the zero polynomial. Every polynomial knows
// its indeterminate by name ('r', 'b', 'E'); arithmetic between different
// indeterminates or different fields is refused rather than reinterpreted.
class Poly {
public:
    Poly(Field f, char var) : field_(f), var_(var) {}

    static Poly constant(Scalar c, char var);
    static Poly monomial(Scalar c, int power, char var);
    // Coefficients ascending; all must share one field. Empty -> zero poly,
    // but the field still has to be named explicitly then.
    static Poly from_coeffs(std::vector<Scalar> coeffs, char var);

    Field field() const { return field_; }
    char var() const { return var_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    // Coefficient of x^j; zero (of the right field) beyond the degree.
    Scalar coeff(int j) const;
    const std::vector<Scalar>& coeffs() const { return c_; }
    const Scalar& leading() const;

    Scalar eval(const Scalar& x) const;
    Poly derivative() const;

    Poly operator-() const;
    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);

    // Multiply by a scalar of the same field.
    Poly scaled(const Scalar& s) const;

    // Euclidean division: a = q*b + r with deg r < deg b. b must be nonzero.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
    // Division known to be exact; throws DomainError on a nonzero remainder.
    static Poly div_exact(const Poly& a, const Poly& b);

    // Rename the indeterminate (used when a determinant in E is reused as a
    // generic polynomial). Cheap relabel, no coefficient change.
    Poly with_var(char var) const;

    // Map every rational coefficient to a Real of the given precision.
    Poly to_real(mpfr_prec_t prec) const;

    std::string str() const; // human-readable, for diagnostics

private:
    void trim();
    static void require_compatible(const Poly& a, const Poly& b, const char* op);

    Field field_;
    char var_;
    std::vector<Scalar> c_;
};

// Content/primitive-part machinery for exact polynomials: scales a
// rational-coefficient polynomial to integer coefficients with gcd 1 and a
// positive leading coefficient. Signs of values on the real line are
// preserved up to that positive factor, which is all Sturm theory needs.
Poly primitive_part(const Poly& p);

// Greatest common divisor over the rationals (primitive Euclidean remainder
// sequence), returned as a primitive integer polynomial.
Poly poly_gcd(Poly a, Poly b);

} // namespace ctcoul
