#pragma once

#include <gmp.h>
#include <mpfr.h>

#include <string>
#include <variant>

#include "ctcoul/errors.hpp"

namespace ctcoul {

// Default working precision for floating scalars, in bits.
inline constexpr mpfr_prec_t kDefaultPrec = 256;

enum class Field { rational, real };

inline const char* field_name(Field f) {
    return f == Field::rational ? "rational" : "real";
}

// Arbitrary-precision rational, canonical at all times (GMP mpq_t with
// value-semantics on top).
class Rational {
public:
    Rational() { mpq_init(q_); }
    Rational(long num, long den = 1);
    Rational(const Rational& o) { mpq_init(q_); mpq_set(q_, o.q_); }
    Rational(Rational&& o) noexcept { mpq_init(q_); mpq_swap(q_, o.q_); }
    Rational& operator=(const Rational& o);
    Rational& operator=(Rational&& o) noexcept;
    ~Rational() { mpq_clear(q_); }

    // Accepts "p/q", integers, and plain decimal notation including an
    // exponent ("-3.25e2"); decimals convert exactly.
    static Rational parse(const std::string& text);

    int sign() const { return mpq_sgn(q_); }
    bool is_zero() const { return mpq_sgn(q_) == 0; }
    bool is_integer() const;
    Rational abs() const;
    Rational floor() const;

    double to_double() const { return mpq_get_d(q_); }
    // Smallest k with |x| <= 2^k; used for crude magnitude bounds. x != 0.
    long mag_exponent() const;
    std::string str() const; // "p/q", or just "p" for integers

    Rational operator-() const;
    Rational& operator+=(const Rational& o) { mpq_add(q_, q_, o.q_); return *this; }
    Rational& operator-=(const Rational& o) { mpq_sub(q_, q_, o.q_); return *this; }
    Rational& operator*=(const Rational& o) { mpq_mul(q_, q_, o.q_); return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.q_, b.q_) != 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) < 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    // Raw handle for interop with GMP/MPFR routines. Value stays canonical.
    mpq_srcptr raw() const { return q_; }
    mpq_ptr raw() { return q_; }

private:
    mpq_t q_;
};

// Fold helpers for normalizing polynomial coefficient vectors: `acc` is the
// running integer result (seed 1 resp. 0), combined with x's denominator
// (lcm) resp. numerator (gcd).
Rational rational_denominator_lcm(const Rational& acc, const Rational& x);
Rational rational_numerator_gcd(const Rational& acc, const Rational& x);

// Arbitrary-precision binary float (MPFR). Every value carries its own
// precision; binary operations round to the *minimum* of the operand
// precisions so a result never pretends to more accuracy than its inputs.
class Real {
public:
    explicit Real(double x = 0.0, mpfr_prec_t prec = kDefaultPrec);
    Real(const Rational& q, mpfr_prec_t prec = kDefaultPrec);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real() { mpfr_clear(x_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(x_); }
    int sign() const { return mpfr_sgn(x_); }
    bool is_zero() const { return mpfr_zero_p(x_) != 0; }
    Real abs() const;
    Real sqrt() const; // negative input -> DomainError

    double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
    std::string str(int significant_digits = 20) const;

    Real operator-() const;
    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);

    friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.x_, b.x_) == 0; }
    friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.x_, b.x_) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return b < a; }
    friend bool operator<=(const Real& a, const Real& b) { return !(b < a); }
    friend bool operator>=(const Real& a, const Real& b) { return !(a < b); }

    mpfr_srcptr raw() const { return x_; }
    mpfr_ptr raw() { return x_; }

private:
    mpfr_t x_;
};

// Tagged union over the two coefficient fields. Arithmetic demands matching
// fields; mixing throws FieldMismatchError rather than guessing a promotion.
class Scalar {
public:
    Scalar() : v_(Rational()) {}
    Scalar(Rational q) : v_(std::move(q)) {}
    Scalar(Real x) : v_(std::move(x)) {}

    Field field() const { return std::holds_alternative<Rational>(v_) ? Field::rational : Field::real; }
    bool is_rational() const { return field() == Field::rational; }

    const Rational& rat() const;
    const Real& real() const;

    int sign() const;
    bool is_zero() const;
    Scalar abs() const;
    double to_double() const;
    std::string str() const;

    // Zero/one in the same field (and, for reals, the same precision) as a
    // reference scalar. Keeps generic code from degrading precision.
    static Scalar zero_like(const Scalar& ref);
    static Scalar one_like(const Scalar& ref);

    Scalar operator-() const;
    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);

    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator<(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
    friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
    friend bool operator<=(const Scalar& a, const Scalar& b) { return !(b < a); }
    friend bool operator>=(const Scalar& a, const Scalar& b) { return !(a < b); }

private:
    static void require_same_field(const Scalar& a, const Scalar& b, const char* op);
    std::variant<Rational, Real> v_;
};

} // namespace ctcoul
