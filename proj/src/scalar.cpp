#include "ctcoul/scalar.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <vector>

namespace ctcoul {

// ---------------------------------------------------------------- Rational

Rational::Rational(long num, long den) {
    mpq_init(q_);
    if (den == 0) throw DomainError("Rational: zero denominator");
    mpq_set_si(q_, num, 1);
    mpq_t d;
    mpq_init(d);
    mpq_set_si(d, den, 1);
    mpq_div(q_, q_, d);
    mpq_clear(d);
}

Rational& Rational::operator=(const Rational& o) {
    if (this != &o) mpq_set(q_, o.q_);
    return *this;
}

Rational& Rational::operator=(Rational&& o) noexcept {
    if (this != &o) mpq_swap(q_, o.q_);
    return *this;
}

Rational Rational::parse(const std::string& text) {
    if (text.empty()) throw DomainError("Rational: empty string");
    if (text.find('/') != std::string::npos) {
        Rational r;
        if (mpq_set_str(r.q_, text.c_str(), 10) != 0)
            throw DomainError("Rational: cannot parse '" + text + "'");
        if (mpz_sgn(mpq_denref(r.q_)) == 0)
            throw DomainError("Rational: zero denominator in '" + text + "'");
        mpq_canonicalize(r.q_);
        return r;
    }

    // Decimal form: [sign] digits [. digits] [e/E [sign] digits].
    // Convert exactly: mantissa as integer, then scale by a power of ten.
    std::string s = text;
    bool neg = false;
    std::size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') { neg = (s[pos] == '-'); ++pos; }

    std::string digits;
    long frac_digits = 0;
    bool seen_digit = false, seen_dot = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((c == 'e' || c == 'E') && seen_digit) {
            break;
        } else {
            throw DomainError("Rational: cannot parse '" + text + "'");
        }
    }
    if (!seen_digit) throw DomainError("Rational: cannot parse '" + text + "'");

    long exp10 = 0;
    if (pos < s.size()) { // exponent part
        ++pos; // skip e/E
        bool eneg = false;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) { eneg = (s[pos] == '-'); ++pos; }
        if (pos >= s.size()) throw DomainError("Rational: cannot parse '" + text + "'");
        for (; pos < s.size(); ++pos) {
            if (!std::isdigit(static_cast<unsigned char>(s[pos])))
                throw DomainError("Rational: cannot parse '" + text + "'");
            exp10 = exp10 * 10 + (s[pos] - '0');
            if (exp10 > 1000000) throw DomainError("Rational: exponent overflow in '" + text + "'");
        }
        if (eneg) exp10 = -exp10;
    }
    exp10 -= frac_digits;

    Rational r;
    if (mpq_set_str(r.q_, digits.c_str(), 10) != 0)
        throw DomainError("Rational: cannot parse '" + text + "'");
    mpz_t ten_pow;
    mpz_init(ten_pow);
    mpz_ui_pow_ui(ten_pow, 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    if (exp10 >= 0)
        mpz_mul(mpq_numref(r.q_), mpq_numref(r.q_), ten_pow);
    else
        mpz_mul(mpq_denref(r.q_), mpq_denref(r.q_), ten_pow);
    mpz_clear(ten_pow);
    mpq_canonicalize(r.q_);
    if (neg) mpq_neg(r.q_, r.q_);
    return r;
}

bool Rational::is_integer() const {
    return mpz_cmp_ui(mpq_denref(q_), 1) == 0;
}

Rational Rational::abs() const {
    Rational r(*this);
    mpq_abs(r.q_, r.q_);
    return r;
}

Rational Rational::floor() const {
    Rational r;
    mpz_fdiv_q(mpq_numref(r.q_), mpq_numref(q_), mpq_denref(q_));
    mpz_set_ui(mpq_denref(r.q_), 1);
    return r;
}

long Rational::mag_exponent() const {
    if (is_zero()) throw DomainError("Rational: magnitude of zero");
    // |num/den| <= 2^(bits(num) - bits(den) + 1)
    long bn = static_cast<long>(mpz_sizeinbase(mpq_numref(q_), 2));
    long bd = static_cast<long>(mpz_sizeinbase(mpq_denref(q_), 2));
    return bn - bd + 1;
}

std::string Rational::str() const {
    char* c = mpq_get_str(nullptr, 10, q_);
    std::string out(c);
    std::free(c);
    return out;
}

Rational Rational::operator-() const {
    Rational r(*this);
    mpq_neg(r.q_, r.q_);
    return r;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("Rational: division by zero");
    mpq_div(q_, q_, o.q_);
    return *this;
}

Rational rational_denominator_lcm(const Rational& acc, const Rational& x) {
    // acc carries the running lcm as an integer (numerator over 1), so the
    // fold combines acc's value with x's denominator.
    Rational out;
    mpz_lcm(mpq_numref(out.raw()), mpq_numref(acc.raw()), mpq_denref(x.raw()));
    mpz_set_ui(mpq_denref(out.raw()), 1);
    return out;
}

Rational rational_numerator_gcd(const Rational& acc, const Rational& x) {
    Rational out;
    mpz_gcd(mpq_numref(out.raw()), mpq_numref(acc.raw()), mpq_numref(x.raw()));
    mpz_set_ui(mpq_denref(out.raw()), 1);
    return out;
}

// -------------------------------------------------------------------- Real

Real::Real(double x, mpfr_prec_t prec) {
    mpfr_init2(x_, prec);
    mpfr_set_d(x_, x, MPFR_RNDN);
}

Real::Real(const Rational& q, mpfr_prec_t prec) {
    mpfr_init2(x_, prec);
    mpfr_set_q(x_, q.raw(), MPFR_RNDN);
}

Real::Real(const Real& o) {
    mpfr_init2(x_, o.prec());
    mpfr_set(x_, o.x_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
    mpfr_init2(x_, o.prec());
    mpfr_swap(x_, o.x_);
}

Real& Real::operator=(const Real& o) {
    if (this != &o) {
        mpfr_set_prec(x_, o.prec());
        mpfr_set(x_, o.x_, MPFR_RNDN);
    }
    return *this;
}

Real& Real::operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(x_, o.x_);
    return *this;
}

Real Real::abs() const {
    Real r(*this);
    mpfr_abs(r.x_, r.x_, MPFR_RNDN);
    return r;
}

Real Real::sqrt() const {
    if (sign() < 0) throw DomainError("Real: sqrt of negative value");
    Real r(0.0, prec());
    mpfr_sqrt(r.x_, x_, MPFR_RNDN);
    return r;
}

std::string Real::str(int significant_digits) const {
    if (significant_digits < 2) significant_digits = 2;
    std::vector<char> buf(static_cast<std::size_t>(significant_digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", significant_digits - 1, x_);
    return std::string(buf.data());
}

Real Real::operator-() const {
    Real r(*this);
    mpfr_neg(r.x_, r.x_, MPFR_RNDN);
    return r;
}

namespace {
mpfr_prec_t min_prec(const Real& a, const Real& b) {
    return a.prec() < b.prec() ? a.prec() : b.prec();
}
} // namespace

Real operator+(const Real& a, const Real& b) {
    Real r(0.0, min_prec(a, b));
    mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}

Real operator-(const Real& a, const Real& b) {
    Real r(0.0, min_prec(a, b));
    mpfr_sub(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}

Real operator*(const Real& a, const Real& b) {
    Real r(0.0, min_prec(a, b));
    mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}

Real operator/(const Real& a, const Real& b) {
    if (b.is_zero()) throw DomainError("Real: division by zero");
    Real r(0.0, min_prec(a, b));
    mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}

// ------------------------------------------------------------------ Scalar

const Rational& Scalar::rat() const {
    if (!is_rational()) throw FieldMismatchError("Scalar: rat() on a real value");
    return std::get<Rational>(v_);
}

const Real& Scalar::real() const {
    if (is_rational()) throw FieldMismatchError("Scalar: real() on a rational value");
    return std::get<Real>(v_);
}

int Scalar::sign() const {
    return is_rational() ? rat().sign() : real().sign();
}

bool Scalar::is_zero() const {
    return is_rational() ? rat().is_zero() : real().is_zero();
}

Scalar Scalar::abs() const {
    return is_rational() ? Scalar(rat().abs()) : Scalar(real().abs());
}

double Scalar::to_double() const {
    return is_rational() ? rat().to_double() : real().to_double();
}

std::string Scalar::str() const {
    return is_rational() ? rat().str() : real().str();
}

Scalar Scalar::zero_like(const Scalar& ref) {
    if (ref.is_rational()) return Scalar(Rational(0));
    return Scalar(Real(0.0, ref.real().prec()));
}

Scalar Scalar::one_like(const Scalar& ref) {
    if (ref.is_rational()) return Scalar(Rational(1));
    return Scalar(Real(1.0, ref.real().prec()));
}

Scalar Scalar::operator-() const {
    return is_rational() ? Scalar(-rat()) : Scalar(-real());
}

void Scalar::require_same_field(const Scalar& a, const Scalar& b, const char* op) {
    if (a.field() != b.field())
        throw FieldMismatchError(std::string("Scalar: '") + op + "' mixes " +
                                 field_name(a.field()) + " and " + field_name(b.field()) +
                                 " operands; convert explicitly");
}

Scalar operator+(const Scalar& a, const Scalar& b) {
    Scalar::require_same_field(a, b, "+");
    if (a.is_rational()) return Scalar(a.rat() + b.rat());
    return Scalar(a.real() + b.real());
}

Scalar operator-(const Scalar& a, const Scalar& b) {
    Scalar::require_same_field(a, b, "-");
    if (a.is_rational()) return Scalar(a.rat() - b.rat());
    return Scalar(a.real() - b.real());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    Scalar::require_same_field(a, b, "*");
    if (a.is_rational()) return Scalar(a.rat() * b.rat());
    return Scalar(a.real() * b.real());
}

Scalar operator/(const Scalar& a, const Scalar& b) {
    Scalar::require_same_field(a, b, "/");
    if (a.is_rational()) return Scalar(a.rat() / b.rat());
    return Scalar(a.real() / b.real());
}

bool operator==(const Scalar& a, const Scalar& b) {
    Scalar::require_same_field(a, b, "==");
    if (a.is_rational()) return a.rat() == b.rat();
    return a.real() == b.real();
}

bool operator<(const Scalar& a, const Scalar& b) {
    Scalar::require_same_field(a, b, "<");
    if (a.is_rational()) return a.rat() < b.rat();
    return a.real() < b.real();
}

} // namespace ctcoul
