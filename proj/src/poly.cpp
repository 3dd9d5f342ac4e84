#include "ctcoul/poly.hpp"

#include <sstream>

namespace ctcoul {

Poly Poly::constant(Scalar c, char var) {
    Poly p(c.field(), var);
    if (!c.is_zero()) p.c_.push_back(std::move(c));
    return p;
}

Poly Poly::monomial(Scalar c, int power, char var) {
    if (power < 0) throw DomainError("Poly: negative power");
    Poly p(c.field(), var);
    if (!c.is_zero()) {
        p.c_.resize(static_cast<std::size_t>(power), Scalar::zero_like(c));
        p.c_.push_back(std::move(c));
    }
    return p;
}

Poly Poly::from_coeffs(std::vector<Scalar> coeffs, char var) {
    if (coeffs.empty()) throw DomainError("Poly: from_coeffs needs at least one coefficient");
    Field f = coeffs.front().field();
    for (const Scalar& c : coeffs)
        if (c.field() != f)
            throw FieldMismatchError("Poly: mixed coefficient fields");
    Poly p(f, var);
    p.c_ = std::move(coeffs);
    p.trim();
    return p;
}

Scalar Poly::coeff(int j) const {
    if (j < 0) throw DomainError("Poly: negative coefficient index");
    if (j > degree()) {
        if (!c_.empty()) return Scalar::zero_like(c_.front());
        return field_ == Field::rational ? Scalar(Rational(0)) : Scalar(Real(0.0));
    }
    return c_[static_cast<std::size_t>(j)];
}

const Scalar& Poly::leading() const {
    if (c_.empty()) throw DomainError("Poly: zero polynomial has no leading coefficient");
    return c_.back();
}

Scalar Poly::eval(const Scalar& x) const {
    if (x.field() != field_)
        throw FieldMismatchError("Poly: evaluation point field differs from coefficients");
    if (c_.empty()) return Scalar::zero_like(x);
    // Horner, highest power first.
    Scalar acc = c_.back();
    for (std::size_t j = c_.size() - 1; j-- > 0;)
        acc = acc * x + c_[j];
    return acc;
}

Poly Poly::derivative() const {
    Poly d(field_, var_);
    for (std::size_t j = 1; j < c_.size(); ++j) {
        Scalar k = field_ == Field::rational
                       ? Scalar(Rational(static_cast<long>(j)))
                       : Scalar(Real(static_cast<double>(j), c_[j].is_rational() ? kDefaultPrec : c_[j].real().prec()));
        d.c_.push_back(c_[j] * k);
    }
    d.trim();
    return d;
}

Poly Poly::operator-() const {
    Poly p(field_, var_);
    p.c_.reserve(c_.size());
    for (const Scalar& c : c_) p.c_.push_back(-c);
    return p;
}

void Poly::require_compatible(const Poly& a, const Poly& b, const char* op) {
    if (a.field_ != b.field_)
        throw FieldMismatchError(std::string("Poly: '") + op + "' mixes coefficient fields");
    if (a.var_ != b.var_)
        throw DomainError(std::string("Poly: '") + op + "' mixes indeterminates '" +
                          a.var_ + "' and '" + b.var_ + "'");
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly::require_compatible(a, b, "+");
    Poly r(a.field_, a.var_);
    const std::size_t n = std::max(a.c_.size(), b.c_.size());
    r.c_.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        // Copy one-sided coefficients verbatim so a low-precision zero never
        // truncates the other operand.
        if (j >= a.c_.size()) r.c_.push_back(b.c_[j]);
        else if (j >= b.c_.size()) r.c_.push_back(a.c_[j]);
        else r.c_.push_back(a.c_[j] + b.c_[j]);
    }
    r.trim();
    return r;
}

Poly operator-(const Poly& a, const Poly& b) {
    Poly::require_compatible(a, b, "-");
    return a + (-b);
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly::require_compatible(a, b, "*");
    Poly r(a.field_, a.var_);
    if (a.is_zero() || b.is_zero()) return r;
    const std::size_t na = a.c_.size(), nb = b.c_.size();
    r.c_.assign(na + nb - 1, Scalar::zero_like(a.c_.front() * b.c_.front()));
    for (std::size_t i = 0; i < na; ++i) {
        if (a.c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < nb; ++j)
            r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
    }
    r.trim();
    return r;
}

Poly Poly::scaled(const Scalar& s) const {
    if (s.field() != field_)
        throw FieldMismatchError("Poly: scale factor field differs from coefficients");
    Poly r(field_, var_);
    if (s.is_zero()) return r;
    r.c_.reserve(c_.size());
    for (const Scalar& c : c_) r.c_.push_back(c * s);
    r.trim();
    return r;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& a, const Poly& b) {
    require_compatible(a, b, "divmod");
    if (b.is_zero()) throw DomainError("Poly: division by zero polynomial");
    Poly q(a.field_, a.var_);
    Poly rem = a;
    const int db = b.degree();
    if (rem.degree() >= db)
        q.c_.assign(static_cast<std::size_t>(rem.degree() - db) + 1,
                    Scalar::zero_like(b.leading()));
    while (!rem.is_zero() && rem.degree() >= db) {
        const int shift = rem.degree() - db;
        Scalar f = rem.leading() / b.leading();
        q.c_[static_cast<std::size_t>(shift)] = f;
        // rem -= f * x^shift * b
        for (int j = 0; j <= db; ++j) {
            std::size_t idx = static_cast<std::size_t>(j + shift);
            rem.c_[idx] = rem.c_[idx] - f * b.c_[static_cast<std::size_t>(j)];
        }
        rem.c_.pop_back(); // leading term cancels exactly by construction
        rem.trim();
    }
    q.trim();
    return {std::move(q), std::move(rem)};
}

Poly Poly::div_exact(const Poly& a, const Poly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero())
        throw DomainError("Poly: div_exact with nonzero remainder (degree " +
                          std::to_string(r.degree()) + ")");
    return q;
}

Poly Poly::with_var(char var) const {
    Poly p(*this);
    p.var_ = var;
    return p;
}

Poly Poly::to_real(mpfr_prec_t prec) const {
    Poly p(Field::real, var_);
    p.c_.reserve(c_.size());
    for (const Scalar& c : c_)
        p.c_.push_back(c.is_rational() ? Scalar(Real(c.rat(), prec)) : Scalar(Real(c.real())));
    p.trim();
    return p;
}

std::string Poly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int j = degree(); j >= 0; --j) {
        const Scalar& c = c_[static_cast<std::size_t>(j)];
        if (c.is_zero()) continue;
        if (!first) os << " + ";
        os << "(" << c.str() << ")";
        if (j > 0) os << "*" << var_ << "^" << j;
        first = false;
    }
    return os.str();
}

void Poly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly primitive_part(const Poly& p) {
    if (p.field() != Field::rational)
        throw FieldMismatchError("primitive_part: rational coefficients required");
    if (p.is_zero()) return p;
    // Clear denominators, then divide by the gcd of the numerators; flip the
    // sign so the leading coefficient is positive.
    Rational den_lcm(1);
    for (const Scalar& c : p.coeffs())
        if (!c.is_zero()) den_lcm = rational_denominator_lcm(den_lcm, c.rat());
    Rational num_gcd(0);
    std::vector<Scalar> scaled;
    scaled.reserve(p.coeffs().size());
    for (const Scalar& c : p.coeffs()) {
        Rational v = c.rat() * den_lcm;
        num_gcd = rational_numerator_gcd(num_gcd, v);
        scaled.emplace_back(std::move(v));
    }
    if (num_gcd.is_zero()) num_gcd = Rational(1);
    for (Scalar& c : scaled) c = Scalar(c.rat() / num_gcd);
    if (scaled.back().sign() < 0)
        for (Scalar& c : scaled) c = -c;
    return Poly::from_coeffs(std::move(scaled), p.var());
}

Poly poly_gcd(Poly a, Poly b) {
    if (a.field() != Field::rational || b.field() != Field::rational)
        throw FieldMismatchError("poly_gcd: rational coefficients required");
    if (a.is_zero()) return b.is_zero() ? b : primitive_part(b);
    if (b.is_zero()) return primitive_part(a);
    a = primitive_part(a);
    b = primitive_part(b);
    // Primitive Euclidean remainder sequence: normalize after every step so
    // coefficient growth stays polynomial at these degrees.
    while (!b.is_zero()) {
        Poly r = Poly::divmod(a, b).second;
        a = std::move(b);
        b = r.is_zero() ? std::move(r) : primitive_part(r);
    }
    return a;
}

} // namespace ctcoul
