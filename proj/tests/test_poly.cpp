#include <doctest.h>

#include <utility>
#include <vector>

#include "ctcoul/errors.hpp"
#include "ctcoul/poly.hpp"

using namespace ctcoul;

namespace {

Poly rat_poly(std::vector<Rational> cs, char var = 'r') {
    std::vector<Scalar> coeffs;
    for (Rational& c : cs) coeffs.emplace_back(std::move(c));
    return Poly::from_coeffs(std::move(coeffs), var);
}

} // namespace

TEST_SUITE("poly") {

TEST_CASE("product of conjugate linear factors collapses the cross terms") {
    Poly one_plus_r = rat_poly({Rational(1), Rational(1)});
    Poly one_minus_r = rat_poly({Rational(1), Rational(-1)});
    Poly prod = one_plus_r * one_minus_r;
    CHECK(prod.degree() == 2);
    CHECK(prod.coeff(0).rat() == Rational(1));
    CHECK(prod.coeff(1).rat() == Rational(0));
    CHECK(prod.coeff(2).rat() == Rational(-1));
}

TEST_CASE("cancelling addition trims trailing zeros down to the true degree") {
    Poly p = rat_poly({Rational(1), Rational(-1, 2)});
    Poly q = rat_poly({Rational(0), Rational(1, 2)});
    Poly sum = p + q;
    CHECK(sum.degree() == 0);
    CHECK(sum.coeff(0).rat() == Rational(1));
    // Subtracting a polynomial from itself yields the canonical zero.
    Poly z = p - p;
    CHECK(z.is_zero());
    CHECK(z.degree() == -1);
}

TEST_CASE("scaling clears denominators: 27*(1 - 2r/3 + 2r^2/27)") {
    Poly p = rat_poly({Rational(1), Rational(-2, 3), Rational(2, 27)});
    Poly s = p.scaled(Scalar(Rational(27)));
    CHECK(s.coeff(0).rat() == Rational(27));
    CHECK(s.coeff(1).rat() == Rational(-18));
    CHECK(s.coeff(2).rat() == Rational(2));
}

TEST_CASE("evaluation is exact Horner over the rationals") {
    Poly one_plus_r = rat_poly({Rational(1), Rational(1)});
    CHECK(one_plus_r.eval(Scalar(Rational(0))).rat() == Rational(1));
    CHECK(one_plus_r.eval(Scalar(Rational(3))).rat() == Rational(4));
    Poly p = rat_poly({Rational(1), Rational(-1, 2)});
    CHECK(p.eval(Scalar(Rational(2))).is_zero());
    CHECK(p.eval(Scalar(Rational(1, 3))).rat() == Rational(5, 6));
}

TEST_CASE("coefficient access beyond the degree returns zero of the field") {
    Poly p = rat_poly({Rational(2), Rational(5)});
    CHECK(p.coeff(7).is_rational());
    CHECK(p.coeff(7).is_zero());
    CHECK(p.leading().rat() == Rational(5));
}

TEST_CASE("constant and monomial constructors normalize") {
    CHECK(Poly::constant(Scalar(Rational(0)), 'r').is_zero());
    Poly m = Poly::monomial(Scalar(Rational(3)), 4, 'b');
    CHECK(m.degree() == 4);
    CHECK(m.coeff(4).rat() == Rational(3));
    CHECK(m.coeff(2).is_zero());
    CHECK(m.var() == 'b');
}

TEST_CASE("derivative follows the power rule") {
    Poly p = rat_poly({Rational(7), Rational(-3), Rational(0), Rational(2)});
    Poly dp = p.derivative();
    CHECK(dp.degree() == 2);
    CHECK(dp.coeff(0).rat() == Rational(-3));
    CHECK(dp.coeff(1).rat() == Rational(0));
    CHECK(dp.coeff(2).rat() == Rational(6));
    CHECK(Poly::constant(Scalar(Rational(5)), 'r').derivative().is_zero());
}

TEST_CASE("divmod satisfies a = q*b + r with deg r < deg b") {
    Poly a = rat_poly({Rational(-6), Rational(1), Rational(4), Rational(2)});
    Poly b = rat_poly({Rational(1), Rational(2)});
    auto [q, r] = Poly::divmod(a, b);
    CHECK((q * b + r - a).is_zero());
    CHECK(r.degree() < b.degree());
    CHECK_THROWS_AS(Poly::divmod(a, Poly(Field::rational, 'r')), DomainError);
}

TEST_CASE("exact division succeeds on factors and refuses a remainder") {
    Poly f = rat_poly({Rational(1), Rational(1)});
    Poly g = rat_poly({Rational(1), Rational(-1)});
    Poly prod = f * g;
    Poly back = Poly::div_exact(prod, f);
    CHECK((back - g).is_zero());
    Poly with_rem = prod + Poly::constant(Scalar(Rational(1)), 'r');
    CHECK_THROWS_AS(Poly::div_exact(with_rem, f), DomainError);
}

TEST_CASE("arithmetic refuses mismatched indeterminates and fields") {
    Poly in_r = rat_poly({Rational(1), Rational(1)}, 'r');
    Poly in_b = rat_poly({Rational(1), Rational(1)}, 'b');
    CHECK_THROWS_AS(in_r + in_b, DomainError);
    Poly real_p = in_r.to_real(128);
    CHECK_THROWS_AS(in_r * real_p, FieldMismatchError);
    // Relabeling makes the sum legal again.
    CHECK((in_r + in_b.with_var('r')).coeff(1).rat() == Rational(2));
}

TEST_CASE("to_real keeps coefficients at the requested precision") {
    Poly p = rat_poly({Rational(1, 3), Rational(-2)});
    Poly q = p.to_real(100);
    CHECK(q.field() == Field::real);
    CHECK(q.coeff(0).real().prec() == 100);
    CHECK(q.eval(Scalar(Real(0.0, 100))).to_double() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("primitive_part scales to coprime integer coefficients, positive leading") {
    Poly p = rat_poly({Rational(0), Rational(-4, 6), Rational(-2, 3)});
    Poly pp = primitive_part(p);
    CHECK(pp.coeff(0).rat() == Rational(0));
    CHECK(pp.coeff(1).rat() == Rational(1));
    CHECK(pp.coeff(2).rat() == Rational(1));

    // Heterogeneous denominators: the content is assembled across all
    // coefficients, not taken from any single one.
    Poly q = rat_poly({Rational(1, 2), Rational(1, 3)});
    Poly qq = primitive_part(q);
    CHECK(qq.coeff(0).rat() == Rational(3));
    CHECK(qq.coeff(1).rat() == Rational(2));

    // Denominator lcm 36 scales to {30, 0, -40, 45}; content gcd 5 reduces.
    Poly mixed = rat_poly({Rational(5, 6), Rational(0), Rational(-10, 9), Rational(5, 4)});
    Poly mm = primitive_part(mixed);
    for (int j = 0; j <= mm.degree(); ++j) CHECK(mm.coeff(j).rat().is_integer());
    CHECK(mm.coeff(0).rat() == Rational(6));
    CHECK(mm.coeff(2).rat() == Rational(-8));
    CHECK(mm.coeff(3).rat() == Rational(9));
    CHECK(mm.leading().rat().sign() > 0);
}

TEST_CASE("poly_gcd recovers the shared factor") {
    Poly common = rat_poly({Rational(-3), Rational(1)});           // r - 3
    Poly a = common * rat_poly({Rational(1), Rational(1)});        // (r-3)(r+1)
    Poly b = common * rat_poly({Rational(5), Rational(0), Rational(1)}); // (r-3)(r^2+5)
    Poly g = poly_gcd(a, b);
    CHECK(g.degree() == 1);
    CHECK(Poly::div_exact(g, common).degree() == 0);
    // Coprime inputs give a constant gcd.
    CHECK(poly_gcd(rat_poly({Rational(1), Rational(1)}),
                   rat_poly({Rational(2), Rational(1)}))
              .degree() == 0);
}

TEST_CASE("string form names the indeterminate for diagnostics") {
    Poly p = rat_poly({Rational(1), Rational(0), Rational(-1, 2)}, 'E');
    std::string s = p.str();
    CHECK(s.find('E') != std::string::npos);
}

} // TEST_SUITE("poly")
