#include <doctest.h>

#include <utility>

#include "ctcoul/errors.hpp"
#include "ctcoul/scalar.hpp"

using namespace ctcoul;

TEST_SUITE("scalar") {

TEST_CASE("rational parse accepts fractions, integers, and decimals exactly") {
    CHECK(Rational::parse("3/4") == Rational(3, 4));
    CHECK(Rational::parse("-7") == Rational(-7));
    CHECK(Rational::parse("0.1") == Rational(1, 10));        // exact, not binary-rounded
    CHECK(Rational::parse("-3.25e2") == Rational(-325));
    CHECK(Rational::parse("2.5e-1") == Rational(1, 4));
    CHECK_THROWS_AS(Rational::parse("not-a-number"), DomainError);
    CHECK_THROWS_AS(Rational::parse("1/0"), DomainError);
}

TEST_CASE("rational arithmetic is exact and canonical") {
    Rational x(1, 3), y(1, 6);
    CHECK(x + y == Rational(1, 2));
    CHECK(x - y == Rational(1, 6));
    CHECK(x * y == Rational(1, 18));
    CHECK(x / y == Rational(2));
    CHECK((Rational(2, 4)).str() == "1/2"); // canonical form
    CHECK(Rational(6, 3).str() == "2");     // integers print without denominator
    CHECK_THROWS_AS(x / Rational(0), DomainError);
}

TEST_CASE("rational helpers: sign, abs, floor, integrality") {
    CHECK(Rational(-3, 7).sign() == -1);
    CHECK(Rational(0).is_zero());
    CHECK(Rational(-3, 7).abs() == Rational(3, 7));
    CHECK(Rational(7, 2).floor() == Rational(3));
    CHECK(Rational(-7, 2).floor() == Rational(-4)); // floor, not truncation
    CHECK(Rational(4, 2).is_integer());
    CHECK_FALSE(Rational(1, 3).is_integer());
}

TEST_CASE("rational ordering and value moves") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-2) < Rational(-1, 2));
    Rational a(5, 9);
    Rational b = std::move(a);
    CHECK(b == Rational(5, 9));
}

TEST_CASE("real carries its precision and rounds binary ops to the minimum") {
    Real lo(1.0, 96), hi(1.0, 256);
    CHECK(lo.prec() == 96);
    CHECK((lo + hi).prec() == 96);
    CHECK((hi * hi).prec() == 256);
    // Rational-to-real conversion honours the requested precision.
    Real third(Rational(1, 3), 128);
    CHECK(third.prec() == 128);
    CHECK(third.to_double() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("real sqrt and abs; negative sqrt is refused") {
    CHECK(Real(9.0).sqrt().to_double() == doctest::Approx(3.0));
    CHECK(Real(-2.5).abs().to_double() == doctest::Approx(2.5));
    CHECK_THROWS_AS(Real(-1.0).sqrt(), DomainError);
}

TEST_CASE("scalar arithmetic demands one field; mixing throws") {
    Scalar q{Rational(1, 2)};
    Scalar x{Real(0.5)};
    CHECK(q.is_rational());
    CHECK_FALSE(x.is_rational());
    CHECK_THROWS_AS(q + x, FieldMismatchError);
    CHECK_THROWS_AS(q * x, FieldMismatchError);
    CHECK_THROWS_AS((void)(q < x), FieldMismatchError);
    // Accessing the wrong alternative is refused, never reinterpreted.
    CHECK_THROWS_AS((void)q.real(), FieldMismatchError);
    CHECK_THROWS_AS((void)x.rat(), FieldMismatchError);
}

TEST_CASE("scalar same-field arithmetic matches the underlying field") {
    Scalar q{Rational(1, 3)};
    CHECK((q + q).rat() == Rational(2, 3));
    CHECK((-q).rat() == Rational(-1, 3));
    Scalar x{Real(2.0, 100)};
    CHECK((x * x).real().prec() == 100);
    CHECK((x - x).is_zero());
}

TEST_CASE("zero_like and one_like preserve field and precision") {
    Scalar q{Rational(7)};
    CHECK(Scalar::zero_like(q).is_rational());
    CHECK(Scalar::one_like(q).rat() == Rational(1));
    Scalar x{Real(7.0, 100)};
    CHECK(Scalar::zero_like(x).real().prec() == 100);
    CHECK(Scalar::one_like(x).real().prec() == 100);
    CHECK(Scalar::one_like(x).to_double() == 1.0);
}

TEST_CASE("denominator lcm and numerator gcd support coefficient clearing") {
    Rational lcm = rational_denominator_lcm(Rational(1), Rational(5, 6));
    lcm = rational_denominator_lcm(lcm, Rational(1, 4));
    CHECK(lcm == Rational(12));
    Rational gcd = rational_numerator_gcd(Rational(0), Rational(18));
    gcd = rational_numerator_gcd(gcd, Rational(-12));
    CHECK(gcd == Rational(6));
}

} // TEST_SUITE("scalar")
