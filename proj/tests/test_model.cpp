#include <doctest.h>

#include "ctcoul/errors.hpp"
#include "ctcoul/frobenius.hpp"
#include "ctcoul/model.hpp"

using namespace ctcoul;

TEST_SUITE("model") {

TEST_CASE("truncation-length units: a and b scale with m*r0/hbar^2") {
    CaseIReduction unit_consts =
        to_case_i(PhysicalParams(Rational(1), Rational(-3), Rational(1), Rational(1), Rational(1)));
    CHECK(unit_consts.params.a == Rational(1));
    CHECK(unit_consts.params.b == Rational(-3));
    CHECK(unit_consts.params.l == 0);
    CHECK(unit_consts.energy_unit == Rational(1));

    CaseIReduction stretched = to_case_i(
        PhysicalParams(Rational(3, 2), Rational(1, 2), Rational(2), Rational(1), Rational(1)), 1);
    CHECK(stretched.params.a == Rational(3));
    CHECK(stretched.params.b == Rational(1));
    CHECK(stretched.params.l == 1);
    CHECK(stretched.energy_unit == Rational(1, 4)); // hbar^2/(m r0^2)

    CaseIReduction heavy =
        to_case_i(PhysicalParams(Rational(1), Rational(1), Rational(1), Rational(2), Rational(1)));
    CHECK(heavy.params.a == Rational(2));
    CHECK(heavy.params.b == Rational(2));
    CHECK(heavy.energy_unit == Rational(1, 2));
}

TEST_CASE("Coulomb-strength units: coupling ratio and scaled truncation length") {
    CaseIIReduction r =
        to_case_ii(PhysicalParams(Rational(2), Rational(1), Rational(1), Rational(1), Rational(1)));
    CHECK(r.coupling == Rational(1, 2));
    CHECK(r.scaled_r0 == Rational(2));
    CHECK(r.energy_unit == Rational(4)); // m V1^2 / hbar^2

    CaseIIReduction coulomb =
        to_case_ii(PhysicalParams(Rational(2), Rational(0), Rational(1), Rational(1), Rational(1)));
    CHECK(coulomb.coupling == Rational(0)); // second term absent entirely

    CaseIIReduction far =
        to_case_ii(PhysicalParams(Rational(1), Rational(1), Rational(3), Rational(1), Rational(1)));
    CHECK(far.scaled_r0 == Rational(3));
}

TEST_CASE("second-strength units: roles swapped, degenerate when V2 = 0") {
    CaseIIIReduction r = to_case_iii(
        PhysicalParams(Rational(2), Rational(1), Rational(1), Rational(1), Rational(1)));
    CHECK(r.ratio == Rational(2));
    CHECK(r.scaled_r0 == Rational(1));
    CHECK(r.energy_unit == Rational(1)); // m V2^2 / hbar^2

    CHECK_THROWS_AS(to_case_iii(PhysicalParams(Rational(2), Rational(0), Rational(1), Rational(1),
                                               Rational(1))),
                    DomainError);

    CaseIIIReduction same = to_case_iii(
        PhysicalParams(Rational(1), Rational(1), Rational(1), Rational(1), Rational(1)));
    CHECK(same.ratio == Rational(1));
}

TEST_CASE("physical parameters validate positivity of V1, r0, m, hbar") {
    CHECK_THROWS_AS(PhysicalParams(Rational(0), Rational(1), Rational(1), Rational(1), Rational(1)),
                    DomainError);
    CHECK_THROWS_AS(PhysicalParams(Rational(1), Rational(1), Rational(-2), Rational(1), Rational(1)),
                    DomainError);
    CHECK_THROWS_AS(PhysicalParams(Rational(1), Rational(1), Rational(1), Rational(0), Rational(1)),
                    DomainError);
    CHECK_THROWS_AS(PhysicalParams(Rational(1), Rational(1), Rational(1), Rational(1), Rational(0)),
                    DomainError);
    // V2 may take any sign.
    CHECK_NOTHROW(PhysicalParams(Rational(1), Rational(-5), Rational(1), Rational(1), Rational(1)));
}

TEST_CASE("the infinitely-many-bound-states regime is flagged by V1 > V2") {
    CHECK(PhysicalParams(Rational(2), Rational(1), Rational(1), Rational(1), Rational(1))
              .bound_state_rich());
    CHECK_FALSE(PhysicalParams(Rational(1), Rational(1), Rational(1), Rational(1), Rational(1))
                    .bound_state_rich());
    CHECK_FALSE(PhysicalParams(Rational(1), Rational(2), Rational(1), Rational(1), Rational(1))
                    .bound_state_rich());
}

TEST_CASE("dimensionless parameters validate a > 0 and l >= 0") {
    CHECK_THROWS_AS(DimensionlessParams(Rational(0), Rational(0), 0), DomainError);
    CHECK_THROWS_AS(DimensionlessParams(Rational(-1), Rational(0), 0), DomainError);
    CHECK_THROWS_AS(DimensionlessParams(Rational(1), Rational(0), -1), DomainError);
    CHECK_NOTHROW(DimensionlessParams(Rational(1), Rational(5), 0)); // b > a is allowed here
}

TEST_CASE("effective radial potential: centrifugal + Coulomb + truncated term") {
    DimensionlessParams coulomb(Rational(1), Rational(0), 0);
    CHECK(effective_potential(1.0, coulomb) == doctest::Approx(-1.0));

    DimensionlessParams attr(Rational(1), Rational(-3), 0);
    CHECK(effective_potential(1.0, attr) == doctest::Approx(-2.5));

    DimensionlessParams with_l(Rational(1), Rational(-3), 1);
    CHECK(effective_potential(2.0, with_l) == doctest::Approx(-1.25));

    CHECK_THROWS_AS(effective_potential(0.0, coulomb), DomainError);
    CHECK_THROWS_AS(effective_potential(-1.0, coulomb), DomainError);
}

TEST_CASE("effective potential decays to zero and is negative far out when b < a") {
    DimensionlessParams p(Rational(1), Rational(-2), 2);
    CHECK(std::abs(effective_potential(1e6, p)) < 1e-5);
    for (double r : {20.0, 50.0, 200.0}) CHECK(effective_potential(r, p) < 0.0);
}

TEST_CASE("the two unit reductions assign one physical energy to the same system") {
    // Pure-Coulomb closed form makes the round trip exact: the ground
    // state in truncation-length units times that energy unit must equal
    // the Coulomb-strength-unit ground state times its energy unit.
    PhysicalParams p(Rational(7), Rational(0), Rational(5), Rational(3), Rational(2));
    CaseIReduction ci = to_case_i(p);
    CaseIIReduction cii = to_case_ii(p);
    for (int nu = 0; nu <= 2; ++nu) {
        Rational from_case_i = coulomb_energy(nu, 0, ci.params.a) * ci.energy_unit;
        // In Coulomb-strength units the attractive coupling is exactly 1.
        Rational from_case_ii = coulomb_energy(nu, 0, Rational(1)) * cii.energy_unit;
        CHECK(from_case_i == from_case_ii);
    }

    // With the truncated term present, choose r0*m*V1 = hbar^2 so both
    // reductions describe the identical dimensionless operator.
    PhysicalParams t(Rational(1, 2), Rational(-3, 2), Rational(2), Rational(1), Rational(1));
    CaseIReduction ti = to_case_i(t);
    CaseIIReduction tii = to_case_ii(t);
    CHECK(ti.params.a == Rational(1));
    CHECK(ti.params.b == Rational(-3));
    CHECK(tii.scaled_r0 == Rational(1));
    CHECK(tii.coupling == Rational(-3));
    CHECK(ti.energy_unit == tii.energy_unit);
}

} // TEST_SUITE("model")
