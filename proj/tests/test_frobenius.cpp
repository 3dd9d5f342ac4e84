#include <doctest.h>

#include <vector>

#include "ctcoul/errors.hpp"
#include "ctcoul/frobenius.hpp"
#include "ctcoul/roots.hpp"

using namespace ctcoul;

namespace {

RecurrenceContext rat_ctx(Rational a, Rational b, Rational alpha, int l) {
    return RecurrenceContext(Scalar(a), Scalar(b), Scalar(alpha), l);
}

// The closed form the series must terminate with: alpha = (a-b)/(n+l+1).
Rational terminating_alpha(int n, int l, const Rational& a, const Rational& b) {
    return (a - b) / Rational(n + l + 1);
}

} // namespace

TEST_SUITE("frobenius") {

TEST_CASE("recurrence coefficients: explicit A_0 and the B_j structure") {
    // a=1, b=0, alpha=1/2 (one-node Coulomb state): A_0 = -[2 - 2 + 2]/6 = -1/3.
    auto [A0, B0] = recurrence_coeffs(0, rat_ctx(Rational(1), Rational(0), Rational(1, 2), 0));
    CHECK(A0.rat() == Rational(-1, 3));
    // With alpha at its terminating value, B_0 = -2(a-b)n / [6(n+l+1)] at l=0.
    CHECK(B0.rat() == Rational(-1, 6)); // n=1: -2*1*1/(6*2)

    // n=0 substitution makes B_0 vanish identically.
    for (long bnum : {0L, -3L, -7L}) {
        Rational b(bnum);
        Rational alpha = terminating_alpha(0, 0, Rational(2), b);
        auto [A, B] = recurrence_coeffs(0, rat_ctx(Rational(2), b, alpha, 0));
        CHECK(B.is_zero());
    }

    // The l=0 closed form for B_0 across several (a, b, n).
    struct Probe { Rational a, b; int n; };
    for (const Probe& p : {Probe{Rational(1), Rational(-3), 1}, Probe{Rational(2), Rational(-4), 2},
                           Probe{Rational(1, 2), Rational(-1), 3}}) {
        Rational alpha = terminating_alpha(p.n, 0, p.a, p.b);
        auto [A, B] = recurrence_coeffs(0, rat_ctx(p.a, p.b, alpha, 0));
        Rational want = Rational(2) * (p.a - p.b) * Rational(-p.n) /
                        (Rational(6) * Rational(p.n + 1));
        CHECK(B.rat() == want);
    }
}

TEST_CASE("first coefficient: c_1 = [alpha(l+1) - a]/(l+1) under c_0 = 1") {
    // Degree-0 termination: c_1 = -b/(l+1).
    for (int l : {0, 1, 2}) {
        Rational a(1), b(-3);
        Rational alpha = terminating_alpha(0, l, a, b);
        Scalar c1 = first_coefficient(rat_ctx(a, b, alpha, l));
        CHECK(c1.rat() == -b / Rational(l + 1));
    }
    // At the nodeless degree-1 coupling the factor is exactly 1 + r.
    CHECK(first_coefficient(rat_ctx(Rational(1), Rational(-3), Rational(2), 0)).rat() ==
          Rational(1));
    CHECK(first_coefficient(rat_ctx(Rational(2), Rational(-4), Rational(3), 0)).rat() ==
          Rational(1));
    // Pure Coulomb degree 1 at l=0: c_1 = -a/2.
    for (long anum : {1L, 2L, 5L}) {
        Rational a(anum);
        Scalar c1 = first_coefficient(rat_ctx(a, Rational(0), a / Rational(2), 0));
        CHECK(c1.rat() == -a / Rational(2));
    }
}

TEST_CASE("series coefficients reproduce the known terminating polynomials") {
    // a=1, b=-3, alpha=2: factor 1 + r, all later coefficients zero.
    std::vector<Scalar> c = series_coefficients(rat_ctx(Rational(1), Rational(-3), Rational(2), 0), 5);
    REQUIRE(c.size() == 6);
    CHECK(c[0].rat() == Rational(1));
    CHECK(c[1].rat() == Rational(1));
    for (int j = 2; j <= 5; ++j) CHECK(c[static_cast<std::size_t>(j)].is_zero());

    // Coulomb ground state: the factor is the constant 1.
    c = series_coefficients(rat_ctx(Rational(1), Rational(0), Rational(1), 0), 4);
    CHECK(c[0].rat() == Rational(1));
    for (int j = 1; j <= 4; ++j) CHECK(c[static_cast<std::size_t>(j)].is_zero());

    // Two-node Coulomb state at a=1: 1 - 2r/3 + 2r^2/27.
    c = series_coefficients(rat_ctx(Rational(1), Rational(0), Rational(1, 3), 0), 4);
    CHECK(c[0].rat() == Rational(1));
    CHECK(c[1].rat() == Rational(-2, 3));
    CHECK(c[2].rat() == Rational(2, 27));
    CHECK(c[3].is_zero());
    CHECK(c[4].is_zero());
}

TEST_CASE("critical alpha is (a-b)/(n+l+1) and needs a > b") {
    CHECK(critical_alpha(1, 0, Scalar(Rational(1)), Scalar(Rational(-3))).rat() == Rational(2));
    CHECK(critical_alpha(0, 0, Scalar(Rational(5, 2)), Scalar(Rational(0))).rat() ==
          Rational(5, 2));
    CHECK(critical_alpha(2, 1, Scalar(Rational(2)), Scalar(Rational(-2))).rat() == Rational(1));
    CHECK_THROWS_AS(critical_alpha(1, 0, Scalar(Rational(1)), Scalar(Rational(1))), DomainError);
    CHECK_THROWS_AS(critical_alpha(0, 0, Scalar(Rational(1)), Scalar(Rational(2))), DomainError);
}

TEST_CASE("termination polynomial: degree n+1 in b with constant term zero") {
    // n=0: proportional to b.
    Poly t0 = termination_polynomial(0, 0, Rational(1));
    CHECK(t0.degree() == 1);
    CHECK(t0.coeff(0).is_zero());

    // n=1: proportional to b * [a + (b+l+2)(l+1)].
    for (int l : {0, 1, 2}) {
        const Rational a(2);
        Poly t1 = termination_polynomial(1, l, a);
        CHECK(t1.degree() == 2);
        CHECK(t1.coeff(0).is_zero());
        Poly want = Poly::monomial(Scalar(Rational(1)), 1, 'b') *
                    Poly::from_coeffs({Scalar(a + Rational((l + 2) * (l + 1))),
                                       Scalar(Rational(l + 1))},
                                      'b');
        // Proportionality: cross-multiply leading coefficients.
        Poly diff = t1.scaled(want.leading()) - want.scaled(t1.leading());
        CHECK(diff.is_zero());
    }

    // n=2: cubic with b=0 among the roots.
    Poly t2 = termination_polynomial(2, 0, Rational(1));
    CHECK(t2.degree() == 3);
    CHECK(t2.coeff(0).is_zero());
    CHECK(t2.var() == 'b');
}

TEST_CASE("degree-1 sweep at a=1: couplings {0, -3}, nodeless solution at -3") {
    ConditionalSweep sweep = conditional_solutions(1, 0, Rational(1));
    REQUIRE(sweep.solutions.size() == 2);
    CHECK(sweep.nonreal_root_count == 0);
    CHECK(sweep.nonbound_root_count == 0);

    const TerminationSolution& at_zero = sweep.solutions[0]; // descending b: 0 first
    CHECK(at_zero.i == 1);
    CHECK(at_zero.b_root.rat() == Rational(0));
    CHECK(at_zero.energy.rat() == Rational(-1, 8));
    CHECK(at_zero.nu == 1);
    CHECK_FALSE(at_zero.b_interval.has_value());

    const TerminationSolution& deep = sweep.solutions[1];
    CHECK(deep.i == 2);
    CHECK(deep.b_root.rat() == Rational(-3));
    CHECK(deep.alpha.rat() == Rational(2));
    CHECK(deep.energy.rat() == Rational(-2));
    CHECK(deep.nu == 0);
    CHECK(deep.multiplicity == 1);
    REQUIRE(deep.poly.degree() == 1);
    CHECK(deep.poly.coeff(0).rat() == Rational(1));
    CHECK(deep.poly.coeff(1).rat() == Rational(1)); // 1 + r, no positive root
}

TEST_CASE("degree-1 sweeps: a=2 gives E=-9/2 at b=-4; l=1, a=1 gives E=-9/8 at b=-7/2") {
    ConditionalSweep a2 = conditional_solutions(1, 0, Rational(2));
    REQUIRE(a2.solutions.size() == 2);
    CHECK(a2.solutions[1].b_root.rat() == Rational(-4));
    CHECK(a2.solutions[1].energy.rat() == Rational(-9, 2));
    CHECK(a2.solutions[1].nu == 0);

    ConditionalSweep l1 = conditional_solutions(1, 1, Rational(1));
    REQUIRE(l1.solutions.size() == 2);
    CHECK(l1.solutions[1].b_root.rat() == Rational(-7, 2));
    CHECK(l1.solutions[1].energy.rat() == Rational(-9, 8));
}

TEST_CASE("degree-0 sweep has only the vanishing coupling") {
    ConditionalSweep sweep = conditional_solutions(0, 0, Rational(1));
    REQUIRE(sweep.solutions.size() == 1);
    CHECK(sweep.solutions[0].b_root.rat() == Rational(0));
    CHECK(sweep.solutions[0].energy.rat() == Rational(-1, 2));
    CHECK(sweep.solutions[0].nu == 0);
    CHECK(sweep.solutions[0].poly.degree() == 0);
}

TEST_CASE("vanishing coupling reproduces the pure-Coulomb level with nu = n") {
    for (int n = 0; n <= 4; ++n)
        for (int l = 0; l <= 2; ++l) {
            ConditionalSweep sweep = conditional_solutions(n, l, Rational(2));
            REQUIRE(!sweep.solutions.empty());
            const TerminationSolution& s = sweep.solutions[0];
            CHECK(s.b_root.rat() == Rational(0));
            CHECK(s.energy.rat() == coulomb_energy(n, l, Rational(2)));
            CHECK(s.nu == n);
        }
}

TEST_CASE("node counts descend with the root index: nu = n+1-i") {
    ConditionalSweep sweep = conditional_solutions(2, 0, Rational(1));
    REQUIRE(sweep.solutions.size() == 3);
    for (const TerminationSolution& s : sweep.solutions) {
        CHECK(s.nu == s.n + 1 - s.i);
        CHECK(s.nu >= 0);
        CHECK(s.nu <= s.n);
    }
    // The two non-zero couplings of the cubic are irrational here.
    CHECK(sweep.solutions[1].b_interval.has_value());
    CHECK(sweep.solutions[2].b_interval.has_value());
}

TEST_CASE("every solution satisfies its own construction invariants") {
    for (int n = 0; n <= 3; ++n)
        for (int l = 0; l <= 1; ++l)
            for (long anum : {1L, 2L}) {
                ConditionalSweep sweep = conditional_solutions(n, l, Rational(anum));
                int accounted = sweep.nonreal_root_count + sweep.nonbound_root_count;
                for (const TerminationSolution& s : sweep.solutions)
                    accounted += s.multiplicity;
                CHECK(accounted == n + 1);
                for (const TerminationSolution& s : sweep.solutions) {
                    CHECK(s.poly.degree() == s.n);
                    Scalar c0 = s.poly.coeff(0);
                    CHECK((c0 - Scalar::one_like(c0)).is_zero());
                    CHECK(s.alpha.sign() > 0);
                    CHECK(s.b_root.sign() <= 0);
                    CHECK(s.b_interval.has_value() != s.b_root.is_rational());
                    // E = -alpha^2/2 in whichever field the root lives.
                    Scalar two = s.alpha.is_rational()
                                     ? Scalar(Rational(2))
                                     : Scalar(Real(2.0, s.alpha.real().prec()));
                    Scalar resid = s.energy + s.alpha * s.alpha / two;
                    if (s.b_root.is_rational())
                        CHECK(resid.is_zero());
                    else
                        CHECK(resid.abs().to_double() < 1e-50);
                }
            }
}

TEST_CASE("running the recurrence two steps past n annihilates the tail") {
    for (int n = 0; n <= 3; ++n)
        for (int l = 0; l <= 1; ++l) {
            ConditionalSweep sweep = conditional_solutions(n, l, Rational(2));
            for (const TerminationSolution& s : sweep.solutions) {
                if (!s.b_root.is_rational()) continue; // exact field only
                RecurrenceContext ctx(s.a, s.b_root, s.alpha, l);
                std::vector<Scalar> c = series_coefficients(ctx, n + 2);
                CHECK(c[static_cast<std::size_t>(n + 1)].is_zero());
                CHECK(c[static_cast<std::size_t>(n + 2)].is_zero());
                // And the kept polynomial matches the recurrence output.
                for (int j = 0; j <= n; ++j)
                    CHECK(s.poly.coeff(j).rat() == c[static_cast<std::size_t>(j)].rat());
            }
        }
}

TEST_CASE("irrational couplings terminate too, to working precision") {
    ConditionalSweep sweep = conditional_solutions(2, 0, Rational(1), 192);
    REQUIRE(sweep.solutions.size() == 3);
    for (const TerminationSolution& s : sweep.solutions) {
        if (s.b_root.is_rational()) continue;
        RecurrenceContext ctx(Scalar(Real(Rational(1), 192)), s.b_root, s.alpha, 0);
        std::vector<Scalar> c = series_coefficients(ctx, s.n + 2);
        CHECK(c[static_cast<std::size_t>(s.n + 1)].abs().to_double() < 1e-40);
        CHECK(c[static_cast<std::size_t>(s.n + 2)].abs().to_double() < 1e-40);
    }
}

TEST_CASE("pure-Coulomb levels: -a^2/(2(nu+l+1)^2)") {
    CHECK(coulomb_energy(0, 0, Rational(1)) == Rational(-1, 2));
    CHECK(coulomb_energy(1, 0, Rational(1)) == Rational(-1, 8));
    CHECK(coulomb_energy(2, 1, Rational(2)) == Rational(-1, 8));
    CHECK(coulomb_energy(0, 2, Rational(1)) == Rational(-1, 18));
    CHECK(coulomb_energy(3, 0, Rational(1, 2)) == Rational(-1, 128));
}

} // TEST_SUITE("frobenius")
