#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ctcoul/poly.hpp"
#include "ctcoul/roots.hpp"

namespace ctcoul {

// Inputs of the three-term recurrence for the series factor p(r) in
// u(r) = e^{-alpha r} r^{l+1} p(r). All scalars must share one field.
struct RecurrenceContext {
    Scalar a, b, alpha;
    int l;

    RecurrenceContext(Scalar a_, Scalar b_, Scalar alpha_, int l_);
};

// One exactly-terminating solution: at coupling b_root the degree-n series
// truncates, giving energy E = -(a - b_root)^2 / (2 (n+l+1)^2) exactly.
struct TerminationSolution {
    int n = 0; // polynomial degree
    int i = 0; // 1-based root index under descending-b ordering
    int l = 0;
    Scalar a;
    Scalar b_root;                          // rational when the root is rational
    std::optional<RootInterval> b_interval; // isolating interval for irrational roots
    Scalar alpha;
    Scalar energy;
    Poly poly; // the polynomial factor in r, c_0 = 1, degree exactly n
    int nu = 0;           // nodes of u on (0, inf) = positive roots of poly
    int multiplicity = 1; // of b_root in the termination polynomial

    TerminationSolution() : poly(Field::rational, 'r') {}
};

// Full sweep at one (n, l, a): solutions ordered by descending b_root plus
// diagnostics that are never silently dropped.
struct ConditionalSweep {
    std::vector<TerminationSolution> solutions;
    int nonreal_root_count = 0;  // conjugate pairs count as 2
    int nonbound_root_count = 0; // real roots with b >= a (alpha <= 0), if any ever appear
};

// (A_j, B_j) of c_{j+2} = A_j c_{j+1} + B_j c_j.
std::pair<Scalar, Scalar> recurrence_coeffs(int j, const RecurrenceContext& ctx);

// c_1 under the normalization c_0 = 1 (from the lowest power of r).
Scalar first_coefficient(const RecurrenceContext& ctx);

// c_0 .. c_J.
std::vector<Scalar> series_coefficients(const RecurrenceContext& ctx, int J);

// alpha = (a - b)/(n + l + 1); a <= b has no normalizable terminating
// solution and is a DomainError.
Scalar critical_alpha(int n, int l, const Scalar& a, const Scalar& b);

// c_{n+1} as a polynomial in b (alpha eliminated), degree n+1, constant
// term exactly zero.
Poly termination_polynomial(int n, int l, const Rational& a);

// Every real root of the termination polynomial, with exact data where the
// root is rational and interval-refined reals (at `prec` bits) otherwise.
ConditionalSweep conditional_solutions(int n, int l, const Rational& a,
                                       mpfr_prec_t prec = kDefaultPrec);

// Pure-Coulomb level: -a^2 / (2 (nu + l + 1)^2).
Rational coulomb_energy(int nu, int l, const Rational& a);

} // namespace ctcoul
