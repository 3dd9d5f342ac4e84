#pragma once

#include "ctcoul/scalar.hpp"

namespace ctcoul {

// Raw physical inputs: V(x) = -V1/x + V2/(x + r0) for a particle of mass m.
// Kept exact so the unit conversions introduce no rounding of their own.
struct PhysicalParams {
    Rational V1, V2, r0, m, hbar;

    PhysicalParams(Rational V1_, Rational V2_, Rational r0_, Rational m_, Rational hbar_);

    // The regime with infinitely many bound states (attractive net Coulomb
    // tail dominates the truncated repulsion).
    bool bound_state_rich() const { return V1 > V2; }
};

// Dimensionless couplings of the reduced radial problem
//   -u''/2 + [l(l+1)/(2r^2) - a/r + b/(r+1)] u = E u.
struct DimensionlessParams {
    Rational a; // > 0
    Rational b; // any sign; b > 0 simply has no conditional solutions
    int l;      // >= 0

    DimensionlessParams(Rational a_, Rational b_, int l_);
};

// Unit of length r0: a = m r0 V1 / hbar^2, b = m r0 V2 / hbar^2,
// energies in hbar^2/(m r0^2).
struct CaseIReduction {
    DimensionlessParams params;
    Rational energy_unit;
};
CaseIReduction to_case_i(const PhysicalParams& p, int l = 0);

// Unit of length hbar^2/(m V1): couplings (V2/V1, scaled r0), energies in
// m V1^2 / hbar^2.
struct CaseIIReduction {
    Rational coupling;  // V2/V1
    Rational scaled_r0; // r0 m V1 / hbar^2
    Rational energy_unit;
};
CaseIIReduction to_case_ii(const PhysicalParams& p);

// Unit of length hbar^2/(m V2), roles of V1 and V2 swapped. V2 = 0 is a
// DomainError (the unit of length degenerates).
struct CaseIIIReduction {
    Rational ratio;     // V1/V2
    Rational scaled_r0; // r0 m V2 / hbar^2
    Rational energy_unit;
};
CaseIIIReduction to_case_iii(const PhysicalParams& p);

// l(l+1)/(2 r^2) - a/r + b/(r+1); r must be positive.
double effective_potential(double r, const DimensionlessParams& params);

} // namespace ctcoul
