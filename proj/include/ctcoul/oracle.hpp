#pragma once

#include <string>
#include <vector>

#include "ctcoul/rpm.hpp"
#include "ctcoul/scalar.hpp"

namespace ctcoul {

// Uniform radial mesh for the Dirichlet box [0, r_max]. Only the N interior
// nodes are stored; u(0) = u(r_max) = 0 by construction.
struct RadialGrid {
    double r_max;
    int N;
    RadialGrid(double r_max_, int n);
    double h() const { return r_max / (N + 1); }
    double r(int k) const { return h() * (k + 1); } // k = 0 .. N-1
};

// Interior point count giving a mesh width of at most 0.02 (and no fewer
// than 1999 points), so shallow wells with a far-out box stay resolved.
int default_points(double r_max);

// r_max = 40 / alpha_est with alpha_est = (a - b)/(count + l + 1): forty
// decay lengths of the slowest requested tail; default_points for the mesh.
RadialGrid default_grid(const Rational& a, const Rational& b, int l, int count);

struct NumericState {
    double energy = 0.0;
    std::vector<double> u; // interior samples; trapezoid-normalized
    int nodes = 0;
};

struct FdResult {
    std::vector<NumericState> states; // ascending energy
    std::string warning;              // nonempty when the grid holds fewer bound levels
};

// Second-order finite-difference discretization of the reduced radial
// equation, lowest `count` eigenpairs. Eigenvalues are Richardson-
// extrapolated over h and h/2; eigenvectors (and node counts) live on the
// caller's grid. Requesting more states than the grid binds returns the
// bound ones plus a warning.
FdResult fd_spectrum(const Rational& a, const Rational& b, int l, int count,
                     const RadialGrid& grid);

// Trapezoid quadrature of |u|^2 / (1 + r); lies in (0, 1) for a normalized
// state. Throws DomainError if the state is not normalized to 1e-10.
double expectation_inv_r1(const NumericState& state, const RadialGrid& grid);

struct HellmannFeynmanReport {
    double derivative = 0.0;  // central-difference dE/db from the determinant method
    double expectation = 0.0; // grid-quadrature <1/(1+r)>
    double discrepancy = 0.0; // |derivative - expectation|
};

// dE/db must equal <1/(1+r)> for the exact eigenstate. The derivative comes
// from the determinant solver at b +- db and b +- db/2 (Richardson-combined
// central differences); the expectation from the grid eigenvector at two
// resolutions. Propagates ConvergenceError from the solver.
HellmannFeynmanReport hellmann_feynman_check(const Rational& a, const Rational& b, int l,
                                             int nu, double db = 1e-4,
                                             const RpmOptions& opt = {});

} // namespace ctcoul
