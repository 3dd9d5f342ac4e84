#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctcoul/parallel.hpp"
#include "ctcoul/poly.hpp"
#include "ctcoul/roots.hpp"

namespace ctcoul {

// Taylor coefficients f_0..f_J of the regularized logarithmic derivative
//   f(r) = (l+1)/r - u'(r)/u(r) - (l+1)/r |_analytic  (analytic at r=0).
// Exact mode keeps each f_j as a polynomial in E over the rationals;
// numeric mode holds the values at one fixed real E.
struct RiccatiSeries {
    int l = 0;
    Scalar a, b;
    std::vector<Scalar> values; // numeric mode
    std::vector<Poly> polys;    // exact mode, indeterminate 'E'
    bool exact_mode() const { return !polys.empty(); }
    int max_index() const {
        return static_cast<int>((exact_mode() ? polys.size() : values.size())) - 1;
    }
};

// Numeric mode at a fixed energy. a, b, E must share the real field (or all
// be rational, for exact spot values).
RiccatiSeries riccati_coefficients(const Scalar& a, const Scalar& b, int l,
                                   const Scalar& E, int J);

// Exact mode, E symbolic.
RiccatiSeries riccati_coefficients_exact(const Rational& a, const Rational& b, int l, int J);

// H_D^d(E) = det[f_{i+j+d+1}] at one numeric energy; the sign-scan kernel.
Real hankel_value(const Rational& a, const Rational& b, int l, int D, int d, const Real& E);

// The same determinant as an exact polynomial in E.
Poly hankel_polynomial(const RiccatiSeries& exact_series, int D, int d);

struct HankelRoot {
    Scalar value;                         // Rational when exact, Real otherwise
    std::optional<RootInterval> interval; // isolating interval (exact mode, irrational root)
    int multiplicity = 1;                 // exact mode only; 1 in numeric mode
};

// Exact mode: Sturm isolation of H_D^d's roots inside (lo, hi); rational
// roots are recognized exactly, the rest refined to `prec` bits.
std::vector<HankelRoot> hankel_roots(const RiccatiSeries& exact_series, int D, int d,
                                     const Rational& lo, const Rational& hi,
                                     mpfr_prec_t prec = kDefaultPrec);

/// Numeric mode: sign-change scan of H_D^d on a linear grid over (lo, hi)
// followed by bisection to refine_width. Empty result = no sign change.
std::vector<Real> hankel_roots(const Rational& a, const Rational& b, int l, int D, int d,
                               const Real& lo, const Real& hi, int grid_points,
                               const Real& refine_width, Exec exec = Exec::serial);

struct RpmOptions {
    mpfr_prec_t precision_bits = 256;
    int exact_max_dim = 8;  // exact-phase cap; 0 disables the exact phase
    int max_dim = 24;       // numeric-phase cap (D_max)
    int start_dim = 6;      // first tracked dimension
    int displacement = 0;   // d; the tracker also consults d+1
    int global_points_per_decade = 48;
    int global_scan_min_dim = 4, global_scan_max_dim = 8;
    int local_grid_wide = 64, local_grid_narrow = 32;
    Exec exec = Exec::openmp;
};

struct RpmEigenvalue {
    int nu = 0;
    Scalar energy;
    bool exact = false;     // found by the exact-rational phase
    bool converged = false;
    int final_dim = 0;
    double residual = 0.0;  // last successive-D difference (0 when exact)
    std::string note;       // diagnostics when convergence failed
};

struct RpmSpectrum {
    std::vector<RpmEigenvalue> states; // ascending energy, nu = position
    std::string diagnostics;
};

// Lowest `count` eigenvalues. tol is relative: a branch converges when the
// successive-D difference drops below tol * max(|E|, tol). Branches that
// fail keep converged = false with diagnostics; no exception (callers
// decide severity).
RpmSpectrum rpm_spectrum(const Rational& a, const Rational& b, int l, int count,
                         const Rational& tol, const RpmOptions& opt = {});

// Single branch; throws ConvergenceError (with the best pair and the
// dimensions tried) when the branch fails to stabilize by max_dim.
RpmEigenvalue rpm_eigenvalue(const Rational& a, const Rational& b, int l, int nu,
                             const Rational& tol, const RpmOptions& opt = {});

struct CurveSample {
    Rational b;
    Scalar energy;          // meaningful only when converged
    bool converged = false;
    bool exact = false;
};

struct EnergyCurve {
    int l = 0;
    int nu = 0;
    std::vector<CurveSample> samples; // sorted by b (input grid order)
    std::string provenance = "rpm";
    int monotone_violations = 0; // strict E-increase breaches between converged samples
};

// One (nu, l) branch over a sorted b-grid. Every grid point is computed
// independently (windowless), so serial and OpenMP execution are bitwise
// identical; failures become gaps, not aborts. Points whose numeric
// tracking fails are retried once with the exact-rational phase enabled
// (grid values sitting exactly on a conditional coupling need it).
EnergyCurve energy_curve(const Rational& a, int l, int nu,
                         const std::vector<Rational>& b_grid, const Rational& tol,
                         const RpmOptions& opt = {});

} // namespace ctcoul
