#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ctcoul/poly.hpp"

namespace ctcoul {

// One isolated real root: either an exact rational root (lo == hi) or an
// open interval (lo, hi) containing exactly one distinct root of the
// polynomial it was produced from, with that root's multiplicity.
struct RootInterval {
    Rational lo, hi;
    int multiplicity = 1;
    bool exact() const { return lo == hi; }
    Rational mid() const { return (lo + hi) / Rational(2); }
    Rational width() const { return hi - lo; }
};

struct IsolationResult {
    std::vector<RootInterval> roots; // ascending, pairwise disjoint
    int real_count = 0;              // with multiplicity
    int nonreal_count = 0;           // degree minus real_count
};

// Square-free decomposition p = prod f_k^{m_k} (Yun), rational field only.
// Factors are primitive integer polynomials, pairwise coprime, ascending m.
std::vector<std::pair<Poly, int>> squarefree_factors(const Poly& p);

// Isolate all real roots / all roots in (0, inf). Exact (Sturm) counts;
// multiplicities from the square-free decomposition. Rational field only.
IsolationResult isolate_real_roots(const Poly& p);
IsolationResult isolate_positive_roots(const Poly& p);

// Shrink an isolating interval below the requested width by bisection with
// dyadic-rounded Newton acceleration. The interval must isolate a root
// (sign change across it, or an exact endpoint hit).
RootInterval refine_interval(const Poly& p, RootInterval iv, const Rational& width_tol);

// Refined point value (interval midpoint once width <= tol; the exact root
// when the refinement lands on it).
Scalar refine_root(const Poly& p, const RootInterval& iv, const Rational& tol);

// The unique rational of smallest denominator in the closed interval
// [lo, hi] (classic continued-fraction construction).
Rational simplest_rational_in(const Rational& lo, const Rational& hi);

// Detect whether the isolated root is rational with a denominator of at
// most ~den_bits bits: refine until the simplest rational in the bracket is
// pinned, then test it exactly. nullopt -> root is irrational (or has a
// larger denominator than the cap, which desk-scale spectra never do).
std::optional<Rational> rational_root_in_interval(const Poly& p, const RootInterval& iv,
                                                  int den_bits = 64);

// Distinct positive real roots of a floating-coefficient polynomial via a
// Sturm chain with relative coefficient truncation (tiny remainders are
// treated as zero). Used for node counting when coefficients are known only
// to working precision; exact on the rational path is preferred wherever
// possible.
int count_positive_roots_real(const Poly& p_real);

} // namespace ctcoul
