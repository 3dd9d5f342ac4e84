#include "ctcoul/frobenius.hpp"

#include <algorithm>
#include <string>

namespace ctcoul {

RecurrenceContext::RecurrenceContext(Scalar a_, Scalar b_, Scalar alpha_, int l_)
    : a(std::move(a_)), b(std::move(b_)), alpha(std::move(alpha_)), l(l_) {
    if (l < 0) throw DomainError("RecurrenceContext: l must be non-negative");
    if (a.field() != b.field() || a.field() != alpha.field())
        throw FieldMismatchError("RecurrenceContext: a, b, alpha must share one field");
}

namespace {

Scalar scalar_int(long v, const Scalar& like) {
    if (like.is_rational()) return Scalar(Rational(v));
    return Scalar(Real(Rational(v), like.real().prec()));
}

} // namespace

std::pair<Scalar, Scalar> recurrence_coeffs(int j, const RecurrenceContext& ctx) {
    if (j < 0) throw DomainError("recurrence_coeffs: j must be non-negative");
    const long lj = j, ll = ctx.l;
    Scalar two = scalar_int(2, ctx.a);
    // Denominator (j+2)(j+2l+3) never vanishes for j, l >= 0.
    Scalar den = scalar_int((lj + 2) * (lj + 2 * ll + 3), ctx.a);
    // A_j = -[2a - 2 alpha (j+l+2) + (j+1)(j+2l+2)] / den
    Scalar A = -(two * ctx.a - two * ctx.alpha * scalar_int(lj + ll + 2, ctx.a) +
                 scalar_int((lj + 1) * (lj + 2 * ll + 2), ctx.a)) /
               den;
    // B_j = -2[a - alpha (j+l+1) - b] / den
    Scalar B = -two * (ctx.a - ctx.alpha * scalar_int(lj + ll + 1, ctx.a) - ctx.b) / den;
    return {std::move(A), std::move(B)};
}

Scalar first_coefficient(const RecurrenceContext& ctx) {
    // Lowest power of r in the radial equation with c_0 = 1:
    // c_1 (l+1) = alpha (l+1) - a.
    Scalar lp1 = scalar_int(ctx.l + 1, ctx.a);
    return (ctx.alpha * lp1 - ctx.a) / lp1;
}

std::vector<Scalar> series_coefficients(const RecurrenceContext& ctx, int J) {
    if (J < 1) throw DomainError("series_coefficients: J must be >= 1");
    std::vector<Scalar> c;
    c.reserve(static_cast<std::size_t>(J) + 1);
    c.push_back(Scalar::one_like(ctx.a));
    c.push_back(first_coefficient(ctx));
    for (int j = 0; j + 2 <= J; ++j) {
        auto [A, B] = recurrence_coeffs(j, ctx);
        c.push_back(A * c[static_cast<std::size_t>(j) + 1] + B * c[static_cast<std::size_t>(j)]);
    }
    return c;
}

Scalar critical_alpha(int n, int l, const Scalar& a, const Scalar& b) {
    if (n < 0 || l < 0) throw DomainError("critical_alpha: n, l must be non-negative");
    if (a.field() != b.field())
        throw FieldMismatchError("critical_alpha: a and b must share one field");
    Scalar diff = a - b;
    if (diff.sign() <= 0)
        throw DomainError("critical_alpha: a <= b gives alpha <= 0 (no normalizable polynomial solution)");
    return diff / scalar_int(n + l + 1, a);
}

Poly termination_polynomial(int n, int l, const Rational& a) {
    if (n < 0 || l < 0) throw DomainError("termination_polynomial: n, l must be non-negative");
    if (a.sign() <= 0) throw DomainError("termination_polynomial: a must be positive");
    // With alpha = (a-b)/(n+l+1) substituted, the recurrence coefficients
    // turn into degree-1 polynomials in b over Q:
    //   A_j = [2a(j+1-n) - 2b(j+l+2) - (j+1)(j+2l+2) N] / ((j+2)(j+2l+3) N)
    //   B_j = [2a(j-n)   - 2b(j-n)                     ] / ((j+2)(j+2l+3) N)
    // with N = n+l+1, and c_1 = -[a n + b(l+1)] / ((l+1) N).
    const long N = n + l + 1;
    const char var = 'b';
    auto lin = [&](const Rational& c0, const Rational& c1) {
        return Poly::from_coeffs({Scalar(c0), Scalar(c1)}, var);
    };

    std::vector<Poly> c;
    c.reserve(static_cast<std::size_t>(n) + 2);
    c.push_back(Poly::constant(Scalar(Rational(1)), var));
    c.push_back(lin(-(a * Rational(n)) / Rational((l + 1) * N),
                    Rational(-(l + 1), (l + 1) * N)));
    for (int j = 0; j + 2 <= n + 1; ++j) {
        Rational den(static_cast<long>(j + 2) * (j + 2 * l + 3) * N);
        Poly A = lin((Rational(2) * a * Rational(j + 1 - n) -
                      Rational(static_cast<long>(j + 1) * (j + 2 * l + 2) * N)) /
                         den,
                     Rational(-2 * static_cast<long>(j + l + 2)) / den);
        Poly B = lin(Rational(2) * a * Rational(j - n) / den,
                     Rational(-2 * static_cast<long>(j - n)) / den);
        c.push_back(A * c[static_cast<std::size_t>(j) + 1] + B * c[static_cast<std::size_t>(j)]);
    }

    Poly result = c.back();
    if (result.degree() != n + 1)
        throw ConvergenceError("termination_polynomial: expected degree " + std::to_string(n + 1) +
                               ", got " + std::to_string(result.degree()));
    if (!result.coeff(0).is_zero())
        throw ConvergenceError("termination_polynomial: constant term is not zero");
    return result;
}

namespace {

// Shared post-root construction: alpha, E, series, node count, self-check.
TerminationSolution build_solution(int n, int l, const Rational& a, Scalar b_root,
                                   std::optional<RootInterval> iv, int multiplicity,
                                   mpfr_prec_t prec) {
    TerminationSolution s;
    s.n = n;
    s.l = l;
    s.a = b_root.is_rational() ? Scalar(a) : Scalar(Real(a, prec));
    s.b_root = std::move(b_root);
    s.b_interval = std::move(iv);
    s.multiplicity = multiplicity;
    s.alpha = critical_alpha(n, l, s.a, s.b_root);
    Scalar N = s.a.is_rational() ? Scalar(Rational(n + l + 1))
                                 : Scalar(Real(Rational(n + l + 1), prec));
    Scalar diff = s.a - s.b_root;
    Scalar two = s.a.is_rational() ? Scalar(Rational(2)) : Scalar(Real(Rational(2), prec));
    s.energy = -(diff * diff) / (two * N * N);

    RecurrenceContext ctx(s.a, s.b_root, s.alpha, l);
    std::vector<Scalar> coeffs = series_coefficients(ctx, n + 3);

    // Termination self-check: c_{n+1} = c_{n+2} = 0 (exact in the rational
    // field; to working accuracy otherwise).
    // Residual scale: a root known to ~prec bits leaves c_{n+1} at roughly
    // 2^-prec times the recurrence's sensitivity; half the precision is a
    // generous separator from any genuinely nonzero coefficient.
    auto effectively_zero = [&](const Scalar& c) {
        if (c.is_rational()) return c.is_zero();
        Real thr(1.0, prec);
        for (mpfr_prec_t k = 0; k < prec / 2; ++k) thr = thr * Real(0.5, prec);
        return c.real().abs() < thr;
    };
    if (!effectively_zero(coeffs[static_cast<std::size_t>(n) + 1]) ||
        !effectively_zero(coeffs[static_cast<std::size_t>(n) + 2]))
        throw ConvergenceError("conditional_solutions: series does not terminate at the computed root "
                               "(c_{n+1} = " + coeffs[static_cast<std::size_t>(n) + 1].str() + ")");

    coeffs.resize(static_cast<std::size_t>(n) + 1);
    s.poly = Poly::from_coeffs(std::move(coeffs), 'r');
    if (s.poly.degree() != n)
        throw ConvergenceError("conditional_solutions: polynomial degree " +
                               std::to_string(s.poly.degree()) + " != n = " + std::to_string(n));

    // Distinct positive zeros of p(r): the node count of u on r > 0.
    s.nu = s.poly.field() == Field::rational
               ? static_cast<int>(isolate_positive_roots(s.poly).roots.size())
               : count_positive_roots_real(s.poly);
    if (s.nu < 0 || s.nu > n)
        throw ConvergenceError("conditional_solutions: node count " + std::to_string(s.nu) +
                               " outside [0, n]");
    return s;
}

} // namespace

ConditionalSweep conditional_solutions(int n, int l, const Rational& a, mpfr_prec_t prec) {
    Poly tp = termination_polynomial(n, l, a);
    IsolationResult iso = isolate_real_roots(tp);

    ConditionalSweep sweep;
    sweep.nonreal_root_count = iso.nonreal_count;

    // Refinement target for irrational roots: comfortably below the
    // requested working precision.
    Rational tol(1);
    for (mpfr_prec_t k = 0; k < prec + 16; ++k) tol *= Rational(1, 2);

    for (const RootInterval& iv : iso.roots) {
        std::optional<Rational> exact = rational_root_in_interval(tp, iv);
        Scalar b_root;
        std::optional<RootInterval> kept_iv;
        if (exact) {
            b_root = Scalar(*exact);
        } else {
            RootInterval fine = refine_interval(tp, iv, tol);
            kept_iv = fine;
            b_root = Scalar(Real(fine.mid(), prec));
        }

        // alpha must stay positive; a real root at or above a would be a
        // non-normalizable artifact. Record it instead of constructing.
        Scalar a_like = b_root.is_rational() ? Scalar(a) : Scalar(Real(a, prec));
        if ((a_like - b_root).sign() <= 0) {
            ++sweep.nonbound_root_count;
            continue;
        }
        sweep.solutions.push_back(
            build_solution(n, l, a, std::move(b_root), std::move(kept_iv), iv.multiplicity, prec));
    }

    // Descending b_root; i is 1-based so that i=1 is always the b=0 root.
    // Sort on exact rational keys: the root itself when rational, otherwise
    // the (pairwise disjoint) isolating interval's midpoint.
    auto sort_key = [](const TerminationSolution& s) {
        return s.b_root.is_rational() ? s.b_root.rat() : s.b_interval->mid();
    };
    std::sort(sweep.solutions.begin(), sweep.solutions.end(),
              [&](const TerminationSolution& x, const TerminationSolution& y) {
                  return sort_key(y) < sort_key(x);
              });
    for (std::size_t k = 0; k < sweep.solutions.size(); ++k)
        sweep.solutions[k].i = static_cast<int>(k) + 1;
    return sweep;
}

Rational coulomb_energy(int nu, int l, const Rational& a) {
    if (nu < 0 || l < 0) throw DomainError("coulomb_energy: nu, l must be non-negative");
    if (a.sign() <= 0) throw DomainError("coulomb_energy: a must be positive");
    long k = nu + l + 1;
    return -(a * a) / Rational(2 * k * k);
}

} // namespace ctcoul
