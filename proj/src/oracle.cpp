#include "ctcoul/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

#include "ctcoul/model.hpp"

namespace ctcoul {

RadialGrid::RadialGrid(double r_max_, int n) : r_max(r_max_), N(n) {
    if (!(r_max > 0.0)) throw DomainError("RadialGrid: r_max must be positive");
    if (N < 3) throw DomainError("RadialGrid: need at least 3 interior points");
}

int default_points(double r_max) {
    if (!(r_max > 0.0)) throw DomainError("default_points: r_max must be positive");
    // Mesh width <= 0.02: a shallow well pushes the box far out, and a fixed
    // point count would coarsen the mesh with it.
    return std::max(1999, static_cast<int>(std::ceil(r_max / 0.02)) - 1);
}

RadialGrid default_grid(const Rational& a, const Rational& b, int l, int count) {
    if (count < 1) throw DomainError("default_grid: count must be >= 1");
    if (!(b < a)) throw DomainError("default_grid: bound-state regime requires b < a");
    double alpha_est = (a - b).to_double() / static_cast<double>(count + l + 1);
    double r_max = 40.0 / alpha_est;
    return RadialGrid(r_max, default_points(r_max));
}

namespace {

// Symmetric tridiagonal operator from the three-point second difference:
// diagonal 1/h^2 + V(r_k), off-diagonal -1/(2 h^2).
struct Tridiag {
    std::vector<double> d;
    double e; // constant off-diagonal
};

Tridiag discretize(const Rational& a, const Rational& b, int l, const RadialGrid& g) {
    const double h = g.h();
    const double inv_h2 = 1.0 / (h * h);
    const double ad = a.to_double(), bd = b.to_double();
    Tridiag t;
    t.d.resize(static_cast<std::size_t>(g.N));
    t.e = -0.5 * inv_h2;
    const double cf = 0.5 * static_cast<double>(l) * static_cast<double>(l + 1);
    for (int k = 0; k < g.N; ++k) {
        const double r = g.r(k);
        t.d[static_cast<std::size_t>(k)] = inv_h2 + cf / (r * r) - ad / r + bd / (1.0 + r);
    }
    return t;
}

// Eigenvalues of T strictly below x, by the LDL^T sign count.
int count_below(const Tridiag& t, double x) {
    const double e2 = t.e * t.e;
    int cnt = 0;
    double q = t.d.front() - x;
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++cnt;
    for (std::size_t k = 1; k < t.d.size(); ++k) {
        q = t.d[k] - x - e2 / q;
        if (q == 0.0) q = -1e-300;
        if (q < 0.0) ++cnt;
    }
    return cnt;
}

// k-th smallest eigenvalue (0-based) by bisection on the count.
double eigenvalue_k(const Tridiag& t, int k) {
    double lo = t.d.front(), hi = t.d.front();
    for (double dk : t.d) {
        lo = std::min(lo, dk);
        hi = std::max(hi, dk);
    }
    lo -= 2.0 * std::fabs(t.e) + 1.0;
    hi += 2.0 * std::fabs(t.e) + 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (count_below(t, mid) <= k) lo = mid; else hi = mid;
        if (hi - lo <= 1e-15 * std::max({std::fabs(lo), std::fabs(hi), 1.0})) break;
    }
    return 0.5 * (lo + hi);
}

// LU factorization of (T - lambda I) with partial pivoting, then a few
// inverse-iteration sweeps. The radial Sturm-Liouville spectrum is simple,
// so no reorthogonalization is needed.
std::vector<double> eigenvector(const Tridiag& t, double lambda) {
    const int n = static_cast<int>(t.d.size());
    std::vector<double> dd(t.d), dl(static_cast<std::size_t>(n - 1), t.e),
        du(static_cast<std::size_t>(n - 1), t.e), du2(n > 2 ? static_cast<std::size_t>(n - 2) : 0, 0.0);
    std::vector<char> swapped(static_cast<std::size_t>(n - 1), 0);
    for (double& v : dd) v -= lambda;

    double scale = std::fabs(t.e);
    for (double v : t.d) scale = std::max(scale, std::fabs(v - lambda));
    const double tiny = scale * 1e-280 + 1e-300;

    for (int i = 0; i + 1 < n; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        if (std::fabs(dd[si]) >= std::fabs(dl[si])) {
            if (std::fabs(dd[si]) < tiny) dd[si] = tiny;
            const double f = dl[si] / dd[si];
            dl[si] = f;
            dd[si + 1] -= f * du[si];
        } else {
            swapped[si] = 1;
            const double f = dd[si] / dl[si];
            dd[si] = dl[si];
            dl[si] = f;
            const double tmp = du[si];
            du[si] = dd[si + 1];
            dd[si + 1] = tmp - f * dd[si + 1];
            if (i + 2 < n) {
                du2[si] = du[si + 1];
                du[si + 1] = -f * du[si + 1];
            }
        }
    }
    if (std::fabs(dd[static_cast<std::size_t>(n - 1)]) < tiny)
        dd[static_cast<std::size_t>(n - 1)] = tiny;

    auto solve = [&](std::vector<double>& x) {
        for (int i = 0; i + 1 < n; ++i) {
            const std::size_t si = static_cast<std::size_t>(i);
            if (!swapped[si]) {
                x[si + 1] -= dl[si] * x[si];
            } else {
                const double tmp = x[si];
                x[si] = x[si + 1];
                x[si + 1] = tmp - dl[si] * x[si + 1];
            }
        }
        x[static_cast<std::size_t>(n - 1)] /= dd[static_cast<std::size_t>(n - 1)];
        if (n >= 2)
            x[static_cast<std::size_t>(n - 2)] =
                (x[static_cast<std::size_t>(n - 2)] -
                 du[static_cast<std::size_t>(n - 2)] * x[static_cast<std::size_t>(n - 1)]) /
                dd[static_cast<std::size_t>(n - 2)];
        for (int i = n - 3; i >= 0; --i) {
            const std::size_t si = static_cast<std::size_t>(i);
            x[si] = (x[si] - du[si] * x[si + 1] - du2[si] * x[si + 2]) / dd[si];
        }
    };

    // Deterministic jittered start so the seed is never orthogonal to the
    // target by accident.
    std::vector<double> v(static_cast<std::size_t>(n));
    std::uint64_t s = 0x9e3779b97f4a7c15ULL;
    for (int i = 0; i < n; ++i) {
        s ^= s << 13; s ^= s >> 7; s ^= s << 17;
        v[static_cast<std::size_t>(i)] =
            1.0 + 1e-3 * (static_cast<double>(s % 2048) / 1024.0 - 1.0);
    }
    for (int sweep = 0; sweep < 4; ++sweep) {
        solve(v);
        double mx = 0.0;
        for (double x : v) mx = std::max(mx, std::fabs(x));
        if (!(mx > 0.0) || !std::isfinite(mx)) throw ConvergenceError("inverse iteration degenerated");
        for (double& x : v) x /= mx;
    }
    return v;
}

void normalize_and_orient(std::vector<double>& v, double h) {
    double s2 = 0.0;
    for (double x : v) s2 += x * x;
    const double s = std::sqrt(h * s2);
    if (!(s > 0.0)) throw ConvergenceError("cannot normalize a zero vector");
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::fabs(x));
    double first = 0.0;
    for (double x : v)
        if (std::fabs(x) > 1e-8 * mx) { first = x; break; }
    const double f = (first < 0.0 ? -1.0 : 1.0) / s;
    for (double& x : v) x *= f;
}

int count_nodes(const std::vector<double>& v) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::fabs(x));
    const double thr = 1e-8 * mx; // ignore sign noise in the decayed tail
    int nodes = 0, last = 0;
    for (double x : v) {
        if (std::fabs(x) <= thr) continue;
        const int sgn = x > 0.0 ? 1 : -1;
        if (last != 0 && sgn != last) ++nodes;
        last = sgn;
    }
    return nodes;
}

struct Solved {
    std::vector<double> energies;
    std::vector<std::vector<double>> vectors; // empty when only energies wanted
};

Solved solve_grid(const Rational& a, const Rational& b, int l, int count,
                  const RadialGrid& g, bool want_vectors) {
    Tridiag t = discretize(a, b, l, g);
    Solved out;
    for (int k = 0; k < count; ++k) {
        const double ek = eigenvalue_k(t, k);
        out.energies.push_back(ek);
        if (want_vectors) {
            std::vector<double> v = eigenvector(t, ek);
            normalize_and_orient(v, g.h());
            out.vectors.push_back(std::move(v));
        }
    }
    return out;
}

int bound_count(const Tridiag& t, int cap) {
    return std::min(cap, count_below(t, 0.0));
}

} // namespace

FdResult fd_spectrum(const Rational& a, const Rational& b, int l, int count,
                     const RadialGrid& grid) {
    if (count < 1) throw DomainError("fd_spectrum: count must be >= 1");
    if (l < 0) throw DomainError("fd_spectrum: l must be non-negative");
    if (a.sign() <= 0) throw DomainError("fd_spectrum: a must be positive");

    const RadialGrid fine(grid.r_max, 2 * grid.N + 1); // exactly halves h

    const int m_coarse = bound_count(discretize(a, b, l, grid), count);
    const int m_fine = bound_count(discretize(a, b, l, fine), count);
    const int m = std::min(m_coarse, m_fine);

    FdResult res;
    if (m < count) {
        std::ostringstream w;
        w << "grid supports only " << m << " bound level(s); " << count << " requested";
        res.warning = w.str();
    }
    if (m == 0) return res;

    Solved coarse = solve_grid(a, b, l, m, grid, true);
    Solved fine_s = solve_grid(a, b, l, m, fine, false);

    for (int k = 0; k < m; ++k) {
        NumericState st;
        st.energy = (4.0 * fine_s.energies[static_cast<std::size_t>(k)] -
                     coarse.energies[static_cast<std::size_t>(k)]) / 3.0;
        st.u = std::move(coarse.vectors[static_cast<std::size_t>(k)]);
        st.nodes = count_nodes(st.u);
        res.states.push_back(std::move(st));
    }
    return res;
}

double expectation_inv_r1(const NumericState& state, const RadialGrid& grid) {
    if (static_cast<int>(state.u.size()) != grid.N)
        throw DomainError("expectation_inv_r1: state/grid size mismatch");
    const double h = grid.h();
    double norm = 0.0, acc = 0.0;
    for (int k = 0; k < grid.N; ++k) {
        const double u2 = state.u[static_cast<std::size_t>(k)] * state.u[static_cast<std::size_t>(k)];
        norm += u2;
        acc += u2 / (1.0 + grid.r(k));
    }
    // Endpoints vanish, so the trapezoid rule is a plain interior sum.
    norm *= h;
    acc *= h;
    if (std::fabs(norm - 1.0) > 1e-10)
        throw DomainError("expectation_inv_r1: state is not normalized");
    return acc;
}

namespace {

// <1/(1+r)> with the O(h^2) eigenvector bias cancelled between two grid
// resolutions.
double expectation_refined(const Rational& a, const Rational& b, int l, int nu,
                           const RadialGrid& grid) {
    const RadialGrid fine(grid.r_max, 2 * grid.N + 1);
    Solved c = solve_grid(a, b, l, nu + 1, grid, true);
    Solved f = solve_grid(a, b, l, nu + 1, fine, true);
    NumericState sc{c.energies.back(), std::move(c.vectors.back()), 0};
    NumericState sf{f.energies.back(), std::move(f.vectors.back()), 0};
    const double xc = expectation_inv_r1(sc, grid);
    const double xf = expectation_inv_r1(sf, fine);
    return (4.0 * xf - xc) / 3.0;
}

} // namespace

HellmannFeynmanReport hellmann_feynman_check(const Rational& a, const Rational& b, int l,
                                             int nu, double db, const RpmOptions& opt) {
    if (!(db > 0.0)) throw DomainError("hellmann_feynman_check: db must be positive");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", db);
    const Rational step = Rational::parse(buf);
    const Rational half = step / Rational(2);

    // Every probe is solved on the same pair of grids, fixed by the central
    // coupling: the O(h^2) discretization error is then a smooth function of
    // b and cancels in the central differences. (The determinant method is
    // unsuitable here: at a coupling where the state terminates exactly, its
    // root degenerates into a cluster whose members split with slopes of
    // their own, which a finite difference across the point picks up.)
    const RadialGrid grid = default_grid(a, b, l, nu + 1);
    const RadialGrid fine(grid.r_max, 2 * grid.N + 1);

    const Rational offsets[4] = {b + step, b - step, b + half, b - half};
    double E[4];
    std::string failure;
    parallel_for(4, opt.exec, [&](int i) {
        try {
            const double ec =
                solve_grid(a, offsets[i], l, nu + 1, grid, false).energies.back();
            const double ef =
                solve_grid(a, offsets[i], l, nu + 1, fine, false).energies.back();
            E[i] = (4.0 * ef - ec) / 3.0;
        } catch (const std::exception& ex) {
            E[i] = 0.0;
            failure = ex.what(); // benign race: any of the messages will do
        }
    });
    if (!failure.empty())
        throw ConvergenceError("hellmann_feynman_check: derivative probe failed: " + failure);
    for (double e : E)
        if (!(e < 0.0))
            throw ConvergenceError("hellmann_feynman_check: state unbound at a shifted "
                                   "coupling; reduce db");

    const double d_wide = (E[0] - E[1]) / (2.0 * db);
    const double d_half = (E[2] - E[3]) / db;
    HellmannFeynmanReport rep;
    rep.derivative = (4.0 * d_half - d_wide) / 3.0;
    rep.expectation = expectation_refined(a, b, l, nu, grid);
    rep.discrepancy = std::fabs(rep.derivative - rep.expectation);
    return rep;
}

} // namespace ctcoul
