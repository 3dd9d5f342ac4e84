#include "ctcoul/rpm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ctcoul/determinant.hpp"
#include "ctcoul/frobenius.hpp"

namespace ctcoul {

// ------------------------------------------------------------ series

RiccatiSeries riccati_coefficients(const Scalar& a, const Scalar& b, int l,
                                   const Scalar& E, int J) {
    if (l < 0) throw DomainError("riccati_coefficients: l must be non-negative");
    if (J < 1) throw DomainError("riccati_coefficients: J must be >= 1");
    if (a.field() != b.field() || a.field() != E.field())
        throw FieldMismatchError("riccati_coefficients: a, b, E must share one field");

    auto num = [&](long v) {
        return a.is_rational() ? Scalar(Rational(v)) : Scalar(Real(Rational(v), a.real().prec()));
    };

    RiccatiSeries s;
    s.l = l;
    s.a = a;
    s.b = b;
    s.values.reserve(static_cast<std::size_t>(J) + 1);
    s.values.push_back(a / num(l + 1));
    for (int m = 1; m <= J; ++m) {
        Scalar conv = Scalar::zero_like(a);
        for (int k = 0; k < m; ++k)
            conv = conv + s.values[static_cast<std::size_t>(k)] *
                              s.values[static_cast<std::size_t>(m - 1 - k)];
        // w_0 = b - E; w_k = (-1)^k b for k >= 1 (geometric expansion of
        // b/(1+r) against the series ansatz).
        Scalar w = (m == 1) ? (b - E) : ((m - 1) % 2 == 1 ? -b : b);
        s.values.push_back((conv - num(2) * w) / num(m + 2 * l + 2));
    }
    return s;
}

RiccatiSeries riccati_coefficients_exact(const Rational& a, const Rational& b, int l, int J) {
    if (l < 0) throw DomainError("riccati_coefficients_exact: l must be non-negative");
    if (J < 1) throw DomainError("riccati_coefficients_exact: J must be >= 1");

    const char var = 'E';
    RiccatiSeries s;
    s.l = l;
    s.a = Scalar(a);
    s.b = Scalar(b);
    s.polys.reserve(static_cast<std::size_t>(J) + 1);
    s.polys.push_back(Poly::constant(Scalar(a / Rational(l + 1)), var));
    for (int m = 1; m <= J; ++m) {
        Poly conv(Field::rational, var);
        for (int k = 0; k < m; ++k)
            conv = conv + s.polys[static_cast<std::size_t>(k)] *
                              s.polys[static_cast<std::size_t>(m - 1 - k)];
        Poly w = (m == 1)
                     ? Poly::from_coeffs({Scalar(b), Scalar(Rational(-1))}, var)
                     : Poly::constant(Scalar((m - 1) % 2 == 1 ? -b : b), var);
        s.polys.push_back((conv - w.scaled(Scalar(Rational(2))))
                              .scaled(Scalar(Rational(1, m + 2 * l + 2))));
    }
    return s;
}

// ------------------------------------------------------------ determinants

Real hankel_value(const Rational& a, const Rational& b, int l, int D, int d, const Real& E) {
    if (D < 1 || d < 0) throw DomainError("hankel_value: need D >= 1, d >= 0");
    const mpfr_prec_t prec = E.prec();
    RiccatiSeries s = riccati_coefficients(Scalar(Real(a, prec)), Scalar(Real(b, prec)), l,
                                           Scalar(E), 2 * D + d - 1);
    Matrix<Scalar> m(static_cast<std::size_t>(D),
                     std::vector<Scalar>(static_cast<std::size_t>(D), Scalar(Real(0.0, prec))));
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                s.values[static_cast<std::size_t>(i + j + d + 1)];
    return hankel_det(m).real();
}

Poly hankel_polynomial(const RiccatiSeries& exact_series, int D, int d) {
    if (!exact_series.exact_mode())
        throw DomainError("hankel_polynomial: exact-mode series required");
    if (D < 1 || d < 0) throw DomainError("hankel_polynomial: need D >= 1, d >= 0");
    if (exact_series.max_index() < 2 * D + d - 1)
        throw DomainError("hankel_polynomial: series too short (need f up to index " +
                          std::to_string(2 * D + d - 1) + ")");
    Matrix<Poly> m(static_cast<std::size_t>(D),
                   std::vector<Poly>(static_cast<std::size_t>(D), Poly(Field::rational, 'E')));
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                exact_series.polys[static_cast<std::size_t>(i + j + d + 1)];
    return hankel_det(m);
}

std::vector<HankelRoot> hankel_roots(const RiccatiSeries& exact_series, int D, int d,
                                     const Rational& lo, const Rational& hi,
                                     mpfr_prec_t prec) {
    if (!(lo < hi)) throw DomainError("hankel_roots: window must satisfy lo < hi");
    Poly P = hankel_polynomial(exact_series, D, d);
    std::vector<HankelRoot> out;
    if (P.is_zero() || P.degree() == 0) return out; // no structure in E at this D

    Rational fine(1);
    for (mpfr_prec_t k = 0; k < prec + 8; ++k) fine *= Rational(1, 2);

    // Per square-free factor so refinement always has a sign change.
    for (auto& [factor, mult] : squarefree_factors(P)) {
        if (factor.degree() < 1) continue;
        IsolationResult iso = isolate_real_roots(factor);
        for (const RootInterval& iv0 : iso.roots) {
            // Decide window membership; shrink while straddling an edge.
            RootInterval iv = iv0;
            for (int round = 0; round < 200 && !iv.exact(); ++round) {
                if (iv.hi <= lo || iv.lo >= hi) break;
                if (iv.lo > lo && iv.hi < hi) break;
                iv = refine_interval(factor, iv, iv.width() / Rational(4));
            }
            bool inside;
            if (iv.exact())
                inside = (iv.lo > lo && iv.lo < hi);
            else
                inside = (iv.lo > lo && iv.hi < hi);
            if (!inside) continue;

            HankelRoot root;
            root.multiplicity = mult;
            std::optional<Rational> exact = rational_root_in_interval(factor, iv);
            if (exact) {
                root.value = Scalar(*exact);
            } else {
                RootInterval fined = refine_interval(factor, iv, fine);
                root.interval = fined;
                root.value = Scalar(Real(fined.mid(), prec));
            }
            out.push_back(std::move(root));
        }
    }
    std::sort(out.begin(), out.end(), [](const HankelRoot& x, const HankelRoot& y) {
        return x.value.to_double() < y.value.to_double();
    });
    return out;
}

std::vector<Real> hankel_roots(const Rational& a, const Rational& b, int l, int D, int d,
                               const Real& lo, const Real& hi, int grid_points,
                               const Real& refine_width, Exec exec) {
    if (grid_points < 3) throw DomainError("hankel_roots: need at least 3 grid points");
    if (!(lo < hi)) return {};
    const mpfr_prec_t prec = lo.prec() < hi.prec() ? lo.prec() : hi.prec();

    std::vector<Real> E(static_cast<std::size_t>(grid_points), Real(0.0, prec));
    std::vector<Real> val(static_cast<std::size_t>(grid_points), Real(0.0, prec));
    Real span = hi - lo;
    Real denom(static_cast<double>(grid_points - 1), prec);
    for (int k = 0; k < grid_points; ++k)
        E[static_cast<std::size_t>(k)] = lo + span * Real(static_cast<double>(k), prec) / denom;

    parallel_for(grid_points, exec, [&](int k) {
        val[static_cast<std::size_t>(k)] = hankel_value(a, b, l, D, d, E[static_cast<std::size_t>(k)]);
    });

    // Collect brackets (and the rare exact grid hit).
    std::vector<std::pair<int, int>> brackets;
    std::vector<Real> roots;
    for (int k = 0; k + 1 < grid_points; ++k) {
        int s0 = val[static_cast<std::size_t>(k)].sign();
        int s1 = val[static_cast<std::size_t>(k) + 1].sign();
        if (s0 == 0) roots.push_back(E[static_cast<std::size_t>(k)]);
        else if (s1 != 0 && s0 != s1) brackets.emplace_back(k, k + 1);
    }
    if (val.back().sign() == 0) roots.push_back(E.back());

    std::vector<Real> refined(brackets.size(), Real(0.0, prec));
    parallel_for(static_cast<int>(brackets.size()), exec, [&](int bi) {
        auto [kl, kr] = brackets[static_cast<std::size_t>(bi)];
        Real x0 = E[static_cast<std::size_t>(kl)], x1 = E[static_cast<std::size_t>(kr)];
        int s0 = val[static_cast<std::size_t>(kl)].sign();
        Real half(0.5, prec);
        for (int it = 0; it < 4096 && refine_width < (x1 - x0); ++it) {
            Real mid = (x0 + x1) * half;
            int sm = hankel_value(a, b, l, D, d, mid).sign();
            if (sm == 0) { x0 = mid; x1 = mid; break; }
            if (sm == s0) x0 = mid; else x1 = mid;
        }
        refined[static_cast<std::size_t>(bi)] = (x0 + x1) * Real(0.5, prec);
    });

    roots.insert(roots.end(), refined.begin(), refined.end());
    std::sort(roots.begin(), roots.end());
    return roots;
}

// ------------------------------------------------------------ spectrum

namespace {

struct Window {
    Rational lo_rat, hi_rat;
    Real lo, hi;
};

// Hydrogenic comparison bound: V(r) >= -(a + max(-b,0))/r, so every
// eigenvalue at angular momentum l lies above -(a+max(-b,0))^2/(2(l+1)^2).
// (The literal minimum of the effective potential is -inf at l = 0.)
Window make_window(const Rational& a, const Rational& b, int l, const Rational& tol,
                   mpfr_prec_t prec) {
    Rational spill = a;
    if (b.sign() < 0) spill = a - b;
    Rational lo = -(Rational(21) * spill * spill) / Rational(40L * (l + 1) * (l + 1));
    Rational cap(1, 100000000); // 1e-8
    Rational hi = -(tol < cap ? tol : cap);
    if (!(lo < hi)) throw DomainError("rpm: degenerate search window");
    return Window{lo, hi, Real(lo, prec), Real(hi, prec)};
}

struct ExactPhase {
    std::vector<std::pair<Rational, int>> converged; // (energy, dim confirmed)
};

// Exact-rational phase: Bareiss determinant polynomials at small D, Sturm
// isolation, and exact recognition of rational roots. A rational root that
// recurs identically at consecutive D is an exactly converged eigenvalue —
// this sees the high-multiplicity roots at exactly-terminating couplings
// that numeric sign scans cannot.
ExactPhase run_exact_phase(const Rational& a, const Rational& b, int l, int count,
                           const Window& win, const RpmOptions& opt) {
    ExactPhase res;
    if (opt.exact_max_dim < 3) return res;

    RiccatiSeries series =
        riccati_coefficients_exact(a, b, l, 2 * opt.exact_max_dim + opt.displacement + 1);

    std::vector<Rational> prev;
    int consecutive_without_rational = 0;
    bool grew_last_dim = true;
    for (int D = 2; D <= opt.exact_max_dim; ++D) {
        std::vector<HankelRoot> roots =
            hankel_roots(series, D, opt.displacement, win.lo_rat, win.hi_rat, opt.precision_bits);
        std::vector<Rational> cur;
        for (const HankelRoot& r : roots)
            if (r.value.is_rational()) cur.push_back(r.value.rat());
        std::sort(cur.begin(), cur.end());

        grew_last_dim = false;
        for (const Rational& r : cur) {
            if (std::find(prev.begin(), prev.end(), r) == prev.end()) continue;
            bool known = false;
            for (auto& [e, dim] : res.converged)
                if (e == r) { known = true; break; }
            if (!known) {
                res.converged.emplace_back(r, D);
                grew_last_dim = true;
            }
        }

        consecutive_without_rational = cur.empty() ? consecutive_without_rational + 1 : 0;
        if (static_cast<int>(res.converged.size()) >= count) break;
        if (D >= 4 && consecutive_without_rational >= 2) break; // nothing exact here
        if (D >= 5 && !grew_last_dim && cur == prev) break;     // stabilized below count
        prev = std::move(cur);
    }
    std::sort(res.converged.begin(), res.converged.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return res;
}

// values[k][j] = H_{D_j}^{d_j}(E_k). One series per energy feeds every
// requested determinant — the dominant cost of scanning is the series, so
// sharing it across dimensions is the main throughput lever.
std::vector<std::vector<Real>> hankel_values_multi(const Rational& a, const Rational& b, int l,
                                                   const std::vector<std::pair<int, int>>& dims,
                                                   const std::vector<Real>& Es, Exec exec) {
    int jmax = 1;
    for (auto [D, d] : dims) jmax = std::max(jmax, 2 * D + d - 1);
    const int n = static_cast<int>(Es.size());
    std::vector<std::vector<Real>> out(static_cast<std::size_t>(n));

    parallel_for(n, exec, [&](int k) {
        const Real& E = Es[static_cast<std::size_t>(k)];
        const mpfr_prec_t prec = E.prec();
        RiccatiSeries s = riccati_coefficients(Scalar(Real(a, prec)), Scalar(Real(b, prec)), l,
                                               Scalar(E), jmax);
        std::vector<Real>& row = out[static_cast<std::size_t>(k)];
        row.reserve(dims.size());
        for (auto [D, d] : dims) {
            Matrix<Scalar> m(static_cast<std::size_t>(D),
                             std::vector<Scalar>(static_cast<std::size_t>(D), Scalar(Real(0.0, prec))));
            for (int i = 0; i < D; ++i)
                for (int j = 0; j < D; ++j)
                    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                        s.values[static_cast<std::size_t>(i + j + d + 1)];
            row.push_back(hankel_det(m).real());
        }
    });
    return out;
}

// Global persistence scan: root lists from several (D, d) pairs over a
// geometric energy grid; values recurring across many lists are branch
// seeds, one-off determinant roots are spurious and drop out.
std::vector<double> persistence_seeds(const Rational& a, const Rational& b, int l,
                                      const Window& win, const RpmOptions& opt) {
    const mpfr_prec_t prec = opt.precision_bits;
    const double lo_d = win.lo.to_double(), hi_d = win.hi.to_double();
    const double decades = std::log10(-lo_d) - std::log10(-hi_d);
    const int n = std::max(48, static_cast<int>(opt.global_points_per_decade * decades));

    std::vector<std::pair<int, int>> lists;
    for (int D = opt.global_scan_min_dim; D <= std::min(opt.global_scan_max_dim, opt.max_dim); ++D)
        for (int dd = 0; dd <= 1; ++dd) lists.emplace_back(D, opt.displacement + dd);

    // Geometric grid, deepest first. Shared by all lists.
    std::vector<Real> grid(static_cast<std::size_t>(n), Real(0.0, prec));
    {
        Real ratio = win.hi / win.lo; // in (0,1)
        Real lnr(0.0, prec);
        mpfr_log(lnr.raw(), ratio.raw(), MPFR_RNDN);
        Real denom(static_cast<double>(n - 1), prec);
        for (int k = 0; k < n; ++k) {
            Real t = lnr * Real(static_cast<double>(k), prec) / denom;
            Real e(0.0, prec);
            mpfr_exp(e.raw(), t.raw(), MPFR_RNDN);
            grid[static_cast<std::size_t>(k)] = win.lo * e;
        }
    }

    std::vector<std::vector<Real>> values = hankel_values_multi(a, b, l, lists, grid, opt.exec);

    std::vector<double> all_roots;
    std::vector<std::tuple<int, int, int>> brackets; // (list index, k, k+1)
    for (std::size_t li = 0; li < lists.size(); ++li) {
        for (int k = 0; k + 1 < n; ++k) {
            int s0 = values[static_cast<std::size_t>(k)][li].sign();
            int s1 = values[static_cast<std::size_t>(k) + 1][li].sign();
            if (s0 == 0) all_roots.push_back(grid[static_cast<std::size_t>(k)].to_double());
            else if (s1 != 0 && s0 != s1) brackets.emplace_back(static_cast<int>(li), k, k + 1);
        }
    }
    std::vector<double> refined(brackets.size(), 0.0);
    parallel_for(static_cast<int>(brackets.size()), opt.exec, [&](int bi) {
        auto [li, kl, kr] = brackets[static_cast<std::size_t>(bi)];
        auto [D, d] = lists[static_cast<std::size_t>(li)];
        Real x0 = grid[static_cast<std::size_t>(kl)], x1 = grid[static_cast<std::size_t>(kr)];
        int s0 = values[static_cast<std::size_t>(kl)][static_cast<std::size_t>(li)].sign();
        // Coarse: clustering only needs ~1e-4 relative location.
        for (int it = 0; it < 24; ++it) {
            Real mid = (x0 + x1) * Real(0.5, prec);
            double rel = ((x1 - x0) / mid.abs()).to_double();
            if (rel < 1e-4) break;
            int sm = hankel_value(a, b, l, D, d, mid).sign();
            if (sm == 0) { x0 = mid; x1 = mid; break; }
            if (sm == s0) x0 = mid; else x1 = mid;
        }
        refined[static_cast<std::size_t>(bi)] = ((x0 + x1) * Real(0.5, prec)).to_double();
    });
    all_roots.insert(all_roots.end(), refined.begin(), refined.end());

    std::sort(all_roots.begin(), all_roots.end());
    const int threshold = std::max(3, static_cast<int>(lists.size()) * 2 / 5);
    std::vector<double> seeds;
    std::size_t i = 0;
    while (i < all_roots.size()) {
        std::size_t j = i + 1;
        double sum = all_roots[i];
        while (j < all_roots.size()) {
            double gap_tol = std::max(0.04 * std::fabs(all_roots[j - 1]), 0.004 * std::fabs(lo_d));
            if (all_roots[j] - all_roots[j - 1] > gap_tol) break;
            sum += all_roots[j];
            ++j;
        }
        if (static_cast<int>(j - i) >= threshold) seeds.push_back(sum / static_cast<double>(j - i));
        i = j;
    }
    return seeds;
}

// Track one branch across D: local sign-change windows around the previous
// value, roots pooled from displacements d and d+1 (a root can go complex
// in one family at isolated D while staying real in the other), and nearest
// pairing. Migration guard: once a successive-D scale is established, a
// root stepping 10x past it is spurious and is rejected — the guard stays
// armed across empty scans (near a terminating coupling the sign scan goes
// parity-blind on the true cluster at isolated D while a satellite root
// stays visible; adopting the satellite unguarded walks the track onto a
// foreign branch). A track that keeps getting rejected has lost its branch
// and fails rather than adopt; relabeling a wrong branch "converged" is the
// one unrecoverable outcome.
RpmEigenvalue track_branch(const Rational& a, const Rational& b, int l, double seed,
                           double tol_rel, const Window& win, const RpmOptions& opt) {
    const mpfr_prec_t prec = opt.precision_bits;
    RpmEigenvalue out;
    Real prev(seed, prec);
    double prev_diff = -1.0; // last accepted successive-D difference (< 0: none yet)
    bool wide = true;        // first dimension, or recovering from an empty scan
    int rejected = 0, skipped = 0;
    double best_diff = -1.0;
    Real best_E(0.0, prec);
    int best_dim = 0;

    for (int D = opt.start_dim; D <= opt.max_dim; ++D) {
        Real mag = prev.abs();
        Real half = mag * Real(0.35, prec);
        if (!wide) {
            double hw = std::min(0.35, std::max(40.0 * prev_diff / std::fabs(prev.to_double()),
                                                50.0 * tol_rel));
            half = mag * Real(hw, prec);
        }
        Real lo = prev - half, hi = prev + half;
        if (lo < win.lo) lo = win.lo;
        if (win.hi < hi) hi = win.hi;

        Real rw = mag * Real(tol_rel * 1e-2, prec);
        const int points = wide ? opt.local_grid_wide : opt.local_grid_narrow;
        const std::vector<std::pair<int, int>> dims = {{D, opt.displacement},
                                                       {D, opt.displacement + 1}};
        std::vector<Real> grid(static_cast<std::size_t>(points), Real(0.0, prec));
        {
            Real span = hi - lo;
            Real denom(static_cast<double>(points - 1), prec);
            for (int k = 0; k < points; ++k)
                grid[static_cast<std::size_t>(k)] =
                    lo + span * Real(static_cast<double>(k), prec) / denom;
        }
        std::vector<std::vector<Real>> values =
            hankel_values_multi(a, b, l, dims, grid, opt.exec);

        std::vector<Real> roots;
        std::vector<std::tuple<int, int, int>> brackets; // (family, k, k+1)
        for (std::size_t fi = 0; fi < dims.size(); ++fi) {
            for (int k = 0; k + 1 < points; ++k) {
                int s0 = values[static_cast<std::size_t>(k)][fi].sign();
                int s1 = values[static_cast<std::size_t>(k) + 1][fi].sign();
                if (s0 == 0) roots.push_back(grid[static_cast<std::size_t>(k)]);
                else if (s1 != 0 && s0 != s1) brackets.emplace_back(static_cast<int>(fi), k, k + 1);
            }
            if (values.back()[fi].sign() == 0) roots.push_back(grid.back());
        }
        std::vector<Real> refined(brackets.size(), Real(0.0, prec));
        parallel_for(static_cast<int>(brackets.size()), opt.exec, [&](int bi) {
            auto [fi, kl, kr] = brackets[static_cast<std::size_t>(bi)];
            const int d = dims[static_cast<std::size_t>(fi)].second;
            Real x0 = grid[static_cast<std::size_t>(kl)], x1 = grid[static_cast<std::size_t>(kr)];
            int s0 = values[static_cast<std::size_t>(kl)][static_cast<std::size_t>(fi)].sign();
            Real hf(0.5, prec);
            for (int it = 0; it < 4096 && rw < (x1 - x0); ++it) {
                Real mid = (x0 + x1) * hf;
                int sm = hankel_value(a, b, l, D, d, mid).sign();
                if (sm == 0) { x0 = mid; x1 = mid; break; }
                if (sm == s0) x0 = mid; else x1 = mid;
            }
            refined[static_cast<std::size_t>(bi)] = (x0 + x1) * hf;
        });
        roots.insert(roots.end(), refined.begin(), refined.end());
        if (roots.empty()) {
            ++skipped;
            wide = true; // widen the next dimension; keep prev_diff for the guard
            if (skipped > 3) break;
            continue;
        }
        skipped = 0;

        Real cur = roots.front();
        Real dist = (cur - prev).abs();
        for (const Real& r : roots) {
            Real cand = (r - prev).abs();
            if (cand < dist) { dist = cand; cur = r; }
        }
        const double diff = dist.to_double();
        const double floor = std::fabs(cur.to_double()) * tol_rel;

        if (prev_diff >= 0.0 && diff > 10.0 * std::max(prev_diff, floor)) {
            if (++rejected > 5) break; // the branch is lost; fail honestly
            continue;                  // hold position; the root may return next D
        }
        if (best_diff < 0.0 || diff < best_diff) {
            best_diff = diff;
            best_E = cur;
            best_dim = D;
        }
        if (diff <= std::max(floor, tol_rel * tol_rel)) {
            out.energy = Scalar(cur);
            out.converged = true;
            out.final_dim = D;
            out.residual = diff;
            return out;
        }
        prev = cur;
        prev_diff = diff;
        wide = false;
    }

    std::ostringstream msg;
    msg << "no stabilization through D=" << opt.max_dim << " (seed " << seed
        << ", best successive-D difference " << best_diff << " at D=" << best_dim << ", "
        << rejected << " migration(s) rejected, " << skipped << " trailing empty scan(s))";
    out.energy = Scalar(best_E);
    out.converged = false;
    out.final_dim = opt.max_dim;
    out.residual = best_diff;
    out.note = msg.str();
    return out;
}

} // namespace

RpmSpectrum rpm_spectrum(const Rational& a, const Rational& b, int l, int count,
                         const Rational& tol, const RpmOptions& opt) {
    if (count < 1) throw DomainError("rpm_spectrum: count must be >= 1");
    if (l < 0) throw DomainError("rpm_spectrum: l must be non-negative");
    if (a.sign() <= 0) throw DomainError("rpm_spectrum: a must be positive");
    if (tol.sign() <= 0) throw DomainError("rpm_spectrum: tol must be positive");
    if (!(b < a)) throw DomainError("rpm_spectrum: bound-state regime requires b < a");
    if (opt.precision_bits < 64) throw DomainError("rpm_spectrum: precision must be >= 64 bits");

    const mpfr_prec_t prec = opt.precision_bits;
    const double tol_rel = tol.to_double();
    Window win = make_window(a, b, l, tol, prec);

    ExactPhase exact = run_exact_phase(a, b, l, count, win, opt);

    // Merge: exact values are authoritative; numeric clusters within 3%
    // of one are the same branch seen fuzzily. (Adjacent genuine levels of
    // this family are tens of percent apart.)
    struct SeedEntry {
        double value;
        bool exact;
        Rational exact_value;
        int exact_dim = 0;
    };
    auto merge_seeds = [&exact](const std::vector<double>& seeds) {
        std::vector<SeedEntry> out;
        for (auto& [e, dim] : exact.converged)
            out.push_back(SeedEntry{e.to_double(), true, e, dim});
        for (double s : seeds) {
            bool dup = false;
            for (const SeedEntry& m : out)
                if (std::fabs(s - m.value) <= 0.03 * std::fabs(m.value)) { dup = true; break; }
            if (!dup) out.push_back(SeedEntry{s, false, Rational(0), 0});
        }
        std::sort(out.begin(), out.end(),
                  [](const SeedEntry& x, const SeedEntry& y) { return x.value < y.value; });
        return out;
    };

    std::vector<SeedEntry> merged = merge_seeds(persistence_seeds(a, b, l, win, opt));
    // A shallow branch can slip between grid points when its sign change is
    // nearly tangent at the scanned dimensions (the grid phase depends on
    // the window ceiling, hence on tol). Densifying the scan is cheap and
    // deterministic, so retry before reporting a missing branch.
    for (int densify = 2; static_cast<int>(merged.size()) < count && densify <= 4; densify *= 2) {
        RpmOptions denser = opt;
        denser.global_points_per_decade = opt.global_points_per_decade * densify;
        merged = merge_seeds(persistence_seeds(a, b, l, win, denser));
    }

    RpmSpectrum spec;
    spec.states.assign(static_cast<std::size_t>(count), RpmEigenvalue{});

    std::ostringstream diag;
    if (static_cast<int>(merged.size()) < count)
        diag << "only " << merged.size() << " candidate branch(es) found for count=" << count
             << "; ";

    const int tracked = std::min<int>(count, static_cast<int>(merged.size()));
    parallel_for(tracked, opt.exec, [&](int k) {
        const SeedEntry& s = merged[static_cast<std::size_t>(k)];
        RpmEigenvalue& st = spec.states[static_cast<std::size_t>(k)];
        if (s.exact) {
            st.energy = Scalar(s.exact_value);
            st.exact = true;
            st.converged = true;
            st.final_dim = s.exact_dim;
            st.residual = 0.0;
        } else {
            st = track_branch(a, b, l, s.value, tol_rel, win, opt);
            // A track that stabilized outside its seed's 35% basin latched
            // onto a different branch: adjacent levels sit >= 50% apart,
            // while a seed smeared by the root's own early-D drift stays
            // well inside the basin.
            if (st.converged &&
                std::fabs(st.energy.to_double() - s.value) > 0.35 * std::fabs(s.value)) {
                std::ostringstream m;
                m << "abandoned its seed " << s.value << " and stabilized at "
                  << st.energy.to_double();
                st.converged = false;
                st.note = m.str();
            }
        }
    });
    for (int k = tracked; k < count; ++k) {
        spec.states[static_cast<std::size_t>(k)].converged = false;
        spec.states[static_cast<std::size_t>(k)].note =
            "no candidate branch below the window ceiling";
    }

    // Seed order is label order: merged is ascending and each track refines
    // its own seed in place. A failed track keeps its position; re-sorting by
    // energy would shift deeper labels onto shallower roots.
    for (int k = 0; k < count; ++k) spec.states[static_cast<std::size_t>(k)].nu = k;

    // Adjacent converged states must stay strictly ordered with a real gap:
    // a collision (or inversion) means two seeds tracked into one root, so
    // the shallower label has no root of its own.
    for (int k = 0; k + 1 < count; ++k) {
        RpmEigenvalue& x = spec.states[static_cast<std::size_t>(k)];
        RpmEigenvalue& y = spec.states[static_cast<std::size_t>(k) + 1];
        if (!x.converged || !y.converged) continue;
        double gap = y.energy.to_double() - x.energy.to_double();
        if (gap <= std::fabs(x.energy.to_double()) * tol_rel * 4.0) {
            y.converged = false;
            y.note = "branch collision: tracked into the same root as nu=" + std::to_string(k);
        }
    }
    for (const RpmEigenvalue& st : spec.states)
        if (!st.converged && !st.note.empty()) diag << "nu=" << st.nu << ": " << st.note << "; ";
    spec.diagnostics = diag.str();
    return spec;
}

RpmEigenvalue rpm_eigenvalue(const Rational& a, const Rational& b, int l, int nu,
                             const Rational& tol, const RpmOptions& opt) {
    if (nu < 0) throw DomainError("rpm_eigenvalue: nu must be non-negative");
    RpmSpectrum spec = rpm_spectrum(a, b, l, nu + 1, tol, opt);
    const RpmEigenvalue& st = spec.states[static_cast<std::size_t>(nu)];
    if (!st.converged)
        throw ConvergenceError("rpm_eigenvalue(nu=" + std::to_string(nu) + "): " +
                               (st.note.empty() ? spec.diagnostics : st.note));
    return st;
}

EnergyCurve energy_curve(const Rational& a, int l, int nu,
                         const std::vector<Rational>& b_grid, const Rational& tol,
                         const RpmOptions& opt) {
    for (std::size_t k = 0; k + 1 < b_grid.size(); ++k)
        if (!(b_grid[k] < b_grid[k + 1]))
            throw DomainError("energy_curve: b grid must be strictly ascending");
    for (const Rational& bk : b_grid)
        if (!(bk < a))
            throw DomainError("energy_curve: bound-state regime requires every b < a");

    EnergyCurve curve;
    curve.l = l;
    curve.nu = nu;
    curve.samples.assign(b_grid.size(), CurveSample{});

    // Grid values that coincide with an exactly-terminating coupling of this
    // branch get the closed-form energy outright: there the Hankel root
    // degenerates into a high-multiplicity cluster and numeric tracking is at
    // its worst, while the answer is exact. Only rational couplings can
    // coincide with a rational grid; b = 0 is the pure-Coulomb member of
    // every branch.
    std::map<Rational, Rational> closed_form;
    {
        const Rational& b_lo = b_grid.front();
        const Rational& b_hi = b_grid.back();
        if (b_lo.sign() <= 0 && b_hi.sign() >= 0)
            closed_form.emplace(Rational(0), coulomb_energy(nu, l, a));
        // A terminating state with nu nodes at coupling b <= 0 is squeezed
        // between the Coulomb levels of strengths a and a - b, which bounds
        // its degree: n + l + 1 <= (a - b)(nu + l + 1)/a. For b > 0 the
        // squeeze flips and forces n <= nu.
        const Rational reach = b_lo.sign() < 0 ? (a - b_lo) * Rational(nu + l + 1) / a
                                               : Rational(nu + l + 1);
        const int n_cap =
            std::max(nu, static_cast<int>(reach.floor().to_double()) - l - 1);
        for (int n = 1; n <= n_cap; ++n) {
            ConditionalSweep sweep = conditional_solutions(n, l, a, opt.precision_bits);
            for (const TerminationSolution& sol : sweep.solutions) {
                if (sol.nu != nu || !sol.b_root.is_rational()) continue;
                const Rational& br = sol.b_root.rat();
                if (br < b_lo || b_hi < br) continue;
                closed_form.emplace(br, sol.energy.rat());
            }
        }
    }

    // Numeric-first elsewhere; the fallback for a failed track turns the
    // exact phase on (for terminating couplings the grid only grazed) and
    // extends the dimension budget (convergence slows near them).
    RpmOptions fast = opt;
    fast.exact_max_dim = 0;
    RpmOptions fallback = opt;
    if (fallback.exact_max_dim < 6) fallback.exact_max_dim = 6;
    fallback.max_dim += 6;

    parallel_for(static_cast<int>(b_grid.size()), opt.exec, [&](int k) {
        const Rational& bk = b_grid[static_cast<std::size_t>(k)];
        CurveSample& s = curve.samples[static_cast<std::size_t>(k)];
        s.b = bk;
        auto hit = closed_form.find(bk);
        if (hit != closed_form.end()) {
            s.converged = true;
            s.exact = true;
            s.energy = Scalar(hit->second);
            return;
        }
        try {
            RpmSpectrum sp = rpm_spectrum(a, bk, l, nu + 1, tol, fast);
            if (!sp.states[static_cast<std::size_t>(nu)].converged)
                sp = rpm_spectrum(a, bk, l, nu + 1, tol, fallback);
            const RpmEigenvalue& st = sp.states[static_cast<std::size_t>(nu)];
            s.converged = st.converged;
            s.exact = st.exact;
            if (st.converged) s.energy = st.energy;
        } catch (const std::exception&) {
            s.converged = false; // an exception must not escape the parallel region
        }
    });

    double last = 0.0;
    bool have_last = false;
    for (const CurveSample& s : curve.samples) {
        if (!s.converged) continue;
        double e = s.energy.to_double();
        if (have_last && e <= last) ++curve.monotone_violations;
        last = e;
        have_last = true;
    }
    return curve;
}

} // namespace ctcoul
