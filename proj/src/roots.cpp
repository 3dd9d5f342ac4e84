#include "ctcoul/roots.hpp"

#include <algorithm>
#include <sstream>

namespace ctcoul {

namespace {

// Divide by the positive rational content only. Unlike primitive_part this
// never flips the sign, which matters inside Sturm chains where relative
// signs carry the information.
Poly normalize_keep_sign(const Poly& p) {
    if (p.is_zero()) return p;
    Rational den_lcm(1);
    for (const Scalar& c : p.coeffs())
        if (!c.is_zero()) den_lcm = rational_denominator_lcm(den_lcm, c.rat());
    Rational num_gcd(0);
    std::vector<Scalar> scaled;
    scaled.reserve(p.coeffs().size());
    for (const Scalar& c : p.coeffs()) {
        Rational v = c.rat() * den_lcm;
        num_gcd = rational_numerator_gcd(num_gcd, v);
        scaled.emplace_back(std::move(v));
    }
    if (num_gcd.is_zero()) num_gcd = Rational(1);
    for (Scalar& c : scaled) c = Scalar(c.rat() / num_gcd.abs());
    return Poly::from_coeffs(std::move(scaled), p.var());
}

std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain;
    chain.push_back(normalize_keep_sign(p));
    Poly d = p.derivative();
    if (d.is_zero()) return chain;
    chain.push_back(normalize_keep_sign(d));
    while (true) {
        const Poly& s0 = chain[chain.size() - 2];
        const Poly& s1 = chain[chain.size() - 1];
        Poly rem = Poly::divmod(s0, s1).second;
        if (rem.is_zero()) break;
        chain.push_back(normalize_keep_sign(-rem));
        if (chain.back().degree() == 0) break;
    }
    return chain;
}

int sign_variations_at(const std::vector<Poly>& chain, const Rational& x) {
    int vars = 0, last = 0;
    Scalar sx{x};
    for (const Poly& s : chain) {
        int sg = s.eval(sx).sign();
        if (sg == 0) continue;
        if (last != 0 && sg != last) ++vars;
        last = sg;
    }
    return vars;
}

// Distinct roots in the open interval (lo, hi); endpoints must not be roots
// of the chain's base polynomial for the count to be open-interval exact.
int count_open(const std::vector<Poly>& chain, const Rational& lo, const Rational& hi) {
    int n = sign_variations_at(chain, lo) - sign_variations_at(chain, hi);
    if (chain.front().eval(Scalar(hi)).is_zero()) --n; // V counts (lo, hi]
    return n;
}

// Strict upper bound on the absolute value of every root, rounded up to a
// power of two: 2^ceil(log2(1 + max |c_j| / |c_n|)).
Rational root_bound(const Poly& p) {
    Rational m(0);
    const Rational lead = p.leading().rat().abs();
    for (int j = 0; j < p.degree(); ++j) {
        Rational v = p.coeff(j).rat().abs() / lead;
        if (v > m) m = v;
    }
    Rational bound = Rational(1) + m;
    long e = bound.mag_exponent();
    Rational two_e(1);
    for (long k = 0; k < e + 1; ++k) two_e *= Rational(2);
    return two_e;
}

// Recursive Sturm bisection on a square-free polynomial; f(lo), f(hi) != 0.
void isolate_on(const Poly& f, const std::vector<Poly>& chain,
                const Rational& lo, const Rational& hi,
                std::vector<RootInterval>& out) {
    int k = count_open(chain, lo, hi);
    if (k == 0) return;
    if (k == 1) {
        out.push_back(RootInterval{lo, hi, 1});
        return;
    }
    Rational m = (lo + hi) / Rational(2);
    if (f.eval(Scalar(m)).is_zero()) {
        out.push_back(RootInterval{m, m, 1});
        isolate_on(f, chain, lo, m, out);
        isolate_on(f, chain, m, hi, out);
        return;
    }
    isolate_on(f, chain, lo, m, out);
    isolate_on(f, chain, m, hi, out);
}

// One bisection step that keeps the interval isolating. Interval must have
// a sign change (non-exact).
RootInterval bisect_once(const Poly& f, const RootInterval& iv) {
    Rational m = iv.mid();
    Scalar fm = f.eval(Scalar(m));
    if (fm.is_zero()) return RootInterval{m, m, iv.multiplicity};
    if (f.eval(Scalar(iv.lo)).sign() != fm.sign())
        return RootInterval{iv.lo, m, iv.multiplicity};
    return RootInterval{m, iv.hi, iv.multiplicity};
}

struct FactorRoots {
    Poly factor;
    std::vector<RootInterval> roots;
};

// Shared isolation pipeline: Yun factors, per-factor Sturm isolation on the
// given range, then cross-factor disjointness by bisection (roots of
// distinct square-free factors are distinct, so this terminates).
IsolationResult isolate_common(const Poly& p, bool positive_only) {
    if (p.field() != Field::rational)
        throw FieldMismatchError("isolate: rational coefficients required");
    if (p.is_zero()) throw DomainError("isolate: zero polynomial");

    IsolationResult res;
    res.nonreal_count = 0;
    if (p.degree() == 0) return res;

    auto factors = squarefree_factors(p);
    std::vector<FactorRoots> per_factor;
    int real_with_mult = 0;

    for (auto& [f, mult] : factors) {
        Poly g = f;
        // Strip roots at zero; they are never "positive" and would break the
        // (0, B) endpoint assumption.
        int zeros_at_origin = 0;
        while (!g.is_zero() && g.coeff(0).is_zero()) {
            std::vector<Scalar> shifted(g.coeffs().begin() + 1, g.coeffs().end());
            g = Poly::from_coeffs(std::move(shifted), g.var());
            ++zeros_at_origin;
        }
        if (!positive_only && zeros_at_origin > 0) {
            per_factor.push_back({g, {RootInterval{Rational(0), Rational(0), mult}}});
            real_with_mult += mult;
        } else {
            per_factor.push_back({g, {}});
        }
        if (g.degree() < 1) continue;

        auto chain = sturm_chain(g);
        Rational B = root_bound(g);
        std::vector<RootInterval> found;
        if (positive_only) {
            isolate_on(g, chain, Rational(0), B, found);
        } else {
            isolate_on(g, chain, -B, B, found);
        }
        for (RootInterval& iv : found) {
            iv.multiplicity = mult;
            real_with_mult += mult;
        }
        auto& dst = per_factor.back().roots;
        dst.insert(dst.end(), found.begin(), found.end());
    }

    // Gather with factor indices so refinement can use the right polynomial.
    struct Tagged { RootInterval iv; std::size_t fi; };
    std::vector<Tagged> all;
    for (std::size_t fi = 0; fi < per_factor.size(); ++fi)
        for (const RootInterval& iv : per_factor[fi].roots)
            all.push_back({iv, fi});
    std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) {
        return a.iv.lo < b.iv.lo || (a.iv.lo == b.iv.lo && a.iv.hi < b.iv.hi);
    });

    // Disjointness across factors: bisect any overlapping pair until the
    // intervals separate. Within one factor the Sturm isolation already
    // produced disjoint intervals.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < all.size(); ++i) {
            Tagged& a = all[i];
            Tagged& b = all[i + 1];
            bool overlap = !(a.iv.hi <= b.iv.lo) && !(a.iv.exact() && b.iv.exact());
            if (!overlap) continue;
            if (!a.iv.exact()) a.iv = bisect_once(per_factor[a.fi].factor, a.iv);
            if (!b.iv.exact()) b.iv = bisect_once(per_factor[b.fi].factor, b.iv);
            changed = true;
        }
        if (changed)
            std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) {
                return a.iv.lo < b.iv.lo || (a.iv.lo == b.iv.lo && a.iv.hi < b.iv.hi);
            });
    }

    // A different root of p can sit exactly on an interval endpoint (the
    // bisection splits at roots and reuses them as range ends). Shrink until
    // every non-exact interval has non-root endpoints, so downstream
    // refinement can trust endpoint signs.
    for (Tagged& t : all) {
        while (!t.iv.exact() && (p.eval(Scalar(t.iv.lo)).is_zero() ||
                                 p.eval(Scalar(t.iv.hi)).is_zero()))
            t.iv = bisect_once(per_factor[t.fi].factor, t.iv);
    }

    for (const Tagged& t : all) res.roots.push_back(t.iv);
    res.real_count = real_with_mult;
    res.nonreal_count = 0; // callers fill this in where it is meaningful
    return res;
}

} // namespace

std::vector<std::pair<Poly, int>> squarefree_factors(const Poly& p) {
    if (p.field() != Field::rational)
        throw FieldMismatchError("squarefree_factors: rational coefficients required");
    if (p.is_zero()) throw DomainError("squarefree_factors: zero polynomial");
    std::vector<std::pair<Poly, int>> out;
    if (p.degree() < 1) return out;

    // Yun's algorithm over Q with primitive normalization at each step.
    Poly a = primitive_part(p);
    Poly g = poly_gcd(a, a.derivative());
    if (g.degree() == 0) {
        out.emplace_back(a, 1);
        return out;
    }
    Poly w = Poly::div_exact(a, g);
    Poly y = Poly::div_exact(a.derivative(), g);
    Poly z = y - w.derivative();
    int i = 1;
    while (w.degree() > 0) {
        Poly fi = poly_gcd(w, z);
        if (fi.degree() > 0) out.emplace_back(fi, i);
        w = Poly::div_exact(w, fi);
        y = Poly::div_exact(z, fi);
        z = y - w.derivative();
        ++i;
    }
    return out;
}

IsolationResult isolate_real_roots(const Poly& p) {
    IsolationResult r = isolate_common(p, false);
    r.nonreal_count = p.degree() - r.real_count;
    return r;
}

IsolationResult isolate_positive_roots(const Poly& p) {
    IsolationResult r = isolate_common(p, true);
    // Balance against the degree is not meaningful for a half-line count;
    // report only what was found.
    r.nonreal_count = -1;
    return r;
}

RootInterval refine_interval(const Poly& p, RootInterval iv, const Rational& width_tol) {
    if (p.field() != Field::rational)
        throw FieldMismatchError("refine_interval: rational coefficients required");
    if (width_tol.sign() <= 0) throw DomainError("refine_interval: tolerance must be positive");
    if (iv.exact()) return iv;
    if (iv.hi < iv.lo) throw DomainError("refine_interval: inverted interval");

    // Even-multiplicity roots leave p without a sign change across the
    // interval; bisection then needs the square-free part, whose simple
    // root at the same location does change sign.
    Poly work = p;
    Scalar flo = work.eval(Scalar(iv.lo));
    Scalar fhi = work.eval(Scalar(iv.hi));
    // An endpoint root would belong to a *different* root of p (the isolated
    // one is interior); treating it as the answer silently corrupts results.
    if (flo.is_zero() || fhi.is_zero())
        throw DomainError("refine_interval: endpoint is a root; "
                          "interval does not satisfy the isolation contract");
    if (flo.sign() == fhi.sign()) {
        Poly g = poly_gcd(work, work.derivative());
        if (g.degree() < 1)
            throw DomainError("refine_interval: no sign change; interval does not isolate a root");
        work = Poly::div_exact(primitive_part(work), g);
        flo = work.eval(Scalar(iv.lo));
        fhi = work.eval(Scalar(iv.hi));
        if (flo.sign() == fhi.sign())
            throw DomainError("refine_interval: no sign change even after square-free reduction; "
                              "interval does not isolate a root");
    }

    const Poly& pref = work;
    const Poly dp = pref.derivative();
    while (iv.width() > width_tol) {
        // Guaranteed halving first...
        iv = bisect_once(pref, iv);
        if (iv.exact()) return iv;
        // ...then a Newton attempt from the midpoint, rounded to a dyadic
        // point so denominators stay small. Accept only if it stays inside.
        Rational m = iv.mid();
        Scalar fm = pref.eval(Scalar(m));
        if (fm.is_zero()) return RootInterval{m, m, iv.multiplicity};
        Scalar dm = dp.eval(Scalar(m));
        if (dm.is_zero()) continue;
        Rational step = fm.rat() / dm.rat();
        Rational cand = m - step;
        if (!(cand > iv.lo && cand < iv.hi)) continue;
        // Round toward a grid of 2^10 cells across the bracket.
        Rational w = iv.width();
        Rational cell = w / Rational(1024);
        Rational snapped = iv.lo + (((cand - iv.lo) / cell).floor() * cell);
        if (!(snapped > iv.lo && snapped < iv.hi)) continue;
        Scalar fs = pref.eval(Scalar(snapped));
        if (fs.is_zero()) return RootInterval{snapped, snapped, iv.multiplicity};
        if (fs.sign() == pref.eval(Scalar(iv.lo)).sign())
            iv = RootInterval{snapped, iv.hi, iv.multiplicity};
        else
            iv = RootInterval{iv.lo, snapped, iv.multiplicity};
    }
    return iv;
}

Scalar refine_root(const Poly& p, const RootInterval& iv, const Rational& tol) {
    RootInterval r = refine_interval(p, iv, tol);
    if (r.exact()) return Scalar(r.lo);
    return Scalar(r.mid());
}

Rational simplest_rational_in(const Rational& lo, const Rational& hi) {
    if (hi < lo) throw DomainError("simplest_rational_in: inverted interval");
    if (lo.sign() <= 0 && hi.sign() >= 0) return Rational(0);
    if (hi.sign() < 0) return -simplest_rational_in(-hi, -lo);
    // 0 < lo <= hi: continued-fraction descent.
    Rational fl = lo.floor();
    Rational candidate_int = (lo.is_integer()) ? lo : fl + Rational(1);
    if (candidate_int <= hi) return candidate_int; // an integer fits
    // Same integer part on both ends; recurse on the fractional inverses.
    Rational inner = simplest_rational_in(Rational(1) / (hi - fl), Rational(1) / (lo - fl));
    return fl + Rational(1) / inner;
}

std::optional<Rational> rational_root_in_interval(const Poly& p, const RootInterval& iv,
                                                  int den_bits) {
    if (iv.exact()) {
        if (p.eval(Scalar(iv.lo)).is_zero()) return iv.lo;
        return std::nullopt;
    }
    RootInterval cur = iv;
    // Width < 1/(2 q^2) pins a rational root of denominator q as the unique
    // simplest rational in the bracket; push well past the cap.
    Rational target(1);
    for (int k = 0; k < 2 * den_bits + 2; ++k) target *= Rational(1, 2);
    for (int round = 0; round < 3; ++round) {
        cur = refine_interval(p, cur, target);
        if (cur.exact()) return cur.lo;
        Rational s = simplest_rational_in(cur.lo, cur.hi);
        if (p.eval(Scalar(s)).is_zero()) return s;
        target *= target; // much tighter next round
    }
    return std::nullopt;
}

int count_positive_roots_real(const Poly& p_real) {
    if (p_real.field() != Field::real)
        throw FieldMismatchError("count_positive_roots_real: real coefficients required");
    if (p_real.is_zero()) throw DomainError("count_positive_roots_real: zero polynomial");
    if (p_real.degree() == 0) return 0;

    // Working precision: the smallest among the coefficients.
    mpfr_prec_t prec = p_real.coeffs().front().real().prec();
    for (const Scalar& c : p_real.coeffs())
        if (c.real().prec() < prec) prec = c.real().prec();

    // Relative truncation threshold: coefficients this far below the largest
    // one in a remainder are numerical noise, not structure.
    Real eps(1.0, prec);
    for (mpfr_prec_t k = 0; k < prec / 2; ++k) eps = eps * Real(0.5, prec);

    auto truncate = [&](const Poly& q) -> Poly {
        if (q.is_zero()) return q;
        Real maxc(0.0, prec);
        for (const Scalar& c : q.coeffs()) {
            Real a = c.real().abs();
            if (maxc < a) maxc = a;
        }
        if (maxc.is_zero()) return Poly(Field::real, q.var());
        Real thr = maxc * eps;
        std::vector<Scalar> cs;
        cs.reserve(q.coeffs().size());
        bool all_zero = true;
        for (const Scalar& c : q.coeffs()) {
            if (c.real().abs() < thr) {
                cs.emplace_back(Real(0.0, c.real().prec()));
            } else {
                cs.push_back(c);
                all_zero = false;
            }
        }
        if (all_zero) return Poly(Field::real, q.var());
        return Poly::from_coeffs(std::move(cs), q.var());
    };

    std::vector<Poly> chain;
    chain.push_back(p_real);
    Poly d = p_real.derivative();
    if (d.is_zero()) return 0;
    chain.push_back(d);
    while (chain.back().degree() > 0) {
        Poly rem = truncate(Poly::divmod(chain[chain.size() - 2], chain.back()).second);
        if (rem.is_zero()) break;
        chain.push_back(-rem);
    }

    auto vars_at_zero = [&]() {
        int vars = 0, last = 0;
        for (const Poly& s : chain) {
            if (s.is_zero()) continue;
            int sg = s.coeff(0).sign();
            if (sg == 0) continue;
            if (last != 0 && sg != last) ++vars;
            last = sg;
        }
        return vars;
    };
    auto vars_at_pinf = [&]() {
        int vars = 0, last = 0;
        for (const Poly& s : chain) {
            if (s.is_zero()) continue;
            int sg = s.leading().sign();
            if (sg == 0) continue;
            if (last != 0 && sg != last) ++vars;
            last = sg;
        }
        return vars;
    };
    return vars_at_zero() - vars_at_pinf();
}

} // namespace ctcoul
