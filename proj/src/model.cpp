#include "ctcoul/model.hpp"

namespace ctcoul {

PhysicalParams::PhysicalParams(Rational V1_, Rational V2_, Rational r0_, Rational m_, Rational hbar_)
    : V1(std::move(V1_)), V2(std::move(V2_)), r0(std::move(r0_)), m(std::move(m_)), hbar(std::move(hbar_)) {
    if (V1.sign() <= 0) throw DomainError("PhysicalParams: V1 must be positive");
    if (r0.sign() <= 0) throw DomainError("PhysicalParams: r0 must be positive");
    if (m.sign() <= 0) throw DomainError("PhysicalParams: m must be positive");
    if (hbar.sign() <= 0) throw DomainError("PhysicalParams: hbar must be positive");
}

DimensionlessParams::DimensionlessParams(Rational a_, Rational b_, int l_)
    : a(std::move(a_)), b(std::move(b_)), l(l_) {
    if (a.sign() <= 0) throw DomainError("DimensionlessParams: a must be positive");
    if (l < 0) throw DomainError("DimensionlessParams: l must be non-negative");
}

CaseIReduction to_case_i(const PhysicalParams& p, int l) {
    Rational hbar2 = p.hbar * p.hbar;
    Rational a = p.m * p.r0 * p.V1 / hbar2;
    Rational b = p.m * p.r0 * p.V2 / hbar2;
    Rational unit = hbar2 / (p.m * p.r0 * p.r0);
    return CaseIReduction{DimensionlessParams(std::move(a), std::move(b), l), std::move(unit)};
}

CaseIIReduction to_case_ii(const PhysicalParams& p) {
    // The constructor already rejects V1 <= 0, but the unit of length blows
    // up at V1 = 0 specifically, so keep the explicit guard.
    if (p.V1.is_zero()) throw DomainError("to_case_ii: V1 must be nonzero");
    Rational hbar2 = p.hbar * p.hbar;
    return CaseIIReduction{
        p.V2 / p.V1,
        p.r0 * p.m * p.V1 / hbar2,
        p.m * p.V1 * p.V1 / hbar2,
    };
}

CaseIIIReduction to_case_iii(const PhysicalParams& p) {
    if (p.V2.is_zero())
        throw DomainError("to_case_iii: V2 = 0 leaves the Case-III length unit undefined");
    Rational hbar2 = p.hbar * p.hbar;
    return CaseIIIReduction{
        p.V1 / p.V2,
        p.r0 * p.m * p.V2 / hbar2,
        p.m * p.V2 * p.V2 / hbar2,
    };
}

double effective_potential(double r, const DimensionlessParams& params) {
    if (!(r > 0.0)) throw DomainError("effective_potential: r must be positive");
    const double l = static_cast<double>(params.l);
    return l * (l + 1.0) / (2.0 * r * r) - params.a.to_double() / r +
           params.b.to_double() / (r + 1.0);
}

} // namespace ctcoul
