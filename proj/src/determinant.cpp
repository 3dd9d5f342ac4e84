#include "ctcoul/determinant.hpp"

#include <string>

namespace ctcoul {

namespace {

template <class T>
std::size_t check_square(const Matrix<T>& m) {
    const std::size_t n = m.size();
    if (n == 0) throw DomainError("hankel_det: empty matrix");
    for (const auto& row : m)
        if (row.size() != n)
            throw DomainError("hankel_det: matrix is not square (" +
                              std::to_string(n) + " rows, a row of length " +
                              std::to_string(row.size()) + ")");
    return n;
}

// Fraction-free Bareiss elimination. Works over any integral domain with an
// exact division for the accumulated pivot: rationals and polynomials here.
// Row swaps flip the sign; a fully zero pivot column ends it with zero.
template <class T, class DivExact, class IsZero>
T bareiss_det(Matrix<T> a, T one, DivExact div_exact, IsZero is_zero) {
    const std::size_t n = a.size();
    int sign = 1;
    T prev = one;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (is_zero(a[k][k])) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && is_zero(a[swap_row][k])) ++swap_row;
            if (swap_row == n) {
                // Singular: determinant is exactly zero.
                return a[0][0] - a[0][0];
            }
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                T num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                a[i][j] = div_exact(num, prev);
            }
        }
        prev = a[k][k];
    }
    T det = a[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

Scalar det_rational(const Matrix<Scalar>& m) {
    return bareiss_det<Scalar>(
        m, Scalar(Rational(1)),
        [](const Scalar& a, const Scalar& b) { return a / b; },
        [](const Scalar& a) { return a.is_zero(); });
}

Scalar det_real(const Matrix<Scalar>& m) {
    const std::size_t n = m.size();
    mpfr_prec_t prec = m[0][0].real().prec();
    for (const auto& row : m)
        for (const Scalar& e : row)
            if (e.real().prec() < prec) prec = e.real().prec();

    Matrix<Real> a;
    a.reserve(n);
    for (const auto& row : m) {
        std::vector<Real> r;
        r.reserve(n);
        for (const Scalar& e : row) r.push_back(e.real());
        a.push_back(std::move(r));
    }

    // Gaussian elimination with partial pivoting.
    Real det(1.0, prec);
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        Real best = a[k][k].abs();
        for (std::size_t i = k + 1; i < n; ++i) {
            Real cand = a[i][k].abs();
            if (best < cand) { best = cand; piv = i; }
        }
        if (a[piv][k].is_zero()) return Scalar(Real(0.0, prec));
        if (piv != k) { std::swap(a[piv], a[k]); sign = -sign; }
        det = det * a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            Real f = a[i][k] / a[k][k];
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = a[i][j] - f * a[k][j];
        }
    }
    return Scalar(sign < 0 ? -det : det);
}

} // namespace

Scalar hankel_det(const Matrix<Scalar>& m) {
    check_square(m);
    Field f = m[0][0].field();
    for (const auto& row : m)
        for (const Scalar& e : row)
            if (e.field() != f)
                throw FieldMismatchError("hankel_det: mixed coefficient fields in matrix");
    if (m.size() == 1) return m[0][0];
    return f == Field::rational ? det_rational(m) : det_real(m);
}

Poly hankel_det(const Matrix<Poly>& m) {
    check_square(m);
    const char var = m[0][0].var();
    for (const auto& row : m)
        for (const Poly& e : row) {
            if (e.field() != Field::rational)
                throw FieldMismatchError("hankel_det: polynomial matrices need rational coefficients");
            if (e.var() != var)
                throw DomainError("hankel_det: mixed indeterminates in matrix");
        }
    if (m.size() == 1) return m[0][0];
    return bareiss_det<Poly>(
        m, Poly::constant(Scalar(Rational(1)), var),
        [](const Poly& a, const Poly& b) { return Poly::div_exact(a, b); },
        [](const Poly& a) { return a.is_zero(); });
}

} // namespace ctcoul
