#pragma once

#include <vector>

#include "ctcoul/poly.hpp"

namespace ctcoul {

template <class T>
using Matrix = std::vector<std::vector<T>>;

// Determinant of a square matrix of scalars. Rational entries take the
// fraction-free Bareiss route (exact, with row pivoting when a leading
// minor vanishes); real entries take partial-pivot Gaussian elimination at
// the matrix's minimum precision. A 1x1 matrix yields its sole entry;
// non-square input is a DomainError. Mixed-field matrices are refused.
Scalar hankel_det(const Matrix<Scalar>& m);

// Determinant of a matrix of exact polynomials (all in one indeterminate,
// rational coefficients): Bareiss with exact polynomial division, so the
// result is the determinant polynomial itself. This is what turns a Hankel
// matrix of series coefficients in E into a characteristic polynomial in E.
Poly hankel_det(const Matrix<Poly>& m);

} // namespace ctcoul
