#include <doctest.h>

#include <random>
#include <vector>

#include "ctcoul/determinant.hpp"
#include "ctcoul/errors.hpp"
#include "ctcoul/roots.hpp"

using namespace ctcoul;

namespace {

Scalar q(long num, long den = 1) { return Scalar(Rational(num, den)); }

// Reference determinant by cofactor expansion along the first row.
Rational cofactor_det(const Matrix<Rational>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    Rational sum(0);
    for (std::size_t j = 0; j < n; ++j) {
        Matrix<Rational> minor(n - 1, std::vector<Rational>(n - 1));
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t c = 0, cc = 0; c < n; ++c) {
                if (c == j) continue;
                minor[r - 1][cc++] = m[r][c];
            }
        Rational term = m[0][j] * cofactor_det(minor);
        if (j % 2 == 1) term = -term;
        sum += term;
    }
    return sum;
}

} // namespace

TEST_SUITE("determinant") {

TEST_CASE("1x1 matrix yields its sole entry; the linear-in-E case has the expected root") {
    CHECK(hankel_det(Matrix<Scalar>{{q(5, 7)}}).rat() == Rational(5, 7));

    // det[[c0 + c1 E]] with c0 = 1/3, c1 = 2/3 vanishes at E = -1/2.
    Poly f1 = Poly::from_coeffs({q(1, 3), q(2, 3)}, 'E');
    Poly det = hankel_det(Matrix<Poly>{{f1}});
    CHECK(det.degree() == 1);
    IsolationResult roots = isolate_real_roots(det);
    REQUIRE(roots.roots.size() == 1);
    CHECK(rational_root_in_interval(det, roots.roots[0]) == Rational(-1, 2));
}

TEST_CASE("identity and singular matrices") {
    Matrix<Scalar> id = {{q(1), q(0), q(0)}, {q(0), q(1), q(0)}, {q(0), q(0), q(1)}};
    CHECK(hankel_det(id).rat() == Rational(1));

    Matrix<Scalar> singular = {{q(1), q(2)}, {q(2), q(4)}};
    CHECK(hankel_det(singular).is_zero());
}

TEST_CASE("exact elimination handles a vanishing leading minor by pivoting") {
    // Leading entry zero; det = -(1*1) + 0 = ... for [[0,1],[1,0]] det = -1.
    Matrix<Scalar> swap = {{q(0), q(1)}, {q(1), q(0)}};
    CHECK(hankel_det(swap).rat() == Rational(-1));
    // A 3x3 with a zero leading 2x2 minor chain.
    Matrix<Scalar> tricky = {{q(0), q(0), q(1)}, {q(0), q(1), q(0)}, {q(1), q(0), q(0)}};
    CHECK(hankel_det(tricky).rat() == Rational(-1));
}

TEST_CASE("non-square and mixed-field inputs are refused") {
    Matrix<Scalar> wide = {{q(1), q(2), q(3)}, {q(4), q(5), q(6)}};
    CHECK_THROWS_AS(hankel_det(wide), DomainError);
    CHECK_THROWS_AS(hankel_det(Matrix<Scalar>{}), DomainError);
    Matrix<Scalar> mixed = {{q(1), Scalar(Real(2.0))}, {q(3), q(4)}};
    CHECK_THROWS_AS(hankel_det(mixed), FieldMismatchError);
}

TEST_CASE("fraction-free elimination matches cofactor expansion for random D <= 4") {
    std::mt19937 rng(77041u);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 5);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
        Matrix<Rational> ref(n, std::vector<Rational>(n));
        Matrix<Scalar> m(n, std::vector<Scalar>(n, q(0)));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                ref[r][c] = Rational(num(rng), den(rng));
                m[r][c] = Scalar(ref[r][c]);
            }
        CHECK(hankel_det(m).rat() == cofactor_det(ref));
    }
}

TEST_CASE("real-field elimination agrees with the exact value") {
    Matrix<Scalar> exact = {{q(1), q(1, 2), q(1, 3)},
                            {q(1, 2), q(1, 3), q(1, 4)},
                            {q(1, 3), q(1, 4), q(1, 5)}};
    const Rational want = hankel_det(exact).rat(); // 1/2160 for this Hilbert block
    CHECK(want == Rational(1, 2160));

    Matrix<Scalar> real_m(3, std::vector<Scalar>(3, Scalar(Real(0.0, 256))));
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            real_m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                Scalar(Real(Rational(1, r + c + 1), 256));
    Scalar got = hankel_det(real_m);
    CHECK_FALSE(got.is_rational());
    CHECK(got.to_double() == doctest::Approx(want.to_double()).epsilon(1e-12));
}

TEST_CASE("polynomial matrices: exact determinant in the indeterminate") {
    Poly one = Poly::constant(q(1), 'E');
    Poly e = Poly::monomial(q(1), 1, 'E');

    // [[1, E], [E, E^2]] is singular for every E.
    CHECK(hankel_det(Matrix<Poly>{{one, e}, {e, e * e}}).is_zero());

    // [[1+E, 1], [1, 1-E]] has determinant -E^2.
    Poly det = hankel_det(Matrix<Poly>{{one + e, one}, {one, one - e}});
    CHECK(det.degree() == 2);
    CHECK(det.coeff(0).is_zero());
    CHECK(det.coeff(1).is_zero());
    CHECK(det.coeff(2).rat() == Rational(-1));

    // Triangular block: det = product of the diagonal.
    Poly zero(Field::rational, 'E');
    Poly det2 = hankel_det(Matrix<Poly>{{e, one}, {zero, e + one}});
    CHECK((det2 - (e * (e + one))).is_zero());
}

} // TEST_SUITE("determinant")
