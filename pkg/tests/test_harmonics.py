import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphquad.errors import DomainError
from sphquad.harmonics import (
    HarmonicBasis,
    basis_gradients,
    basis_matrix,
    eval_harmonics,
    harmonic_index,
    harmonic_sums,
    legendre_p,
    legendre_p_derivative,
    legendre_series,
    legendre_sum,
)
from sphquad.sphere import UnitPoint, random_points, random_rotation

FOUR_PI = 4.0 * math.pi


def degree_block(y, ell):
    return y[ell * ell:(ell + 1) ** 2]


class TestLegendre:
    def test_examples(self):
        assert legendre_p(0, 0.37) == 1.0
        assert legendre_p(1, 0.5) == 0.5
        assert legendre_p(2, 0.5) == pytest.approx(-0.125, abs=1e-16)

    def test_unit_argument_is_exactly_one(self):
        assert all(legendre_p(ell, 1.0) == 1.0 for ell in range(200))

    def test_matches_numpy_legendre(self):
        x = np.linspace(-1, 1, 41)
        for ell in (3, 7, 20):
            ref = np.polynomial.legendre.legval(x, [0] * ell + [1])
            np.testing.assert_allclose(legendre_p(ell, x), ref, atol=1e-13)

    def test_series_shape(self):
        assert legendre_series(4, np.zeros((2, 3))).shape == (5, 2, 3)

    def test_domain(self):
        with pytest.raises(DomainError):
            legendre_p(2, 1.1)
        legendre_p(2, 1.0 + 5e-13)  # rounding slack is accepted

    def test_derivative_examples(self):
        assert legendre_p_derivative(1, 0.9) == 1.0
        assert legendre_p_derivative(2, 0.5) == pytest.approx(1.5, abs=1e-15)
        h = 1e-6
        fd = (legendre_p(5, 0.3 + h) - legendre_p(5, 0.3 - h)) / (2 * h)
        assert legendre_p_derivative(5, 0.3) == pytest.approx(fd, abs=1e-8)

    def test_derivative_at_endpoint(self):
        for ell in range(8):
            assert legendre_p_derivative(ell, 1.0) == pytest.approx(ell * (ell + 1) / 2, abs=1e-12)

    def test_sum_with_derivative(self):
        c = np.array([0.5, -1.0, 0.25, 2.0])
        x = np.linspace(-0.9, 0.9, 7)
        val, der = legendre_sum(c, x)
        np.testing.assert_allclose(val, np.polynomial.legendre.legval(x, c), atol=1e-14)
        dc = np.polynomial.legendre.legder(c)
        np.testing.assert_allclose(der, np.polynomial.legendre.legval(x, dc), atol=1e-13)


class TestBasis:
    def test_dimension(self):
        assert [HarmonicBasis(t).d_t for t in range(5)] == [1, 4, 9, 16, 25]

    def test_index_layout(self):
        assert harmonic_index(0, 0) == 0
        assert harmonic_index(2, 0) == 4
        assert harmonic_index(2, 1, "c") == 5
        assert harmonic_index(2, 1, "s") == 6

    def test_degree_zero(self):
        y = eval_harmonics(HarmonicBasis(0), UnitPoint(0.6, 0.0, 0.8))
        np.testing.assert_allclose(y, [1 / math.sqrt(FOUR_PI)], rtol=1e-15)

    def test_degree_one_squares(self):
        y = eval_harmonics(HarmonicBasis(1), UnitPoint(0.36, 0.48, 0.8))
        assert np.sum(degree_block(y, 1) ** 2) == pytest.approx(3 / FOUR_PI, rel=1e-14)

    def test_addition_theorem_degree_two(self):
        p, q = random_points(2, rng=11)
        yp = eval_harmonics(HarmonicBasis(2), p)
        yq = eval_harmonics(HarmonicBasis(2), q)
        lhs = degree_block(yp, 2) @ degree_block(yq, 2)
        assert lhs == pytest.approx(5 / FOUR_PI * legendre_p(2, p @ q), abs=1e-12)

    def test_matrix_examples(self):
        pts = random_points(3, rng=1)
        np.testing.assert_allclose(basis_matrix(0, pts), np.full((1, 3), 1 / math.sqrt(FOUR_PI)))
        col = basis_matrix(1, [[0.0, 0.0, 1.0]])[:, 0]
        assert np.sum(col[1:] ** 2) == pytest.approx(3 / FOUR_PI, rel=1e-14)
        pts = random_points(9, rng=2)
        y = basis_matrix(HarmonicBasis(2), pts)
        for j in range(9):
            np.testing.assert_allclose(y[:, j], eval_harmonics(HarmonicBasis(2), pts[j]), atol=1e-15)

    def test_addition_theorem_to_degree_ten(self):
        pts = random_points(40, rng=5)
        y = basis_matrix(10, pts)
        dots = np.clip(pts @ pts.T, -1, 1)
        for ell in range(11):
            blk = degree_block(y, ell)
            err = blk.T @ blk - (2 * ell + 1) / FOUR_PI * legendre_p(ell, dots)
            assert np.max(np.abs(err)) <= 1e-11

    def test_addition_theorem_high_degree(self):
        pts = random_points(5, rng=9)
        y = basis_matrix(200, pts)
        blk = degree_block(y, 200)
        dots = np.clip(pts @ pts.T, -1, 1)
        err = blk.T @ blk - 401 / FOUR_PI * legendre_p(200, dots)
        assert np.max(np.abs(err)) <= 1e-11

    def test_discrete_orthonormality_on_design(self, design):
        # a 10-design integrates products of degree <= 5 harmonics exactly
        pts = design(10).points.xyz
        y = basis_matrix(5, pts)
        gram = FOUR_PI / pts.shape[0] * y @ y.T
        np.testing.assert_allclose(gram, np.eye(36), atol=1e-10)

    def test_sum_of_squares_constant(self):
        pts = random_points(100, rng=4)
        y = basis_matrix(6, pts)
        for ell in range(7):
            np.testing.assert_allclose(
                np.sum(degree_block(y, ell) ** 2, axis=0), (2 * ell + 1) / FOUR_PI, rtol=1e-12
            )

    def test_harmonic_sums_match_matrix(self):
        pts = random_points(30, rng=8)
        np.testing.assert_allclose(harmonic_sums(7, pts), basis_matrix(7, pts).sum(axis=1), atol=1e-13)

    def test_gradients_match_finite_differences(self):
        pts = random_points(4, rng=6)
        g = basis_gradients(6, pts)
        h = 1e-6
        for axis in range(3):
            d = np.zeros(3)
            d[axis] = h
            # tangential derivative: extend radially (degree 0 homogeneous) via normalization
            fp = basis_matrix(6, (pts + d) / np.linalg.norm(pts + d, axis=1)[:, None])
            fm = basis_matrix(6, (pts - d) / np.linalg.norm(pts - d, axis=1)[:, None])
            fd = (fp - fm) / (2 * h)
            np.testing.assert_allclose(g[:, :, axis], fd, atol=1e-6)

    @settings(max_examples=25)
    @given(st.integers(0, 2**32 - 1))
    def test_rotation_invariance_of_degree_blocks(self, seed):
        pts = random_points(6, rng=seed)
        r = random_rotation(seed + 1)
        y0 = basis_matrix(5, pts)
        y1 = basis_matrix(5, r.apply(pts))
        for ell in range(6):
            b0, b1 = degree_block(y0, ell), degree_block(y1, ell)
            np.testing.assert_allclose(b0.T @ b0, b1.T @ b1, atol=1e-12)
