import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from sphquad import testfns
from sphquad.errors import DomainError, NonFiniteError
from sphquad.geometry import mesh_ratio, min_angle
from sphquad.harmonics import basis_matrix
from sphquad.rules import (
    QuadratureRule,
    distinct_nodes,
    eq_caps,
    equal_area_points,
    equal_area_rule,
    integrate,
    trapezoidal_rule,
)
from sphquad.sphere import PointSet
from sphquad.transforms import TransformSpec

FOUR_PI = 4 * math.pi


def ones(x):
    return np.ones(len(x))


class TestQuadratureRule:
    def test_weights_read_only_and_non_negative(self):
        r = equal_area_rule(4)
        with pytest.raises(ValueError):
            r.weights[0] = 1.0
        with pytest.raises(DomainError):
            QuadratureRule(PointSet(np.eye(3)), np.array([1.0, -1.0, 1.0]), "file")

    def test_weight_count(self):
        with pytest.raises(ValueError):
            QuadratureRule(PointSet(np.eye(3)), np.ones(2), "file")


class TestIntegrate:
    def test_constant(self, design_rule):
        for rule in (equal_area_rule(37), design_rule(5), trapezoidal_rule(64, TransformSpec.atkinson(2.5))):
            assert integrate(rule, ones) == pytest.approx(FOUR_PI, abs=1e-9)

    def test_design_kills_harmonics(self, design_rule):
        rule = design_rule(5)
        y = basis_matrix(3, rule.points.xyz)
        for k in range(9, 16):
            assert abs(integrate(rule, lambda x, k=k: basis_matrix(3, x)[k])) <= 1e-10
        assert abs(FOUR_PI / rule.n * y[9:].sum(axis=1)).max() <= 1e-10

    def test_f3_equal_area(self):
        est = integrate(equal_area_rule(4000), testfns.get("f3"))
        assert est == pytest.approx(math.pi * math.log(201) / 50, abs=5e-2)

    def test_non_finite_names_node(self):
        rule = equal_area_rule(20)
        with pytest.raises(NonFiniteError) as info:
            with np.errstate(divide="ignore"):
                integrate(rule, lambda x: 1.0 / (x[:, 2] - 1.0))
        assert info.value.node_index == 0
        assert "node 0" in str(info.value)

    def test_zero_weight_nodes_not_evaluated(self):
        calls = []

        def f(x):
            calls.append(len(x))
            return ones(x)

        rule = trapezoidal_rule(4)
        integrate(rule, f)
        assert calls == [rule.n - 2 * (2 * 4 + 1)]


class TestTrapezoidal:
    def test_n2_ones(self):
        assert integrate(trapezoidal_rule(2), ones) == pytest.approx(math.pi**2, rel=1e-15)

    def test_n64_ones(self):
        # the ungraded rule converges only at second order; its exact value is
        # 2 pi (pi/n) cot(pi/2n), 2.5e-3 short of 4 pi at n = 64
        got = integrate(trapezoidal_rule(64), ones)
        assert got == pytest.approx(oracles.TRAP64_ONES, rel=1e-14)
        assert abs(got - FOUR_PI) < 3e-3

    def test_n1_degenerate(self):
        rule = trapezoidal_rule(1)
        assert rule.n == 6
        assert np.all(rule.weights == 0.0)
        assert integrate(rule, ones) == 0.0

    def test_grid_layout_and_duplicates(self):
        n = 5
        rule = trapezoidal_rule(n)
        assert rule.n == (n + 1) * (2 * n + 1)
        assert distinct_nodes(rule).n == (n - 1) * 2 * n + 2
        w = rule.weights.reshape(n + 1, 2 * n + 1)
        np.testing.assert_allclose(w[2, 0], w[2, 3] / 2)
        assert rule.params == {"n": 5, "grading": "none"}

    def test_weights_formula(self):
        n = 6
        h = math.pi / n
        rule = trapezoidal_rule(n, TransformSpec.atkinson(2.0))
        w = rule.weights.reshape(n + 1, 2 * n + 1)
        theta = 2 * h
        _, mu, _ = TransformSpec.atkinson(2.0).colatitude(theta)
        assert w[2, 4] == pytest.approx(h * h * mu, rel=1e-15)
        assert w[2, 0] == pytest.approx(h * h * mu / 2, rel=1e-15)

    @pytest.mark.parametrize("n", [2, 3, 8, 17])
    def test_cos_theta_exact(self, n):
        assert abs(integrate(trapezoidal_rule(n), lambda x: x[:, 2])) <= 1e-12

    @pytest.mark.parametrize(
        "spec", [TransformSpec.atkinson(2.5), TransformSpec.sidi(3), TransformSpec.sidi(5)],
        ids=lambda s: s.label,
    )
    def test_graded_weight_sum_spectral(self, spec):
        # odd 2q (Atkinson) and odd m >= 3 (Sidi) give a smooth periodic
        # density, so n = 64 already sums to 4 pi at rounding level
        assert trapezoidal_rule(64, spec).weight_sum == pytest.approx(FOUR_PI, abs=1e-9)

    @pytest.mark.parametrize(
        "spec",
        [TransformSpec.atkinson(q) for q in (1.5, 2.0, 2.5, 3.0)]
        + [TransformSpec.sidi(m) for m in (1, 2, 3, 5)],
        ids=lambda s: s.label,
    )
    def test_graded_weight_sum_any_grading(self, spec):
        assert trapezoidal_rule(512, spec).weight_sum == pytest.approx(FOUR_PI, abs=1e-9)

    def test_graded_f3_convergence(self):
        spec = TransformSpec.atkinson(2.5)
        err = {n: abs(integrate(trapezoidal_rule(n, spec), testfns.get("f3")) - testfns.exact_value("f3")) for n in (16, 64)}
        assert err[64] <= err[16] / 100


class TestEqualArea:
    def test_n1(self):
        rule = equal_area_rule(1)
        np.testing.assert_array_equal(rule.points.xyz, [[0, 0, 1]])
        assert rule.weights[0] == FOUR_PI

    def test_n2(self):
        rule = equal_area_rule(2)
        np.testing.assert_allclose(rule.points.xyz, [[0, 0, 1], [0, 0, -1]], atol=1e-15)
        np.testing.assert_array_equal(rule.weights, [2 * math.pi, 2 * math.pi])

    def test_n225_quality(self):
        pts = equal_area_points(225)
        assert min_angle(pts) > 0
        assert mesh_ratio(pts, 100) <= 5

    def test_counts_up_to_2000(self):
        for N in range(1, 2001):
            caps, counts = eq_caps(N)
            assert counts.sum() == N
            assert np.all(counts >= 1)
            assert np.all(np.diff(caps) > 0)

    @settings(max_examples=40)
    @given(st.integers(2, 3000))
    def test_distinct_centers(self, N):
        pts = equal_area_points(N)
        assert pts.shape == (N, 3)
        assert min_angle(pts) > 1e-3

    def test_exact_weight_sum(self):
        assert equal_area_rule(999).weight_sum == pytest.approx(FOUR_PI, rel=1e-15)

    def test_metadata(self):
        assert equal_area_rule(10).points.meta["centers"] == "mid-colatitude, mid-azimuth"

    def test_collar_areas_equal(self):
        # every collar holds exactly (its count) regions of area 4 pi / N
        N = 500
        caps, counts = eq_caps(N)
        areas = np.diff(2 * math.pi * (1 - np.cos(np.concatenate([[0.0], caps]))))
        np.testing.assert_allclose(areas / counts, FOUR_PI / N, rtol=1e-12)
