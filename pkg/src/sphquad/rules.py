"""Positive-weight quadrature rules on the sphere.

Three families share :class:`QuadratureRule`: the bivariate trapezoidal rule
on a longitude-latitude grid (optionally graded toward the poles), the
recursive zonal equal-area partition rule and spherical t-designs (built in
:mod:`sphquad.designs`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, NonFiniteError
from .sphere import PointSet, spherical_to_cartesian
from .transforms import TransformSpec

FOUR_PI = 4.0 * np.pi


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes, weights and a description of how they were made.

    ``kind`` is one of ``"trapezoidal"``, ``"equal_area"``, ``"design"`` or
    ``"file"``; ``params`` carries the generating parameters (``n`` and the
    grading for trapezoidal rules, ``N`` for equal-area, ``t`` for designs).
    Weights are non-negative; only trapezoidal pole nodes carry zero weight.
    """

    points: PointSet
    weights: np.ndarray
    kind: str
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (self.points.n,):
            raise ValueError("need exactly one weight per node")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise DomainError("weights must be finite and non-negative")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.points.n

    @property
    def weight_sum(self) -> float:
        return math.fsum(self.weights)

    @classmethod
    def equal_weight(cls, points: PointSet, kind="design", **params) -> "QuadratureRule":
        n = points.n
        return cls(points, np.full(n, FOUR_PI / n), kind, params)


def integrate(rule: QuadratureRule, f: Callable) -> float:
    """``Q_N(f) = sum_j w_j f(x_j)`` with an exactly rounded sum.

    ``f`` is vectorized over an ``(N, 3)`` array of nodes. A non-finite value
    at a node with positive weight raises :class:`NonFiniteError`; zero-weight
    nodes are never evaluated.
    """
    active = np.flatnonzero(rule.weights > 0)
    xyz = rule.points.xyz[active]
    vals = np.asarray(f(xyz), dtype=float).reshape(-1)
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        j = int(active[bad[0]])
        raise NonFiniteError(
            f"integrand is {vals[bad[0]]} at node {j} {xyz[bad[0]].tolist()}",
            node_index=j,
            node=xyz[bad[0]],
        )
    return math.fsum(rule.weights[active] * vals)


# -- bivariate trapezoidal rule ----------------------------------------------

def _double_prime(count):
    c = np.ones(count)
    c[0] = c[-1] = 0.5
    return c


def trapezoidal_rule(n: int, grading: TransformSpec | None = None) -> QuadratureRule:
    """Double-prime trapezoidal rule on the ``(n+1) x (2n+1)`` grid.

    Nodes sit at ``theta_i = i pi/n`` and ``phi_j = j pi/n`` before grading;
    the graded rule places node ``(i, j)`` at ``T(theta_i, phi_j)`` with weight
    ``(pi/n)^2 c_i c_j mu(theta_i)`` where ``mu`` is the plane density of the
    transformation (``sin`` when ungraded). Pole copies and the ``phi = 2 pi``
    seam are kept, so ``N = (n+1)(2n+1)``.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    grading = grading or TransformSpec.none()
    h = np.pi / n
    theta = h * np.arange(n + 1)
    phi = h * np.arange(2 * n + 1)
    tt, mu, _ = grading.colatitude(theta)
    # sin(pi) is 1.2e-16, not zero; the grid endpoints are exact poles
    mu = np.where((np.arange(n + 1) == 0) | (np.arange(n + 1) == n), 0.0, mu)
    ci, cj = _double_prime(n + 1), _double_prime(2 * n + 1)
    w = h * h * np.outer(ci * mu, cj)
    T, P = np.meshgrid(tt, phi, indexing="ij")
    xyz = spherical_to_cartesian(T, P).reshape(-1, 3)
    pts = PointSet(xyz, "trapezoidal", None, {"n": n, "grading": grading.label})
    return QuadratureRule(pts, w.ravel(), "trapezoidal", {"n": n, "grading": grading.label})


def distinct_nodes(rule: QuadratureRule, tol=1e-14) -> PointSet:
    """Nodes with duplicates (trapezoidal poles and seam) removed, order kept."""
    xyz = rule.points.xyz
    keys = np.round(xyz / max(tol, 1e-14) * 1e-2).astype(np.int64)
    _, first = np.unique(keys, axis=0, return_index=True)
    keep = np.sort(first)
    return PointSet(xyz[keep], rule.points.kind, rule.points.t, dict(rule.points.meta))


# -- recursive zonal equal-area partition ------------------------------------

def _cap_area(colat):
    return 2.0 * np.pi * (1.0 - np.cos(colat))


def _cap_colat(area):
    return 2.0 * np.arcsin(np.sqrt(np.clip(area / FOUR_PI, 0.0, 1.0)))


def eq_caps(N: int):
    """Cap colatitudes and region counts of the equal-area partition.

    Returns ``(caps, counts)``: ``caps[k]`` is the colatitude of the bottom of
    zone ``k`` (the north cap is zone 0, the south cap the last zone, collars in
    between) and ``counts[k]`` the number of regions in that zone.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    if N == 1:
        return np.array([np.pi]), np.array([1])
    region = FOUR_PI / N
    polar = _cap_colat(region)
    ideal_angle = math.sqrt(region)
    n_collars = 0
    if N > 2:
        n_collars = max(1, int(round((np.pi - 2.0 * polar) / ideal_angle)))
    ideal = np.zeros(n_collars + 2)
    ideal[0] = ideal[-1] = 1.0
    if n_collars:
        fit = (np.pi - 2.0 * polar) / n_collars
        for k in range(1, n_collars + 1):
            top = polar + (k - 1) * fit
            bot = polar + k * fit
            ideal[k] = (_cap_area(bot) - _cap_area(top)) / region
    counts = np.zeros(n_collars + 2, dtype=int)
    carry = 0.0
    for k, r in enumerate(ideal):
        counts[k] = int(math.floor(r + carry + 0.5))
        carry += r - counts[k]
    caps = np.empty(n_collars + 2)
    caps[0] = polar
    total = 1
    for k in range(1, n_collars + 1):
        total += counts[k]
        caps[k] = _cap_colat(total * region)
    caps[-1] = np.pi
    return caps, counts


def _circle_offset(n_top, n_bot):
    # rotates each collar against the next to stagger the cell centers
    return (1.0 / n_bot - 1.0 / n_top) / 2.0 + math.gcd(n_top, n_bot) / (2.0 * n_top * n_bot)


def equal_area_points(N: int) -> np.ndarray:
    """Centers of the ``N`` cells of the recursive zonal equal-area partition.

    Cap cells are centered at the poles; a collar cell's center has the mean
    colatitude of its collar and the mid azimuth of its cell.
    """
    caps, counts = eq_caps(N)
    if N == 1:
        return np.array([[0.0, 0.0, 1.0]])
    theta = np.empty(N)
    phi = np.empty(N)
    theta[0], phi[0] = 0.0, 0.0
    pos = 1
    offset = 0.0
    n_collars = len(counts) - 2
    for k in range(1, n_collars + 1):
        top, bot = caps[k - 1], caps[k]
        cnt = int(counts[k])
        az = (np.arange(cnt) + 0.5) * 2.0 * np.pi / cnt
        phi[pos:pos + cnt] = np.mod(az + 2.0 * np.pi * offset, 2.0 * np.pi)
        theta[pos:pos + cnt] = 0.5 * (top + bot)
        offset += _circle_offset(cnt, int(counts[k + 1]))
        offset -= math.floor(offset)
        pos += cnt
    theta[pos], phi[pos] = np.pi, 0.0
    return spherical_to_cartesian(theta, phi)


def equal_area_rule(N: int) -> QuadratureRule:
    """Equal-weight rule ``(4 pi / N) sum f(x_i)`` on equal-area cell centers."""
    pts = PointSet(
        equal_area_points(N),
        "equal_area",
        None,
        {"N": N, "centers": "mid-colatitude, mid-azimuth"},
    )
    return QuadratureRule.equal_weight(pts, "equal_area", N=N)
