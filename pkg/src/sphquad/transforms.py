"""Variable transformations for integrands with a point singularity.

Both transformations act on the colatitude only, ``(theta, phi) ->
(theta_tilde(theta), phi)``, and cluster nodes toward the north pole, which is
then rotated onto the singular point.

Two densities are used throughout:

* the *plane* density ``sin(theta_tilde) * theta_tilde'(theta)``, i.e. the
  area element with respect to ``dtheta dphi``. For the Atkinson map this is
  exactly the printed Jacobian; with ``q = 1`` it reduces to ``sin(theta)``.
* the *surface* density, the plane density divided by ``sin(theta)``, which is
  the factor to apply when integrating against ``d omega`` with an arbitrary
  sphere rule (designs, equal-area points).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NonFiniteError, SingularHitError
from .hypergeom import hyp2f1_series
from .sphere import (
    UnitPoint,
    as_xyz,
    cartesian_to_spherical,
    geodesic_distance,
    rotation_to,
    spherical_to_cartesian,
)

SINGULAR_HIT_TOL = 1e-12


# -- Atkinson ---------------------------------------------------------------

def _atkinson_parts(q, theta):
    theta = np.asarray(theta, dtype=float)
    s = np.abs(np.sin(theta))
    c = np.cos(theta)
    sq = s**q
    d = np.sqrt(c * c + sq * sq)
    return s, c, sq, d


def atkinson_colatitude(q, theta):
    """Colatitude of the Atkinson image: ``atan2(sin^q theta, cos theta)``."""
    _, c, sq, _ = _atkinson_parts(q, theta)
    return np.arctan2(sq, c)


def atkinson_density(q, theta):
    """Jacobian of the Atkinson map with respect to ``dtheta dphi``.

    ``sin^(2q-1) (q cos^2 + sin^2) / (sin^(2q) + cos^2)^(3/2)``.
    """
    s, c, sq, d = _atkinson_parts(q, theta)
    return s ** (2 * q - 1) * (q * c * c + s * s) / d**3


def atkinson_surface_density(q, theta):
    """:func:`atkinson_density` divided by ``sin(theta)``, finite at the poles."""
    s, c, sq, d = _atkinson_parts(q, theta)
    return s ** (2 * q - 2) * (q * c * c + s * s) / d**3


def atkinson_map(q, p):
    """Image of unit point(s) ``p`` under the Atkinson transformation.

    Returns a :class:`UnitPoint` for a single point, else an ``(N, 3)`` array.
    Both poles are fixed and ``q = 1`` is the identity.
    """
    single = isinstance(p, UnitPoint) or np.ndim(p) == 1
    xyz = as_xyz(p)
    # Cartesian form: sin(theta) = rho, cos(theta) = z, so no angles are formed
    rho = np.hypot(xyz[:, 0], xyz[:, 1])
    scale = rho ** (q - 1.0)
    z = xyz[:, 2]
    d = np.sqrt(z * z + (rho * scale) ** 2)
    out = np.column_stack([xyz[:, 0] * scale, xyz[:, 1] * scale, z]) / d[:, None]
    return UnitPoint.from_array(out[0]) if single else out


def atkinson_inverse_colatitude(q, theta_tilde, xtol=1e-15):
    """Invert :func:`atkinson_colatitude` by a bracketing root find."""
    def solve(tt):
        if tt <= 0.0 or tt >= np.pi:
            return float(tt)
        return brentq(lambda th: atkinson_colatitude(q, th) - tt, 0.0, np.pi, xtol=xtol)
    return np.vectorize(solve, otypes=[float])(theta_tilde)


# -- Sidi -------------------------------------------------------------------

def _is_integer(m):
    return float(m) == math.floor(m)


def sidi_theta_one(m):
    """``Theta_m(1) = int_0^1 sin^m(pi u) du = Gamma((m+1)/2) / (sqrt(pi) Gamma(m/2+1))``."""
    return math.exp(math.lgamma((m + 1) / 2.0) - math.lgamma(m / 2.0 + 1.0)) / math.sqrt(math.pi)


def sidi_theta_hypergeometric(m, t):
    """``Theta_m(t) = int_0^t sin^m(pi u) du`` for ``t`` in ``[0, 1/2]``.

    Uses ``(2K)^(m+1) / (pi (m+1)) 2F1((1-m)/2, (1+m)/2; m/2 + 3/2; K^2)``
    with ``K = sin(pi t / 2)``, so the series argument never exceeds 1/2.
    """
    t = np.asarray(t, dtype=float)
    if np.any((t < 0.0) | (t > 0.5)):
        raise DomainError("hypergeometric form needs t in [0, 1/2]")
    k = np.sin(0.5 * np.pi * t)
    f = hyp2f1_series(0.5 - 0.5 * m, 0.5 + 0.5 * m, 0.5 * m + 1.5, k * k)
    out = (2.0 * k) ** (m + 1) / (np.pi * (m + 1)) * f
    return float(out) if np.ndim(out) == 0 else out


def _psi_recursion(m, t):
    m = int(m)
    sp, cp = np.sin(np.pi * t), np.cos(np.pi * t)
    if m % 2 == 0:
        psi, start = t.copy(), 2
    else:
        psi, start = 0.5 * (1.0 - cp), 3
    for k in range(start, m + 1, 2):
        coef = math.exp(math.lgamma(k / 2.0) - math.lgamma((k + 1) / 2.0)) / (2.0 * math.sqrt(math.pi))
        psi = psi - coef * sp ** (k - 1) * cp
    return psi


def _psi_hypergeometric(m, t):
    half = 2.0 * sidi_theta_hypergeometric(m, 0.5)
    lo = t <= 0.5
    out = np.empty_like(t)
    out[lo] = sidi_theta_hypergeometric(m, t[lo]) / half
    out[~lo] = 1.0 - sidi_theta_hypergeometric(m, 1.0 - t[~lo]) / half
    return out


def sidi_psi(m, t, path="auto"):
    """Normalized sin^m transformation ``psi_m(t) = Theta_m(t) / Theta_m(1)``.

    ``path`` is ``"recursion"`` (integer ``m`` only, elementary closed form
    built up two orders at a time from ``psi_0(t) = t`` and
    ``psi_1(t) = (1 - cos(pi t))/2``), ``"hypergeometric"`` (any ``m >= 0``)
    or ``"auto"`` (recursion when ``m`` is an integer).
    """
    if m < 0:
        raise DomainError("grading m must be non-negative")
    t = np.asarray(t, dtype=float)
    if np.any((t < 0.0) | (t > 1.0)) or np.any(np.isnan(t)):
        raise DomainError("psi_m is defined on [0, 1]")
    if path == "auto":
        path = "recursion" if _is_integer(m) else "hypergeometric"
    if path == "recursion":
        if not _is_integer(m):
            raise DomainError("the recursion path needs an integer m")
        out = _psi_recursion(m, np.atleast_1d(t))
    elif path == "hypergeometric":
        out = _psi_hypergeometric(m, np.atleast_1d(t))
    else:
        raise ValueError(f"unknown path {path!r}")
    return float(out[0]) if t.ndim == 0 else out


def sidi_psi_derivative(m, t):
    t = np.asarray(t, dtype=float)
    return np.sin(np.pi * t) ** m / sidi_theta_one(m)


@dataclass(frozen=True)
class PsiEvaluator:
    """``psi_m`` bound to one grading and evaluation path."""

    m: float
    path: str = "auto"

    def __call__(self, t):
        return sidi_psi(self.m, t, self.path)

    def derivative(self, t):
        return sidi_psi_derivative(self.m, t)


def sidi_colatitude_map(m, theta):
    """``(theta_tilde, dtheta_tilde/dtheta)`` with ``theta_tilde = pi psi_m(theta/pi)``."""
    theta = np.asarray(theta, dtype=float)
    u = np.clip(theta / np.pi, 0.0, 1.0)
    tt = np.pi * sidi_psi(m, u)
    dt = sidi_psi_derivative(m, u)
    return tt, dt


# -- ellipsoid --------------------------------------------------------------

@dataclass(frozen=True)
class Ellipsoid:
    """Surface ``(x/a)^2 + (y/b)^2 + (z/c)^2 = 1`` parameterized by the sphere."""

    a: float = 1.0
    b: float = 2.0
    c: float = 3.0

    def __post_init__(self):
        if min(self.a, self.b, self.c) <= 0:
            raise DomainError("semi-axes must be positive")

    @property
    def axes(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c])

    def map(self, p):
        return as_xyz(p) * self.axes

    def jacobian(self, p):
        xyz = as_xyz(p)
        a, b, c = self.a, self.b, self.c
        return np.sqrt((b * c * xyz[:, 0]) ** 2 + (a * c * xyz[:, 1]) ** 2 + (a * b * xyz[:, 2]) ** 2)

    def pullback(self, point) -> UnitPoint:
        """Sphere preimage of a point lying on the ellipsoid."""
        return UnitPoint.from_array(np.asarray(point, dtype=float) / self.axes)


def ellipsoid_map(a, b, c, p):
    return Ellipsoid(a, b, c).map(p)


def ellipsoid_jacobian(a, b, c, p):
    out = Ellipsoid(a, b, c).jacobian(p)
    return float(out[0]) if isinstance(p, UnitPoint) or np.ndim(p) == 1 else out


# -- transform specification and driver -------------------------------------

_KINDS = ("none", "atkinson", "sidi")


@dataclass(frozen=True)
class TransformSpec:
    """Which colatitude transformation to apply and where the singularity is.

    ``singular_point`` lives on the parameter sphere; for a point given on an
    ellipsoid use :meth:`Ellipsoid.pullback` first. ``grading`` is ``q`` for
    Atkinson and ``m`` for Sidi.
    """

    kind: str = "none"
    grading: float = 1.0
    singular_point: UnitPoint | None = None
    surface: Ellipsoid | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown transform {self.kind!r}")
        if self.kind == "atkinson" and self.grading < 1:
            raise DomainError("Atkinson grading q must be >= 1")
        if self.kind == "sidi" and self.grading < 1:
            raise DomainError("Sidi grading m must be >= 1")
        if self.singular_point is not None and not isinstance(self.singular_point, UnitPoint):
            object.__setattr__(self, "singular_point", UnitPoint.from_array(self.singular_point))

    @classmethod
    def none(cls, **kw) -> "TransformSpec":
        return cls("none", 1.0, **kw)

    @classmethod
    def atkinson(cls, q, **kw) -> "TransformSpec":
        return cls("atkinson", float(q), **kw)

    @classmethod
    def sidi(cls, m, **kw) -> "TransformSpec":
        return cls("sidi", float(m), **kw)

    @property
    def label(self) -> str:
        return "none" if self.kind == "none" else f"{self.kind}:{self.grading:g}"

    def colatitude(self, theta):
        """Return ``(theta_tilde, plane_density, surface_density)``."""
        theta = np.asarray(theta, dtype=float)
        if self.kind == "none":
            return theta, np.sin(theta), np.ones_like(theta)
        if self.kind == "atkinson":
            q = self.grading
            return (
                atkinson_colatitude(q, theta),
                atkinson_density(q, theta),
                atkinson_surface_density(q, theta),
            )
        m = self.grading
        tt, dt = sidi_colatitude_map(m, theta)
        stt = np.sin(tt)
        surface = stt * np.abs(np.sin(theta)) ** (m - 1) / sidi_theta_one(m)
        return tt, stt * dt, surface


def transformed_nodes(points, spec: TransformSpec):
    """Map rule nodes through ``spec``: returns ``(sphere_points, surface_density)``."""
    xyz = as_xyz(points)
    theta, phi = cartesian_to_spherical(xyz)
    tt, _, dens = spec.colatitude(theta)
    moved = spherical_to_cartesian(tt, phi)
    if spec.singular_point is not None:
        moved = rotation_to(spec.singular_point).apply(moved)
    return moved, dens


def _sum(values):
    return math.fsum(np.asarray(values, dtype=float).ravel())


def integrate_singular(rule, f: Callable, spec: TransformSpec) -> float:
    """``sum_j w_j f(R T(x_j)) J_T(x_j)`` (times the ellipsoid Jacobian if set).

    ``f`` is vectorized: it receives an ``(M, 3)`` array of points on the
    integration surface. Nodes whose effective weight ``w_j J_T(x_j)`` is
    exactly zero (pole nodes under a grading) are skipped.
    """
    moved, dens = transformed_nodes(rule.points, spec)
    eff = np.asarray(rule.weights) * dens
    active = np.flatnonzero(eff != 0.0)
    moved, eff = moved[active], eff[active]
    if spec.singular_point is not None and active.size:
        # The singularity sits at the north pole of the parameter domain. The
        # test is made there, before grading: a strong grading legitimately
        # squeezes nearby nodes to within 1e-14 of the singularity (with
        # weights to match), and only an exact landing is an error after it.
        north = np.array([0.0, 0.0, 1.0])
        before = geodesic_distance(rule.points.xyz[active], north)
        after = geodesic_distance(moved, spec.singular_point.as_array())
        hit = np.flatnonzero((before < SINGULAR_HIT_TOL) | (after == 0.0))
        if hit.size:
            j = int(active[hit[0]])
            raise SingularHitError(f"node {j} is mapped onto the singular point")
    if spec.surface is not None:
        vals = np.asarray(f(spec.surface.map(moved)), dtype=float) * spec.surface.jacobian(moved)
    else:
        vals = np.asarray(f(moved), dtype=float)
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        j = int(active[bad[0]])
        raise NonFiniteError(
            f"integrand is {vals[bad[0]]} at node {j} (mapped to {moved[bad[0]].tolist()})",
            node_index=j,
            node=moved[bad[0]],
        )
    return _sum(eff * vals)
