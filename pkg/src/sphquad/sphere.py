"""Points on the unit sphere, coordinates, distances and pole alignment.

Coordinate convention: ``theta`` is the colatitude in ``[0, pi]`` measured
from the north pole ``(0, 0, 1)`` and ``phi`` the azimuth in ``[0, 2*pi)``.
The azimuth of either pole is canonicalized to 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import NotUnitError

#: Triples within this distance of unit length are silently renormalized.
UNIT_TOLERANCE = 1e-8

TWO_PI = 2.0 * np.pi


def normalize_rows(xyz, tol=UNIT_TOLERANCE):
    """Return ``xyz`` (shape ``(N, 3)``) with every row scaled to unit length.

    Rows whose norm differs from 1 by more than ``tol`` raise
    :class:`NotUnitError`; its ``line`` attribute is the 0-based row index.
    """
    xyz = np.atleast_2d(np.asarray(xyz, dtype=float))
    if xyz.shape[-1] != 3:
        raise ValueError(f"expected Cartesian triples, got shape {xyz.shape}")
    norms = np.linalg.norm(xyz, axis=1)
    bad = np.flatnonzero(~(np.abs(norms - 1.0) <= tol))
    if bad.size:
        i = int(bad[0])
        raise NotUnitError(
            f"row {i} has norm {norms[i]!r}, not within {tol:g} of 1", line=i
        )
    return xyz / norms[:, None]


def cartesian_to_spherical(xyz):
    """Vectorized :func:`to_spherical`: returns ``(theta, phi)`` arrays."""
    xyz = np.asarray(xyz, dtype=float)
    x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
    theta = np.arctan2(np.hypot(x, y), z)  # accurate near the poles, unlike arccos(z)
    phi = np.arctan2(y, x)
    phi = np.where(phi < 0.0, phi + TWO_PI, phi)
    # atan2 of (-0., negative) gives -pi which wraps to exactly 2*pi
    phi = np.where(phi >= TWO_PI, 0.0, phi)
    pole = (x == 0.0) & (y == 0.0)
    phi = np.where(pole, 0.0, phi)
    return theta, phi


def spherical_to_cartesian(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def chord_squared(dots):
    """Squared chord length ``|x - y|**2 = 2 - 2 x.y``, clamped to ``[0, 4]``."""
    return np.clip(2.0 - 2.0 * np.asarray(dots, dtype=float), 0.0, 4.0)


@dataclass(frozen=True)
class UnitPoint:
    """A point of the unit sphere in Cartesian form."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        v = normalize_rows([[self.x, self.y, self.z]])[0]
        object.__setattr__(self, "x", float(v[0]))
        object.__setattr__(self, "y", float(v[1]))
        object.__setattr__(self, "z", float(v[2]))

    @classmethod
    def from_array(cls, v) -> "UnitPoint":
        v = np.asarray(v, dtype=float).ravel()
        return cls(v[0], v[1], v[2])

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __array__(self, dtype=None, copy=None):
        return self.as_array() if dtype is None else self.as_array().astype(dtype)

    def __neg__(self) -> "UnitPoint":
        return UnitPoint(-self.x, -self.y, -self.z)


@dataclass(frozen=True)
class SphericalCoord:
    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"colatitude {self.theta} outside [0, pi]")
        if not 0.0 <= self.phi < TWO_PI:
            raise ValueError(f"azimuth {self.phi} outside [0, 2 pi)")


@dataclass(frozen=True)
class Rotation:
    """A proper rotation of R^3 stored as a 3x3 matrix."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def apply(self, xyz):
        """Rotate a single triple or an ``(N, 3)`` array of triples."""
        return np.asarray(xyz, dtype=float) @ self.m.T

    def __matmul__(self, other):
        if isinstance(other, Rotation):
            return Rotation(self.m @ other.m)
        return self.apply(other)


def _as_vec(p) -> np.ndarray:
    if isinstance(p, UnitPoint):
        return p.as_array()
    return np.asarray(p, dtype=float)


def to_spherical(p) -> SphericalCoord:
    theta, phi = cartesian_to_spherical(_as_vec(p))
    return SphericalCoord(float(theta), float(phi))


def to_cartesian(c: SphericalCoord) -> UnitPoint:
    return UnitPoint.from_array(spherical_to_cartesian(c.theta, c.phi))


def geodesic_distance(a, b):
    """Great-circle distance ``arccos(a.b)``.

    Evaluated as ``atan2(|a x b|, a.b)``, which keeps full relative accuracy
    for nearly coincident and nearly antipodal pairs where ``arccos`` loses
    half the digits. Accepts :class:`UnitPoint` objects or broadcastable
    ``(..., 3)`` arrays.
    """
    a, b = np.broadcast_arrays(_as_vec(a), _as_vec(b))
    d = np.sum(a * b, axis=-1)
    c = np.linalg.norm(np.cross(a, b), axis=-1)
    out = np.arctan2(c, d)
    return float(out) if np.ndim(out) == 0 else out


def rotation_to(x0) -> Rotation:
    """Rotation ``Rz(phi0) @ Ry(theta0)`` taking the north pole onto ``x0``.

    ``(theta0, phi0)`` are the spherical coordinates of ``x0``; at the north
    pole both vanish and the identity is returned.
    """
    theta, phi = cartesian_to_spherical(_as_vec(x0))
    ct, st = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(phi), np.sin(phi)
    rz = np.array([[cp, -sp, 0.0], [sp, cp, 0.0], [0.0, 0.0, 1.0]])
    ry = np.array([[ct, 0.0, st], [0.0, 1.0, 0.0], [-st, 0.0, ct]])
    return Rotation(rz @ ry)


@dataclass(frozen=True)
class PointSet:
    """Immutable ordered set of unit points with provenance metadata.

    ``kind`` names the generating rule (``"design"``, ``"equal_area"``,
    ``"trapezoidal"``, ``"file"``...), ``t`` is a claimed polynomial degree if
    any. Rows are renormalized on construction.
    """

    xyz: np.ndarray
    kind: str = "points"
    t: int | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        xyz = normalize_rows(self.xyz).copy()
        xyz.setflags(write=False)
        object.__setattr__(self, "xyz", xyz)

    @property
    def n(self) -> int:
        return self.xyz.shape[0]

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[UnitPoint]:
        return (UnitPoint.from_array(v) for v in self.xyz)

    def __getitem__(self, i) -> UnitPoint:
        return UnitPoint.from_array(self.xyz[i])

    def __array__(self, dtype=None, copy=None):
        return self.xyz if dtype is None else self.xyz.astype(dtype)

    def rotated(self, rot: Rotation) -> "PointSet":
        return PointSet(rot.apply(self.xyz), self.kind, self.t, dict(self.meta))


def as_xyz(points) -> np.ndarray:
    """Coerce a :class:`PointSet`, sequence of :class:`UnitPoint` or array to ``(N, 3)``."""
    if isinstance(points, PointSet):
        return points.xyz
    if isinstance(points, UnitPoint):
        return points.as_array()[None, :]
    if isinstance(points, (list, tuple)) and points and isinstance(points[0], UnitPoint):
        return np.array([p.as_array() for p in points])
    return np.atleast_2d(np.asarray(points, dtype=float))


def random_points(n, rng=None) -> np.ndarray:
    """``n`` independent uniformly distributed unit vectors."""
    rng = np.random.default_rng(rng)
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1)[:, None]


def random_rotation(rng=None) -> Rotation:
    rng = np.random.default_rng(rng)
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return Rotation(q)
