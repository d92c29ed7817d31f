"""Legendre polynomials and real orthonormal spherical harmonics.

Real harmonics are written as

    Y_{l,0}   = qbar_l^0(z)
    Y_{l,m}^c = sqrt(2) qbar_l^m(z) Re((x + i y)^m)      (m = 1..l)
    Y_{l,m}^s = sqrt(2) qbar_l^m(z) Im((x + i y)^m)

with ``qbar_l^m(z) = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) d^m P_l / dz^m``.
Since ``Re/Im((x+iy)^m) = sin^m(theta) cos/sin(m phi)`` this is the usual
fully normalized basis without the Condon-Shortley phase, and it extends to a
polynomial on R^3, which gives exact surface gradients.

Row ordering of a basis matrix: degree ``l`` occupies rows ``l**2 ..
(l+1)**2 - 1`` as ``[Y_{l,0}, Y_{l,1}^c, Y_{l,1}^s, ..., Y_{l,l}^c,
Y_{l,l}^s]``, i.e. ``k = 1`` is the zonal harmonic, ``k = 2m`` the cosine
and ``k = 2m + 1`` the sine harmonic of order ``m``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .errors import DomainError
from .sphere import as_xyz

FOUR_PI = 4.0 * np.pi
_SQRT2 = np.sqrt(2.0)


def _check_domain(x, slack=1e-12):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + slack) or np.any(np.isnan(x)):
        raise DomainError("Legendre argument outside [-1, 1]")
    return np.clip(x, -1.0, 1.0)


def legendre_series(t, x):
    """Values ``P_0(x) .. P_t(x)`` stacked along a new leading axis."""
    x = _check_domain(x)
    out = np.empty((t + 1,) + x.shape)
    out[0] = 1.0
    if t >= 1:
        out[1] = x
    for ell in range(2, t + 1):
        out[ell] = ((2 * ell - 1) * x * out[ell - 1] - (ell - 1) * out[ell - 2]) / ell
    return out


def legendre_p(ell, x):
    """Classical Legendre polynomial ``P_ell(x)`` normalized by ``P_ell(1) = 1``."""
    if ell < 0:
        raise DomainError("degree must be non-negative")
    out = legendre_series(ell, x)[ell]
    return float(out) if out.ndim == 0 else out


def legendre_p_derivative(ell, x):
    """``dP_ell/dx``; at ``x = +-1`` the limit ``(+-1)^(ell+1) ell(ell+1)/2``."""
    if ell < 0:
        raise DomainError("degree must be non-negative")
    x = _check_domain(x)
    p_km2 = np.zeros_like(x)
    p_km1 = np.ones_like(x)
    d = np.zeros_like(x)
    for k in range(1, ell + 1):
        # P_k' = k P_{k-1} + x P_{k-1}'
        d = k * p_km1 + x * d
        p_k = ((2 * k - 1) * x * p_km1 - (k - 1) * p_km2) / k
        p_km2, p_km1 = p_km1, p_k
    return float(d) if d.ndim == 0 else d


def legendre_sum(coeffs, x):
    """Evaluate ``sum_l coeffs[l] P_l(x)`` and its derivative by forward recurrence."""
    x = _check_domain(x)
    coeffs = np.asarray(coeffs, dtype=float)
    val = coeffs[0] * np.ones_like(x)
    der = np.zeros_like(x)
    if len(coeffs) == 1:
        return val, der
    p0, p1 = np.ones_like(x), x.copy()
    d1 = np.ones_like(x)
    val = val + coeffs[1] * p1
    der = der + coeffs[1] * d1
    for ell in range(2, len(coeffs)):
        p2 = ((2 * ell - 1) * x * p1 - (ell - 1) * p0) / ell
        d2 = ell * p1 + x * d1
        val = val + coeffs[ell] * p2
        der = der + coeffs[ell] * d2
        p0, p1, d1 = p1, p2, d2
    return val, der


@dataclass(frozen=True)
class HarmonicBasis:
    """Real spherical harmonics of degree ``<= t``."""

    t: int

    def __post_init__(self):
        if self.t < 0:
            raise DomainError("degree must be non-negative")

    @property
    def d_t(self) -> int:
        return (self.t + 1) ** 2


def harmonic_index(ell, m, part="c"):
    """Row of ``Y_{ell,m}`` (``part`` ``"c"`` or ``"s"``) in a basis matrix."""
    if m == 0:
        return ell * ell
    return ell * ell + 2 * m - 1 + (part == "s")


class OrderBlock(NamedTuple):
    """All harmonics of one order ``m`` and degrees ``m..t``.

    ``cos``/``sin`` have shape ``(t - m + 1, N)``; ``sin`` is ``None`` for
    ``m = 0``. Gradients (shape ``(t - m + 1, N, 3)``) are tangential and only
    present when requested.
    """

    m: int
    cos: np.ndarray
    sin: np.ndarray | None
    cos_grad: np.ndarray | None
    sin_grad: np.ndarray | None


def _qbar_column(m, t, z, qmm):
    """``qbar_l^m(z)`` for ``l = m..t`` given the constant ``qbar_m^m``."""
    col = np.empty((t - m + 1,) + z.shape)
    col[0] = qmm
    if t > m:
        col[1] = np.sqrt(2 * m + 3) * z * qmm
    for i, ell in enumerate(range(m + 2, t + 1), start=2):
        a = np.sqrt((4.0 * ell * ell - 1.0) / (ell * ell - m * m))
        b = np.sqrt(((ell - 1.0) ** 2 - m * m) / (4.0 * (ell - 1.0) ** 2 - 1.0))
        col[i] = a * (z * col[i - 1] - b * col[i - 2])
    return col


def iter_order_blocks(t, points, gradient=False) -> Iterator[OrderBlock]:
    """Stream the basis one azimuthal order at a time.

    Memory use is ``O(t N)`` per block, so degree-160 bases on 26k points can
    be reduced without materializing the full matrix.
    """
    xyz = as_xyz(points)
    x, y, z = xyz[:, 0], xyz[:, 1], xyz[:, 2]
    w = x + 1j * y
    wpow_prev = np.zeros_like(w)  # w^(m-1)
    wpow = np.ones_like(w)  # w^m
    qmm = 1.0 / np.sqrt(FOUR_PI)
    col = _qbar_column(0, t, z, qmm)
    for m in range(t + 1):
        if m < t:
            qnext = qmm * np.sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0))
            col_next = _qbar_column(m + 1, t, z, qnext)
        else:
            qnext, col_next = None, None
        scale = 1.0 if m == 0 else _SQRT2
        re, im = wpow.real, wpow.imag
        cos_rows = scale * col * re
        sin_rows = scale * col * im if m > 0 else None
        cos_grad = sin_grad = None
        if gradient:
            # d qbar_l^m / dz = sqrt((l-m)(l+m+1)) qbar_l^{m+1}
            dcol = np.zeros_like(col)
            if col_next is not None:
                ells = np.arange(m + 1, t + 1)
                fac = np.sqrt((ells - m) * (ells + m + 1.0))
                dcol[1:] = fac[:, None] * col_next
            cos_grad = np.empty(col.shape + (3,))
            cos_grad[..., 2] = scale * dcol * re
            if m == 0:
                cos_grad[..., 0] = 0.0
                cos_grad[..., 1] = 0.0
            else:
                re1, im1 = wpow_prev.real, wpow_prev.imag
                cos_grad[..., 0] = scale * m * col * re1
                cos_grad[..., 1] = -scale * m * col * im1
                sin_grad = np.empty_like(cos_grad)
                sin_grad[..., 0] = scale * m * col * im1
                sin_grad[..., 1] = scale * m * col * re1
                sin_grad[..., 2] = scale * dcol * im
                sin_grad -= np.einsum("lnk,nk->ln", sin_grad, xyz)[..., None] * xyz
            cos_grad -= np.einsum("lnk,nk->ln", cos_grad, xyz)[..., None] * xyz
        yield OrderBlock(m, cos_rows, sin_rows, cos_grad, sin_grad)
        wpow_prev, wpow = wpow, wpow * w
        qmm, col = qnext, col_next


def _as_basis(basis) -> HarmonicBasis:
    return basis if isinstance(basis, HarmonicBasis) else HarmonicBasis(int(basis))


def basis_matrix(basis, points) -> np.ndarray:
    """The ``d_t x N`` matrix whose column ``j`` is ``eval_harmonics`` at ``x_j``."""
    basis = _as_basis(basis)
    t = basis.t
    xyz = as_xyz(points)
    out = np.empty((basis.d_t, xyz.shape[0]))
    ells = np.arange(t + 1)
    for blk in iter_order_blocks(t, xyz):
        m = blk.m
        rows = ells[m:] ** 2 + (0 if m == 0 else 2 * m - 1)
        out[rows] = blk.cos
        if m > 0:
            out[rows + 1] = blk.sin
    return out


def basis_gradients(basis, points) -> np.ndarray:
    """Tangential gradients of every basis function, shape ``(d_t, N, 3)``."""
    basis = _as_basis(basis)
    t = basis.t
    xyz = as_xyz(points)
    out = np.empty((basis.d_t, xyz.shape[0], 3))
    ells = np.arange(t + 1)
    for blk in iter_order_blocks(t, xyz, gradient=True):
        m = blk.m
        rows = ells[m:] ** 2 + (0 if m == 0 else 2 * m - 1)
        out[rows] = blk.cos_grad
        if m > 0:
            out[rows + 1] = blk.sin_grad
    return out


def eval_harmonics(basis, p) -> np.ndarray:
    """All ``d_t`` real harmonics at a single point."""
    return basis_matrix(basis, as_xyz(p)[:1])[:, 0]


def harmonic_sums(t, points) -> np.ndarray:
    """Row sums ``sum_j Y_{l,k}(x_j)`` for all ``(t+1)**2`` harmonics, streamed."""
    xyz = as_xyz(points)
    out = np.empty((t + 1) ** 2)
    ells = np.arange(t + 1)
    for blk in iter_order_blocks(t, xyz):
        m = blk.m
        rows = ells[m:] ** 2 + (0 if m == 0 else 2 * m - 1)
        out[rows] = blk.cos.sum(axis=1)
        if m > 0:
            out[rows + 1] = blk.sin.sum(axis=1)
    return out
