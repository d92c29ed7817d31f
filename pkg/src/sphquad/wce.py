"""Worst-case error of equal-weight rules in the Sobolev space H^s(S^2).

With ``L = floor(s - 1)`` and ``V = 2^(2s-2) / s``:

* ``1 < s < 2``: ``wce^2 = V - 1/N^2 sum_ij |x_i - x_j|^(2s-2)``
* ``s > 2``:     ``wce^2 = 1/N^2 sum_ij [Q_L(x_i.x_j) + (-1)^(L+1) |x_i - x_j|^(2s-2)]
  - (-1)^(L+1) V``

where ``Q_L(z) = sum_{l=1..L} ((-1)^(L+1-l) - 1) alpha_l (2l+1) P_l(z)`` and
``alpha_l = V (-1)^(L+1) (1-s)_l / (1+s)_l``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NegativeRadicandError
from .harmonics import legendre_sum
from .sphere import as_xyz, chord_squared

RADICAND_SLACK = 1e-12
_BLOCK = 1024


class OutOfRangeError(DomainError):
    """Sobolev index outside ``1 < s < 2`` or ``s > 2``."""


def _check_s(s):
    if not s > 1.0 or s == 2.0:
        raise OutOfRangeError(f"s = {s} not covered: need 1 < s < 2 or s > 2")


def l_index(s) -> int:
    return int(math.floor(s - 1.0))


@dataclass(frozen=True)
class SobolevParam:
    s: float

    def __post_init__(self):
        _check_s(self.s)

    @property
    def L(self) -> int:
        return l_index(self.s)

    @property
    def case(self) -> int:
        return 1 if self.s < 2.0 else 2

    @property
    def integer(self) -> bool:
        return float(self.s).is_integer()


def v_const(s) -> float:
    """Double integral of ``|x - y|^(2s-2)`` over the sphere pair, normalized."""
    if not s > 1.0:
        raise OutOfRangeError("need s > 1")
    return 2.0 ** (2.0 * s - 2.0) / s


def v_const_gamma(s) -> float:
    """The same constant from ``2^(2s-1) Gamma(3/2) Gamma(s) / (sqrt(pi) Gamma(1+s))``."""
    return (
        2.0 ** (2.0 * s - 1.0)
        * math.gamma(1.5)
        * math.gamma(s)
        / (math.sqrt(math.pi) * math.gamma(1.0 + s))
    )


def alpha_coeff(s, ell) -> float:
    """``alpha_l^(s)`` via the Pochhammer ratio ``(1-s)_l / (1+s)_l``."""
    if ell < 1:
        raise DomainError("ell must be >= 1")
    ratio = 1.0
    for k in range(ell):
        ratio *= (1.0 - s + k) / (1.0 + s + k)
    sign = -1.0 if l_index(s) % 2 == 0 else 1.0  # (-1)^(L+1)
    return v_const(s) * sign * ratio


def alpha_coeff_gamma(s, ell) -> float:
    """``alpha_l^(s)`` via ``Gamma(1-s+l) Gamma(1+s) / (Gamma(1+s+l) Gamma(1-s))``."""
    sign = -1.0 if l_index(s) % 2 == 0 else 1.0
    return (
        v_const(s)
        * sign
        * math.gamma(1.0 - s + ell)
        * math.gamma(1.0 + s)
        / (math.gamma(1.0 + s + ell) * math.gamma(1.0 - s))
    )


def q_kernel_coeffs(s) -> np.ndarray:
    """Legendre coefficients of ``Q_L``; index 0 is the (zero) constant term."""
    big_l = l_index(s)
    c = np.zeros(max(big_l, 0) + 1)
    for ell in range(1, big_l + 1):
        c[ell] = ((-1.0) ** (big_l + 1 - ell) - 1.0) * alpha_coeff(s, ell) * (2 * ell + 1)
    return c


def _pair_terms(dots, s, diagonal_mask=None):
    """Per-pair summand for an array of inner products."""
    dots = np.clip(dots, -1.0, 1.0)
    powd = chord_squared(dots) ** (s - 1.0)
    if diagonal_mask is not None:
        powd = np.where(diagonal_mask, 0.0, powd)
    if s < 2.0:
        return powd
    big_l = l_index(s)
    sign = -1.0 if big_l % 2 == 0 else 1.0
    q, _ = legendre_sum(q_kernel_coeffs(s), dots)
    return q + sign * powd


def wce_pair_kernel(z, s):
    """``|x - y|^(2s-2)`` (case I) or ``Q_L(z) + (-1)^(L+1)|x - y|^(2s-2)`` (case II)."""
    _check_s(s)
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > 1.0 + 1e-12):
        raise DomainError("inner product outside [-1, 1]")
    out = _pair_terms(z, s)
    return float(out) if out.ndim == 0 else out


def _pair_mean(xyz, s):
    n = xyz.shape[0]
    rows = []
    for start in range(0, n, _BLOCK):
        blk = xyz[start:start + _BLOCK]
        dots = blk @ xyz.T
        diag = np.zeros(dots.shape, dtype=bool)
        idx = np.arange(blk.shape[0])
        diag[idx, start + idx] = True
        rows.append(_pair_terms(dots, s, diag).sum(axis=1))
    return math.fsum(np.concatenate(rows)) / n**2


def wce_squared(points, s) -> float:
    """The radicand of :func:`wce` before clamping."""
    _check_s(s)
    xyz = as_xyz(points)
    mean = _pair_mean(xyz, s)
    v = v_const(s)
    if s < 2.0:
        return v - mean
    sign = -1.0 if l_index(s) % 2 == 0 else 1.0
    return mean - sign * v


def wce(points, s) -> float:
    """Worst-case error of the equal-weight rule on ``points`` in ``H^s``.

    Radicands in ``[-1e-12, 0)`` are rounding noise and clamp to 0; anything
    more negative raises :class:`NegativeRadicandError`.
    """
    sq = wce_squared(points, s)
    if sq < 0.0:
        if sq < -RADICAND_SLACK:
            raise NegativeRadicandError(f"wce^2 = {sq:.3e} < 0 at s = {s}")
        return 0.0
    return math.sqrt(sq)
