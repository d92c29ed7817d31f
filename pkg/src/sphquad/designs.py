"""Spherical t-designs: objective, verification, generation and point files.

The design objective is

    A_{N,t}(X) = 4 pi / N^2 * sum_{l=1..t} sum_k (sum_j Y_{l,k}(x_j))^2
               = 1 / N^2 * sum_{i,j} sum_{l=1..t} (2l+1) P_l(x_i . x_j),

which is non-negative and vanishes exactly on t-designs.
"""
from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import NonConvergedError, ParseError, SingularGramWarning
from .harmonics import FOUR_PI, basis_gradients, basis_matrix, harmonic_sums, legendre_sum
from .rules import equal_area_points
from .sphere import UNIT_TOLERANCE, NotUnitError, PointSet, as_xyz

#: Convergence threshold on A_{N,t} for generated designs.
DESIGN_TOL = 1e-12

_KERNEL_BLOCK = 2048


def lower_bound(t: int) -> int:
    """Smallest cardinality a t-design on S^2 can have."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if t % 2:
        return -(-((t + 1) * (t + 3)) // 4)
    return (t + 2) ** 2 // 4


def _kernel_coeffs(t):
    c = 2.0 * np.arange(t + 1) + 1.0
    c[0] = 0.0
    return c


def a_nt_harmonic(points, t: int) -> float:
    xyz = as_xyz(points)
    n = xyz.shape[0]
    sums = harmonic_sums(t, xyz)[1:]
    return FOUR_PI / n**2 * math.fsum(sums * sums)


def a_nt_kernel(points, t: int) -> float:
    """Kernel (addition theorem) form; ``O(N^2 t)`` work in row blocks."""
    xyz = as_xyz(points)
    n = xyz.shape[0]
    coeffs = _kernel_coeffs(t)
    parts = []
    for start in range(0, n, _KERNEL_BLOCK):
        dots = xyz[start:start + _KERNEL_BLOCK] @ xyz.T
        val, _ = legendre_sum(coeffs, np.clip(dots, -1.0, 1.0))
        parts.append(val.sum(axis=1))
    return math.fsum(np.concatenate(parts)) / n**2


def a_nt(points, t: int, form: str = "harmonic") -> float:
    """Variational design objective ``A_{N,t}``; zero exactly on t-designs.

    ``form`` selects the harmonic (``O(t^2 N)``) or kernel (``O(t N^2)``)
    evaluation; both give the same value up to rounding.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if form == "harmonic":
        return a_nt_harmonic(points, t)
    if form == "kernel":
        return a_nt_kernel(points, t)
    raise ValueError(f"unknown form {form!r}")


def _project(xyz, g):
    return g - np.sum(g * xyz, axis=1)[:, None] * xyz


def a_nt_gradient(points, t: int) -> np.ndarray:
    """Tangential gradient of ``A_{N,t}``, one row per point.

    From the kernel form, ``dA/dx_i = 2/N^2 sum_j K'(x_i . x_j) x_j`` with
    ``K = sum_l (2l+1) P_l``, projected onto the tangent plane at ``x_i``.
    """
    xyz = as_xyz(points)
    n = xyz.shape[0]
    coeffs = _kernel_coeffs(t)
    grad = np.empty_like(xyz)
    for start in range(0, n, _KERNEL_BLOCK):
        dots = xyz[start:start + _KERNEL_BLOCK] @ xyz.T
        _, der = legendre_sum(coeffs, np.clip(dots, -1.0, 1.0))
        grad[start:start + _KERNEL_BLOCK] = der @ xyz
    return _project(xyz, 2.0 / n**2 * grad)


# -- generation ---------------------------------------------------------------

@dataclass(frozen=True)
class DesignCandidate:
    points: PointSet
    t: int
    residual: float
    converged: bool = True
    iterations: int = 0


def _tangent_frames(xyz):
    axis = np.zeros_like(xyz)
    axis[np.arange(len(xyz)), np.argmin(np.abs(xyz), axis=1)] = 1.0
    e1 = axis - np.sum(axis * xyz, axis=1)[:, None] * xyz
    e1 /= np.linalg.norm(e1, axis=1)[:, None]
    e2 = np.cross(xyz, e1)
    return e1, e2


def _residuals(xyz, t):
    n = xyz.shape[0]
    return math.sqrt(FOUR_PI) / n * harmonic_sums(t, xyz)[1:]


def _jacobian(xyz, t, e1, e2):
    n = xyz.shape[0]
    g = basis_gradients(t, xyz)[1:]
    jac = np.empty((g.shape[0], n, 2))
    jac[..., 0] = np.einsum("mnk,nk->mn", g, e1)
    jac[..., 1] = np.einsum("mnk,nk->mn", g, e2)
    return math.sqrt(FOUR_PI) / n * jac.reshape(g.shape[0], 2 * n)


def _retract(xyz, step, e1, e2):
    step = step.reshape(-1, 2)
    moved = xyz + step[:, :1] * e1 + step[:, 1:] * e2
    return moved / np.linalg.norm(moved, axis=1)[:, None]


def _initial_points(n, seed, init):
    if init is not None:
        return as_xyz(init).copy()
    xyz = equal_area_points(n)
    if seed is not None and n > 1:
        rng = np.random.default_rng(seed)
        e1, e2 = _tangent_frames(xyz)
        amp = 0.05 * math.sqrt(FOUR_PI / n)
        xyz = _retract(xyz, amp * rng.standard_normal(2 * n), e1, e2)
    return xyz


def generate_design(
    t: int,
    n: int | None = None,
    seed: int | None = 0,
    init=None,
    tol: float = DESIGN_TOL,
    max_iter: int = 5000,
    floor: float = 1e-28,
    raise_on_failure: bool = True,
) -> DesignCandidate:
    """Find a t-design with ``n`` points by Levenberg-Marquardt on ``A_{N,t}``.

    Residuals are the scaled harmonic sums ``sqrt(4 pi)/N sum_j Y_{l,k}(x_j)``
    for ``1 <= l <= t``; each point moves in its tangent plane and is pulled
    back onto the sphere by renormalization. The start is the equal-area point
    set (jittered reproducibly when ``seed`` is given) unless ``init`` is
    passed. After ``A <= tol`` the iteration keeps polishing until it reaches
    ``floor`` or stops improving, so returned designs integrate to rounding
    level.
    """
    if n is None:
        n = (t + 1) ** 2
    if not 1 <= t:
        raise ValueError("t must be >= 1")
    xyz = _initial_points(n, seed, init)
    r = _residuals(xyz, t)
    cost = float(r @ r)
    lam = None
    it = 0
    stalls = 0
    while it < max_iter and cost > floor:
        it += 1
        e1, e2 = _tangent_frames(xyz)
        jac = _jacobian(xyz, t, e1, e2)
        if lam is None:
            lam = 1e-3 * float(np.max(np.sum(jac * jac, axis=1)))
        jjt = jac @ jac.T
        improved = False
        while lam < 1e20:
            try:
                cf = cho_factor(jjt + lam * np.eye(len(r)), check_finite=False)
                step = -jac.T @ cho_solve(cf, r, check_finite=False)
            except LinAlgError:
                step = None
            if step is None:
                # damped system unusable: steepest descent with backtracking
                step = -(jac.T @ r)
                step *= 1.0 / max(1.0, float(np.linalg.norm(step)))
            trial = _retract(xyz, step, e1, e2)
            r_trial = _residuals(trial, t)
            c_trial = float(r_trial @ r_trial)
            if c_trial < cost:
                xyz, r = trial, r_trial
                gain = c_trial / cost
                cost = c_trial
                lam = max(lam / 3.0, 1e-300)
                improved = True
                break
            lam *= 4.0
        if not improved:
            break
        if cost <= tol:
            stalls = stalls + 1 if gain > 0.5 else 0
            if stalls >= 3:
                break
    pts = PointSet(xyz, "design", t, {"generated": True, "seed": seed})
    cand = DesignCandidate(pts, t, cost, cost <= tol, it)
    if not cand.converged and raise_on_failure:
        raise NonConvergedError(
            f"t={t}, N={n}: A_N,t = {cost:.3e} after {it} iterations",
            residual=cost,
            iterations=it,
            candidate=cand,
        )
    return cand


# -- verification and diagnostics --------------------------------------------

@dataclass(frozen=True)
class DesignVerification:
    ok: bool
    t: int
    residual: float
    max_poly_error: float
    tol: float

    def __bool__(self):
        return self.ok


def verify_design(points, t: int, tol: float = 1e-12, n_polys: int = 20, rng=0) -> DesignVerification:
    """Check ``A_{N,t} <= tol`` and equal-weight exactness on random polynomials.

    Each test polynomial has standard normal coefficients on the orthonormal
    harmonics of degree ``<= t``. Its exact mean over the sphere is the
    constant coefficient over ``sqrt(4 pi)``; the equal-weight average must
    match it within ``10 * tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    xyz = as_xyz(points)
    n = xyz.shape[0]
    sums = harmonic_sums(t, xyz)
    residual = FOUR_PI / n**2 * math.fsum(sums[1:] ** 2)
    means = sums / n
    coeffs = np.random.default_rng(rng).standard_normal((n_polys, sums.size))
    errs = [abs(math.fsum(c * means) - c[0] / math.sqrt(FOUR_PI)) for c in coeffs]
    worst = float(max(errs)) if errs else 0.0
    ok = bool(residual <= tol and worst <= 10.0 * tol)
    return DesignVerification(ok, t, float(residual), worst, tol)


def gram_logdet(points, t: int) -> float:
    """``log det(Y_t^T Y_t)`` from the singular values of the basis matrix.

    When the Gram matrix is numerically singular (always the case for
    ``N > (t+1)^2``) a :class:`SingularGramWarning` is issued and the log of the
    pseudo-determinant over the non-negligible eigenvalues is returned.
    """
    y = basis_matrix(t, points)
    n = y.shape[1]
    sv = np.linalg.svd(y, compute_uv=False)
    eig = np.zeros(n)
    eig[: sv.size] = sv[:n] ** 2
    cutoff = 1e-14 * eig.max()
    if eig.min() < cutoff:
        warnings.warn(
            f"Gram matrix singular (N={n}, t={t}); using pseudo-determinant",
            SingularGramWarning,
            stacklevel=2,
        )
        eig = eig[eig >= cutoff]
    return math.fsum(np.log(eig))


def constraint_norm(points, t: int) -> float:
    """``||E G_t e||_inf``: the spread of the Gram row sums."""
    y = basis_matrix(t, points)
    rowsums = y.T @ y.sum(axis=1)
    if rowsums.size < 2:
        return 0.0
    return float(np.max(np.abs(rowsums[0] - rowsums[1:])))


# -- point files ----------------------------------------------------------------

_T_PATTERNS = (
    re.compile(r"sf(\d{3})\.\d+"),
    re.compile(r"(?:^|[^a-z])t[=_-]?(\d+)", re.IGNORECASE),
)


def _claimed_degree(name):
    for pat in _T_PATTERNS:
        m = pat.search(name)
        if m:
            return int(m.group(1))
    return None


def load_pointset(path, t: int | None = None) -> PointSet:
    """Read whitespace-separated ``x y z`` rows; ``#`` lines and blanks skipped.

    A degree claimed by the filename (``sf010.00060``, ``design_t10.txt``) is
    stored as metadata and in ``PointSet.t`` but is not verified here.
    """
    path = Path(path)
    rows, lines = [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            s = raw.strip()
            if not s or s.startswith("#"):
                continue
            fields = s.split()
            try:
                vals = [float(v) for v in fields]
            except ValueError:
                raise ParseError(f"{path}:{lineno}: not numeric: {s!r}", line=lineno) from None
            if len(vals) != 3:
                raise ParseError(f"{path}:{lineno}: expected 3 fields, got {len(vals)}", line=lineno)
            rows.append(vals)
            lines.append(lineno)
    if not rows:
        raise ParseError(f"{path}: no points", line=None)
    xyz = np.array(rows)
    norms = np.linalg.norm(xyz, axis=1)
    bad = np.flatnonzero(~(np.abs(norms - 1.0) <= UNIT_TOLERANCE))
    if bad.size:
        i = int(bad[0])
        raise NotUnitError(f"{path}:{lines[i]}: norm {norms[i]!r} is not 1", line=lines[i])
    claimed = t if t is not None else _claimed_degree(path.name)
    return PointSet(xyz, "file", claimed, {"path": str(path), "claimed_t": claimed})


def save_pointset(points, path, comment: str | None = None) -> None:
    """Write points with 17 significant digits, one ``x y z`` row per line."""
    xyz = as_xyz(points)
    with open(path, "w", newline="\n") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        for x, y, z in xyz:
            fh.write(f"{x:.17g} {y:.17g} {z:.17g}\n")
