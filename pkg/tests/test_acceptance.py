"""Acceptance criteria, one check per criterion.

Each ``criterion_k`` returns ``(ok, detail)``. Under pytest every criterion
is a test and a one-line PASS/FAIL summary per criterion is printed at the
end of the session; ``python tests/test_acceptance.py`` prints the same
lines directly.
"""
import math
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.special import gammaln

from sphquad import cli, designs, geometry, testfns, transforms, wce
from sphquad.rules import QuadratureRule, integrate
from sphquad.transforms import TransformSpec, integrate_singular

sys.path.insert(0, str(Path(__file__).parent))
from oracles import TET_MESH_NORM, TET_MESH_RATIO, TET_MIN_ANGLE  # noqa: E402

RESULTS = {}

# tolerances, pinned
TOL_DESIGN_RESIDUAL = 1e-12
TOL_DESIGN_POLY_REL = 1e-10
BUDGET_DESIGNS_S = 120.0
TOL_F1 = 1e-6
TOL_F3 = 1e-3
TOL_F4 = 1e-4
BUDGET_TABLE_S = 30.0
TOL_WCE_CLOSED = 1e-13
TOL_ALPHA = 1e-12
SLOPE_RANGE = (-0.90, -0.60)
TOL_AREA = 1e-8
TOL_PSI_PATHS = 1e-10
TOL_ATKINSON_IDENTITY = 1e-15
TOL_F5_REL = 1e-2
F5_GAIN = 10.0
TOL_F6_REL = 5e-2
TOL_TET = 3e-3
BUDGET_FIGURE_S = 60.0

F6_TABLE = 371.453416333927


def _design(t, seed=0):
    return designs.generate_design(t, seed=seed)


def _rule(cand):
    return QuadratureRule.equal_weight(cand.points, "design")


def _monomial_integral(a, b, c):
    """Exact integral of x^a y^b z^c over the unit sphere."""
    if a % 2 or b % 2 or c % 2:
        return 0.0
    return 2.0 * math.exp(
        gammaln((a + 1) / 2) + gammaln((b + 1) / 2) + gammaln((c + 1) / 2) - gammaln((a + b + c + 3) / 2)
    )


def _random_polynomial(t, rng, terms=12):
    """Random combination of monomials of total degree <= t, with a constant term."""
    exps = []
    for _ in range(terms):
        d = rng.integers(0, t + 1)
        a = rng.integers(0, d + 1)
        b = rng.integers(0, d - a + 1)
        exps.append((a, b, d - a - b))
    coef = rng.uniform(-1, 1, terms)
    const = rng.uniform(0.5, 1.5)

    def f(p):
        x, y, z = np.asarray(p).T
        return const + sum(c * x**a * y**b * z**e for c, (a, b, e) in zip(coef, exps))

    exact = 4 * math.pi * const + sum(c * _monomial_integral(*e) for c, e in zip(coef, exps))
    return f, exact


def criterion_1():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_res, worst_rel = 0.0, 0.0
    for t in (3, 5, 8, 10):
        cand = _design(t)
        assert cand.points.n == (t + 1) ** 2
        worst_res = max(worst_res, designs.a_nt(cand.points, t))
        rule = _rule(cand)
        for _ in range(50):
            f, exact = _random_polynomial(t, rng)
            worst_rel = max(worst_rel, abs(integrate(rule, f) - exact) / abs(exact))
    secs = time.perf_counter() - t0
    ok = worst_res <= TOL_DESIGN_RESIDUAL and worst_rel <= TOL_DESIGN_POLY_REL and secs <= BUDGET_DESIGNS_S
    return ok, f"max A_N,t={worst_res:.2e}, max poly rel err={worst_rel:.2e}, {secs:.1f}s"


def criterion_2():
    t0 = time.perf_counter()
    rule = _rule(_design(30))
    errs = {fid: abs(integrate(rule, testfns.get(fid)) - testfns.exact_value(fid)) for fid in ("f1", "f3", "f4")}
    secs = time.perf_counter() - t0
    parts = {
        "f1": errs["f1"] <= TOL_F1,
        "f3": errs["f3"] <= TOL_F3,
        "f4": errs["f4"] <= TOL_F4,
        "time": secs <= BUDGET_TABLE_S,
    }
    detail = (
        f"N={rule.n} f1 err={errs['f1']:.2e} (tol {TOL_F1:g}), f3 err={errs['f3']:.2e} (tol {TOL_F3:g}), "
        f"f4 err={errs['f4']:.2e} (tol {TOL_F4:g}), {secs:.1f}s"
    )
    failed = [k for k, v in parts.items() if not v]
    return not failed, detail + (f"; failing: {', '.join(failed)}" if failed else "")


def criterion_3():
    one = abs(wce.wce([[0, 0, 1.0]], 1.5) - math.sqrt(4 / 3))
    pair = abs(wce.wce([[0, 0, 1.0], [0, 0, -1.0]], 1.5) - math.sqrt(1 / 3))
    alpha = max(
        abs(wce.alpha_coeff(s, ell) - wce.alpha_coeff_gamma(s, ell)) / abs(wce.alpha_coeff_gamma(s, ell))
        for s in (1.5, 2.5, 3.5, 4.5)
        for ell in range(1, 51)
    )
    ts = (4, 8, 12, 16, 20)
    cands = [_design(t) for t in ts]
    n = np.array([c.points.n for c in cands], dtype=float)
    w = np.array([wce.wce(c.points, 1.5) for c in cands])
    slope = float(np.polyfit(np.log(n), np.log(w), 1)[0])
    ok = one <= TOL_WCE_CLOSED and pair <= TOL_WCE_CLOSED and alpha <= TOL_ALPHA
    ok = ok and SLOPE_RANGE[0] <= slope <= SLOPE_RANGE[1]
    return ok, f"closed forms {one:.1e}/{pair:.1e}, alpha rel {alpha:.1e}, slope {slope:.3f}"


def criterion_4():
    rule = _rule(_design(30))
    one = lambda p: np.ones(len(p))  # noqa: E731
    specs = [TransformSpec.atkinson(q) for q in (1.5, 2.0, 2.5, 3.0)] + [TransformSpec.sidi(m) for m in (1, 3, 5)]
    area = {s.label: abs(integrate_singular(rule, one, s) - 4 * math.pi) for s in specs}
    u = np.linspace(0, 1, 50)
    paths = max(
        float(np.max(np.abs(transforms.sidi_psi(m, u, path="recursion") - transforms.sidi_psi(m, u, path="hypergeometric"))))
        for m in (1, 2, 3, 5)
    )
    pts = designs.generate_design(10).points.xyz
    ident = float(np.max(np.abs(transforms.atkinson_map(1.0, pts) - pts)))
    bad = [k for k, v in area.items() if v > TOL_AREA]
    ok = not bad and paths <= TOL_PSI_PATHS and ident <= TOL_ATKINSON_IDENTITY
    detail = ", ".join(f"{k} {v:.1e}" for k, v in area.items())
    detail += f"; psi paths {paths:.1e}; q=1 identity {ident:.1e}"
    return ok, detail + (f"; area above {TOL_AREA:g} for {', '.join(bad)}" if bad else "")


def criterion_5():
    rule = _rule(_design(30))
    f5, f6 = testfns.get("f5"), testfns.get("f6")
    sp5 = f5.sphere_singular_point
    sidi = integrate_singular(rule, f5, TransformSpec.sidi(3, singular_point=sp5))
    rel5 = abs(sidi - f5.exact) / f5.exact
    plain = abs(integrate_singular(rule, f5, TransformSpec.none(singular_point=sp5)) - f5.exact)
    graded = abs(integrate_singular(rule, f5, TransformSpec.atkinson(2.0, singular_point=sp5)) - f5.exact)
    spec6 = TransformSpec.atkinson(3.0, singular_point=f6.sphere_singular_point, surface=f6.surface)
    v6 = integrate_singular(rule, f6, spec6)
    rel6 = abs(v6 - F6_TABLE) / F6_TABLE
    parts = {"f5 sidi": rel5 <= TOL_F5_REL, "f5 gain": plain >= F5_GAIN * graded, "f6": rel6 <= TOL_F6_REL}
    detail = (
        f"f5 sidi3 rel {rel5:.1e}; f5 none/atkinson2 err {plain:.1e}/{graded:.1e}; "
        f"f6 atkinson3 = {v6:.6f}, rel to {F6_TABLE} = {rel6:.3f}"
    )
    failed = [k for k, v in parts.items() if not v]
    return not failed, detail + (f"; failing: {', '.join(failed)}" if failed else "")


def criterion_6():
    tet = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / math.sqrt(3)
    rep = geometry.geometry_report(tet, 200)
    tet_err = max(
        abs(rep.min_angle - TET_MIN_ANGLE), abs(rep.mesh_norm - TET_MESH_NORM), abs(rep.mesh_ratio - TET_MESH_RATIO)
    )
    t0 = time.perf_counter()
    cfg = cli.ExperimentConfig.from_mapping(
        {"rules": "design,equal_area,trapezoidal", "t": "2:42:2", "N": "50:2000:50", "n": "4:30:2"}
    )
    report = cli.cmd_geometry(cfg)
    secs = time.perf_counter() - t0
    k_h, k_d = report.columns.index("mesh_norm"), report.columns.index("min_angle")
    k_n = report.columns.index("N")
    violations = sum(1 for r in report.rows if r[k_h] < 0.5 * r[k_d])
    max_n = max(r[k_n] for r in report.rows)
    ok = tet_err <= TOL_TET and violations == 0 and not report.failed and secs <= BUDGET_FIGURE_S and max_n <= 2000
    return ok, (
        f"tetrahedron err {tet_err:.1e}; {len(report.rows)} sets up to N={max_n}, "
        f"h<delta/2 on {violations}; {secs:.1f}s"
    )


def criterion_7():
    args = [sys.executable, "-m", "sphquad.cli", "integrate", "rules=design", "t=30", "functions=f1,f3,f4", "seed=0"]
    env = dict(os.environ, PYTHONHASHSEED="random")
    outs = [subprocess.run(args, capture_output=True, check=True, env=env).stdout for _ in range(2)]
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    return ok, f"two runs, {len(outs[0])} bytes each, identical={outs[0] == outs[1]}"


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 8)}


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, detail = CRITERIA[k]()
    RESULTS[k] = (ok, detail)
    assert ok, f"criterion {k}: {detail}"


def main():
    for k, fn in CRITERIA.items():
        ok, detail = fn()
        print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)


if __name__ == "__main__":
    main()
