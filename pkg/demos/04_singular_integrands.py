"""
Variable transformations for singular integrands
================================================

A 1/r singularity at a point p0 ruins the convergence of any rule that
treats the integrand as smooth. Rotating p0 to the north pole and grading the
colatitude so nodes cluster there restores fast convergence: the Jacobian of
the grading cancels the singularity. Two gradings are available, an
algebraic one (Atkinson, parameter q) and a sine-power one (Sidi, parameter m).
"""

import numpy as np

from sphquad import QuadratureRule, TransformSpec, generate_design, integrate_singular, trapezoidal_rule
from sphquad import testfns

f5, f6 = testfns.get("f5"), testfns.get("f6")

# %%
# Every transform preserves area: f = 1 still integrates to 4 pi.
rule = QuadratureRule.equal_weight(generate_design(30, seed=0).points)
ones = lambda p: np.ones(len(p))  # noqa: E731
for spec in (TransformSpec.none(), TransformSpec.atkinson(2), TransformSpec.sidi(3), TransformSpec.sidi(5)):
    print(f"{spec.label:12s} area error {abs(integrate_singular(rule, ones, spec) - 4 * np.pi):.1e}")

# %%
# f5 with its singularity at the south pole, on the design ladder.
print("\nf5 relative errors")
print("   t     N      none   atkinson:2     sidi:3")
for t in (10, 20, 30):
    r = QuadratureRule.equal_weight(generate_design(t, seed=0).points)
    errs = []
    for spec in (TransformSpec.none, lambda **k: TransformSpec.atkinson(2, **k), lambda **k: TransformSpec.sidi(3, **k)):
        v = integrate_singular(r, f5, spec(singular_point=f5.sphere_singular_point))
        errs.append(abs(v - f5.exact) / f5.exact)
    print(f"{t:4d} {r.n:5d}  " + "  ".join(f"{e:10.2e}" for e in errs))

# %%
# The same machinery on the graded trapezoidal rule, whose nodes already
# live on a (theta, phi) grid.
print("\nf5 on trapezoidal grids, sidi:3")
for n in (8, 16, 32):
    v = integrate_singular(trapezoidal_rule(n), f5, TransformSpec.sidi(3, singular_point=f5.sphere_singular_point))
    print(f"  n={n:3d}  relative error {abs(v - f5.exact) / f5.exact:.2e}")

# %%
# f6 lives on the ellipsoid with semi-axes (1, 2, 3). The rule is pulled
# back to the sphere and the surface Jacobian joins the density chain.
spec = TransformSpec.sidi(5, singular_point=f6.sphere_singular_point, surface=f6.surface)
ref = testfns.reference_integral(f6)
print(f"\nf6 reference (polar Gauss about the singularity): {ref:.12f}")
for t in (10, 20, 30):
    r = QuadratureRule.equal_weight(generate_design(t, seed=0).points)
    print(f"  t={t:2d}  sidi:5 error {abs(integrate_singular(r, f6, spec) - ref):.2e}")
