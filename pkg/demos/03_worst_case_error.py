"""
Worst-case error in Sobolev spaces
==================================

For an equal-weight rule the worst-case error over the unit ball of H^s is a
closed-form double sum over node pairs. It decays roughly like N^(-s/2) for
good point sets. We compute it for the design ladder, fit the decay rate
and print the fixed-degree table that probes how wce changes with N.
"""

import numpy as np

from sphquad import generate_design, wce_squared
from sphquad.wce import wce

# %%
# Two configurations with known answers at s = 1.5.
print(f"one point      {wce([[0, 0, 1.0]], 1.5):.15f}  sqrt(4/3) = {np.sqrt(4 / 3):.15f}")
print(f"antipodal pair {wce([[0, 0, 1], [0, 0, -1.0]], 1.5):.15f}  sqrt(1/3) = {np.sqrt(1 / 3):.15f}")

# %%
# The design ladder at several smoothness levels.
ts = (4, 8, 12, 16, 20)
designs = [generate_design(t, seed=0).points for t in ts]
n = np.array([d.n for d in designs])
print("\n    N   " + "  ".join(f"s={s:<7}" for s in (1.5, 2.5, 3.5)))
for d in designs:
    print(f"{d.n:5d}  " + "  ".join(f"{wce(d, s):9.3e}" for s in (1.5, 2.5, 3.5)))

slope = np.polyfit(np.log(n), np.log([wce(d, 1.5) for d in designs]), 1)[0]
print(f"\nfitted slope at s = 1.5: {slope:.3f} (N^(-s/2) would give -0.75)")

# %%
# Fixed degree, growing N. This is a report only; no ordering is claimed.
t = 6
print(f"\ndesigns of degree {t}:")
for size in (49, 56, 64, 81):
    pts = generate_design(t, n=size, seed=0).points
    print(f"  N={size:3d}  wce(s=1.5)={wce(pts, 1.5):.4e}  radicand={wce_squared(pts, 1.5):.4e}")
