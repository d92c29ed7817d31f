"""
Geometry of point sets
======================

Three numbers summarize how evenly nodes cover the sphere: the mesh norm h
(largest distance to the nearest node), the minimal angle delta between
nodes and the mesh ratio 2h/delta, which is at least 1. This script compares
designs, equal-area partition centers and trapezoidal grids.
"""

import numpy as np

from sphquad import distinct_nodes, equal_area_points, generate_design, geometry_report, trapezoidal_rule

# %%
# The regular tetrahedron is a 2-design with known metrics.
tet = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / np.sqrt(3)
rep = geometry_report(tet)
print(f"tetrahedron: h={rep.mesh_norm:.10f} (pi - arccos(-1/3) = {np.pi - np.arccos(-1 / 3):.10f})")
print(f"             delta={rep.min_angle:.10f} (arccos(-1/3) = {np.arccos(-1 / 3):.10f})")

# %%
# The three families at comparable sizes. Trapezoidal grids bunch their
# nodes at the poles, so their minimal angle collapses and the mesh ratio
# grows with n.
print("\nfamily          N      h        delta    ratio")
for t in (10, 20, 30):
    pts = generate_design(t, seed=0).points
    r = geometry_report(pts, 100)
    print(f"design t={t:<4d}{pts.n:5d}  {r.mesh_norm:.4f}  {r.min_angle:.4f}  {r.mesh_ratio:.3f}")
for N in (121, 441, 961):
    r = geometry_report(equal_area_points(N), 100)
    print(f"equal-area     {N:5d}  {r.mesh_norm:.4f}  {r.min_angle:.4f}  {r.mesh_ratio:.3f}")
for n in (6, 10, 14):
    pts = distinct_nodes(trapezoidal_rule(n))
    r = geometry_report(pts, 100)
    print(f"trapezoid n={n:<3d}{pts.n:5d}  {r.mesh_norm:.4f}  {r.min_angle:.4f}  {r.mesh_ratio:.3f}")
