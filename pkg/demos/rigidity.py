"""Rigidity: the tangent complex of a fusion category is acyclic in positive degrees.

Builds the cochain spaces on fusion-tree bases, checks d o d = 0, computes the
first cohomology groups by rank and verifies the contracting homotopy.
"""
from fusioncat.catdata import bundled
from fusioncat.dy import DYComplex

for name in ("trivial", "yang_lee", "e6"):
    cx = DYComplex(bundled(name), max_degree=4)
    dims = [cx.dim(n) for n in range(5)]
    dd = max(cx.dd_residual(n) for n in (1, 2, 3))
    H = [cx.cohomology_dim(n)[0] for n in (1, 2, 3)]
    chi = max(cx.contracting_residual(n) for n in (1, 2))
    print(f"{name:9s} dim C^n = {dims}  |dd| = {dd:.1e}  H^1..3 = {H}  |d chi + chi d - 1| = {chi:.1e}")
