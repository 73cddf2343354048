"""E6: a rank-3 category with a 2-dimensional vertex space.

The apex associator on (x; x, x) is a nontrivial 2x2 matrix, but its cube (the
monodromy) is the identity, so every pivotal operator is trivial.  The same holds
after an arbitrary change of vertex bases.
"""
import numpy as np

from fusioncat.catdata import bundled
from fusioncat.dims import dimension_summary
from fusioncat.gauge import apply_gauge, random_gauge
from fusioncat.pivotal import pivotal_report
from fusioncat.structures import frobenius_schur, solve_pivotal

data = bundled("e6")
t = dimension_summary(data)
print("dims:", np.round(t.fusion, 6), "global:", round(t.global_dim, 6), "pseudo-unitary:", t.pseudo_unitary)

rep = pivotal_report(data)
np.set_printoptions(precision=4, suppress=True)
print("S_xxx =\n", rep.S[(1, 1, 1)])
print("S_xxx^3 =\n", np.linalg.matrix_power(rep.S[(1, 1, 1)], 3))
print("all T trivial:", all(np.allclose(T, np.eye(len(T))) for T in rep.T.values()))

moved = apply_gauge(data, random_gauge(data, np.random.default_rng(0)))
rep2 = pivotal_report(moved)
print("after a random gauge, Tr T^x_xx =", np.round(rep2.traces[1, 1, 1], 12))

s = solve_pivotal(data, rep)
print("pivotal structures:", [x.gamma.real for x in s])
print("third FS indicator of x:", np.round(frobenius_schur(data, s[0].gamma, 1)[1], 6))
