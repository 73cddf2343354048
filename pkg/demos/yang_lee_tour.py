"""Yang-Lee: a fusion category that is not pseudo-unitary.

Walks from the raw F-symbols to dimensions, the pivotal operator, the unique
pivotal structure and the doubled (sphericalized) category.
"""
import numpy as np

from fusioncat.catdata import bundled, validate
from fusioncat.dims import dimension_summary
from fusioncat.pivotal import pivotal_report
from fusioncat.structures import fusion_homomorphisms, solve_pivotal, sphericalize

data = bundled("yang_lee")
print("checks:", {r.check: r.ok for r in validate(data)})

t = dimension_summary(data)
print(f"FP dim of tau     {t.fp[1]:.6f}")
print(f"fusion dim of tau {t.fusion[1]:.6f}   (a_tau = {t.a[1].real:.6f})")
print("pseudo-unitary:", t.pseudo_unitary)

rep = pivotal_report(data)
print("pivotal indicators:", rep.p)
print("T^tau_(tau,tau) =", rep.T[(1, 1, 1)].real.ravel())

sols = solve_pivotal(data, rep)
for s in sols:
    print("pivotal structure gamma =", s.gamma.real, "quantum dims =", np.round(s.qdims.real, 6))
print("fusion homomorphisms:", [np.round(h.values.real, 6) for h in fusion_homomorphisms(data).fusion_homs])

sph, canon = sphericalize(data, rep)
N = sph.ring.mult
for a in range(sph.rank):
    for b in range(a, sph.rank):
        terms = [sph.labels[c] for c in range(sph.rank) for _ in range(N[c, a, b])]
        print(f"  {sph.labels[a]} x {sph.labels[b]} = {' + '.join(terms)}")
print("canonical quantum dims:", np.round(canon.qdims.real, 6))
