"""Generate ``e6.json``: F-symbols for the rank-3 ring xx = 1 + 2x + y, xy = yx = x, yy = 1.

The pentagon is solved numerically (Levenberg-Marquardt with an exact Jacobian from
jax) together with unitarity of every block, starting from random complex blocks.
The solution (complex conjugated if needed) is then gauged on the vertex space
(x; x, x) so that the apex associator S_xxx is the inverse of the coefficient matrix
(1/sqrt 2) e^{-7 pi i/12} [[1, 1], [-i, i]], i.e. (1/sqrt 2) e^{7 pi i/12} [[1, i], [1, -i]].

Run: python tools/solve_e6.py [raw.npy]   (reuses raw.npy if it exists)
"""
import itertools
import sys
from pathlib import Path

import jax
import jax.numpy as jnp
import numpy as np
from scipy.optimize import least_squares

from fusioncat.catdata import (FBlock, FusionCategoryData, FusionRing, block_cols,
                               block_rows, save_category, validate)

jax.config.update("jax_enable_x64", True)

N = np.zeros((3, 3, 3), dtype=int)
for i in range(3):
    N[i, 0, i] = N[i, i, 0] = 1
N[0, 1, 1], N[1, 1, 1], N[2, 1, 1] = 1, 2, 1
N[1, 1, 2] = N[1, 2, 1] = 1
N[0, 2, 2] = 1
RING = FusionRing(("1", "x", "y"), 0, (0, 1, 2), N)

KEYS = [k for k in itertools.product(range(3), (1, 2), (1, 2), (1, 2)) if block_rows(RING, *k)]
SIZES = [len(block_rows(RING, *k)) for k in KEYS]
NPAR = sum(s * s for s in SIZES)
OUT = Path(__file__).resolve().parents[1] / "src" / "fusioncat" / "data" / "e6.json"


def unpack(x):
    z = x[:NPAR] + 1j * x[NPAR:]
    out, pos = {}, 0
    for k, s in zip(KEYS, SIZES):
        out[k] = z[pos:pos + s * s].reshape(s, s)
        pos += s * s
    return out


def pack(mats):
    z = np.concatenate([np.asarray(mats[k]).ravel() for k in KEYS])
    return np.concatenate([z.real, z.imag])


def data_from(mats):
    blocks = {k: FBlock(k, block_rows(RING, *k), block_cols(RING, *k), np.asarray(m)) for k, m in mats.items()}
    return FusionCategoryData(RING, blocks, name="e6")


def channel_maps():
    """For every (block, n, m): row/col positions forming the 4-index channel."""
    maps = {}
    for i, j, k, l in itertools.product(range(3), repeat=4):
        rows, cols = block_rows(RING, i, j, k, l), block_cols(RING, i, j, k, l)
        ri = {r: p for p, r in enumerate(rows)}
        ci = {c: p for p, c in enumerate(cols)}
        for n, m in itertools.product(range(3), repeat=2):
            sg, sd, sa, sb = N[i, n, l], N[n, j, k], N[i, j, m], N[m, k, l]
            if not (sg and sd and sa and sb):
                continue
            R = np.array([[ri[(g, n, d)] for d in range(sd)] for g in range(sg)])
            C = np.array([[ci[(a, m, b)] for b in range(sb)] for a in range(sa)])
            maps[(i, j, k, l, n, m)] = (R, C)
    return maps


MAPS = channel_maps()


def ch(mats, i, j, k, l, n, m):
    if (i, j, k, l, n, m) not in MAPS:
        return jnp.zeros((N[i, n, l], N[n, j, k], N[i, j, m], N[m, k, l]))
    R, C = MAPS[(i, j, k, l, n, m)]
    key = (i, j, k, l)
    B = mats[key] if key in mats else jnp.eye(len(block_rows(RING, *key)))
    return B[R[:, :, None, None], C[None, None, :, :]]


def residual(x):
    mats = unpack(x)
    res = []
    for t, a, b, c, d in itertools.product(range(3), (1, 2), (1, 2), (1, 2), (1, 2)):
        for m, r, s, u in itertools.product(range(3), repeat=4):
            if not (N[t, a, m] and N[m, b, r] and N[r, c, d] and N[s, a, b] and N[u, s, c] and N[t, u, d]):
                continue
            p1 = jnp.einsum("pvab,klpg->abgvlk", ch(mats, t, a, b, r, s, m), ch(mats, t, s, c, d, u, r))
            p2 = jnp.zeros_like(p1)
            for q in range(3):
                if not (N[m, q, d] and N[q, b, c] and N[u, a, q]):
                    continue
                p2 = p2 + jnp.einsum("rsbg,kpar,lvps->abgvlk", ch(mats, m, b, c, d, q, r),
                                     ch(mats, t, a, q, d, u, m), ch(mats, u, a, b, c, s, q))
            res.append((p1 - p2).ravel())
    for k in KEYS:
        M = mats[k]
        res.append((M @ M.conj().T - jnp.eye(len(M))).ravel())
    z = jnp.concatenate(res)
    return jnp.concatenate([z.real, z.imag])


RES = jax.jit(residual)
JAC = jax.jit(jax.jacfwd(residual))


def solve(seed):
    rng = np.random.default_rng(seed)
    x0 = rng.normal(size=2 * NPAR) * 0.5
    sol = least_squares(lambda x: np.asarray(RES(x)), x0, jac=lambda x: np.asarray(JAC(x)),
                        method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=3000)
    return sol.x, float(np.abs(np.asarray(RES(sol.x))).max())


def find_solution(max_seeds=500):
    for seed in range(max_seeds):
        x, r = solve(seed)
        print(f"seed {seed}: residual {r:.2e}", flush=True)
        if r < 1e-12:
            return x
    raise SystemExit("no solution found")


def target_apex():
    coeff = np.exp(-7j * np.pi / 12) / np.sqrt(2) * np.array([[1, 1], [-1j, 1j]])
    return np.linalg.inv(coeff)


def gauge_to_target(data):
    from fusioncat.gauge import GaugeTransform, apply_gauge
    from fusioncat.pivotal import apex_associator

    St = target_apex()
    S = apex_associator(data, 1, 1, 1)
    ev_t, Vt = np.linalg.eig(St)
    ev, Vs = np.linalg.eig(S)
    if not all(np.min(abs(ev - e)) < 1e-8 for e in ev_t):
        return None
    order = [int(np.argmin(abs(ev - e))) for e in ev_t]
    Vs = Vs[:, order]
    g = Vs @ np.linalg.inv(Vt)
    out = apply_gauge(data, GaugeTransform({(1, 1, 1): g}, note="match apex associator"))
    if np.abs(apex_associator(out, 1, 1, 1) - St).max() > 1e-10:
        raise SystemExit("gauge did not reach the target apex associator")
    return out


def main(raw):
    if Path(raw).exists():
        x = np.load(raw)
    else:
        x = find_solution()
        np.save(raw, x)
    mats = {k: np.asarray(v) for k, v in unpack(x).items()}
    for conj in (False, True):
        cand = data_from({k: (m.conj() if conj else m) for k, m in mats.items()})
        out = gauge_to_target(cand)
        if out is not None:
            break
    else:
        raise SystemExit("apex associator spectrum does not match in either orientation")
    data = FusionCategoryData(RING, {k: FBlock(k, b.rows, b.cols, b.matrix) for k, b in out.stored_blocks().items()},
                              name="e6")
    for rep in validate(data):
        print(rep.check, rep.ok, f"{rep.max_residual:.2e}")
        if not rep.ok:
            raise SystemExit(rep.violations[:5])
    save_category(data, OUT)
    print("wrote", OUT, "conjugated" if conj else "")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "/tmp/e6_raw.npy")
