"""Vertex-basis changes, the fair basis, pivotal indicators and the cup/cap kit."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .catdata import FBlock, FusionCategoryData
from .dims import extract_b, paired_dimensions


class GaugeError(ValueError):
    pass


@dataclass
class GaugeTransform:
    """Invertible basis change per vertex space ``(i; j, k)``; columns are new vertices in old coordinates.

    Spaces not listed keep their basis.
    """

    matrices: dict = field(default_factory=dict)
    note: str = ""

    def get(self, ring, i, j, k) -> np.ndarray:
        g = self.matrices.get((i, j, k))
        if g is None:
            return np.eye(ring.N(i, j, k), dtype=complex)
        return np.asarray(g, dtype=complex)

    def compose(self, other: "GaugeTransform") -> "GaugeTransform":
        """Gauge equal to applying ``self`` first and then ``other``."""
        keys = set(self.matrices) | set(other.matrices)
        out = {}
        for key in keys:
            a = self.matrices.get(key)
            b = other.matrices.get(key)
            if a is None:
                out[key] = np.asarray(b, dtype=complex)
            elif b is None:
                out[key] = np.asarray(a, dtype=complex)
            else:
                out[key] = np.asarray(a) @ np.asarray(b)
        return GaugeTransform(out, note="; ".join(x for x in (self.note, other.note) if x))

    def is_identity(self, tol=1e-12) -> bool:
        return all(np.abs(np.asarray(g) - np.eye(len(g))).max() < tol for g in self.matrices.values())

    def as_dict(self, labels) -> dict:
        return {
            "note": self.note,
            "spaces": [
                {"i": k[0], "j": k[1], "k": k[2],
                 "label": f"({labels[k[0]]}; {labels[k[1]]}, {labels[k[2]]})",
                 "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(g)]}
                for k, g in sorted(self.matrices.items())
            ],
        }


def _unit_leg(ring, i, j, k) -> bool:
    return ring.unit in (j, k)


def _row_gauge(ring, g: GaugeTransform, blk: FBlock) -> np.ndarray:
    i, j, k, l = blk.labels
    out = np.zeros((blk.size, blk.size), dtype=complex)
    for r0, (g0, n0, d0) in enumerate(blk.rows):
        for r1, (g1, n1, d1) in enumerate(blk.rows):
            if n0 == n1:
                out[r0, r1] = g.get(ring, i, n0, l)[g0, g1] * g.get(ring, n0, j, k)[d0, d1]
    return out


def _col_gauge(ring, g: GaugeTransform, blk: FBlock) -> np.ndarray:
    i, j, k, l = blk.labels
    out = np.zeros((blk.size, blk.size), dtype=complex)
    for c0, (a0, m0, b0) in enumerate(blk.cols):
        for c1, (a1, m1, b1) in enumerate(blk.cols):
            if m0 == m1:
                out[c0, c1] = g.get(ring, i, j, m0)[a0, a1] * g.get(ring, m0, k, l)[b0, b1]
    return out


def apply_gauge(data: FusionCategoryData, g: GaugeTransform) -> FusionCategoryData:
    """Re-express every block in the new vertex bases: ``F' = G_rows^-1 F G_cols``."""
    ring = data.ring
    for (i, j, k), mat in g.matrices.items():
        mat = np.asarray(mat)
        if mat.shape != (ring.N(i, j, k),) * 2:
            raise GaugeError(f"gauge on ({i}; {j}, {k}) has shape {mat.shape}")
        if _unit_leg(ring, i, j, k) and np.abs(mat - np.eye(len(mat))).max() > 0:
            raise GaugeError(f"vertex space ({i}; {j}, {k}) has a unit leg and keeps its canonical basis")
        if len(mat) and np.linalg.cond(mat) > 1e12:
            raise GaugeError(f"gauge on ({i}; {j}, {k}) is singular")
    if not g.matrices:
        return data.with_blocks(data.stored_blocks())
    blocks = {}
    for key, blk in data.stored_blocks().items():
        if blk.size == 0:
            blocks[key] = blk
            continue
        rows = _row_gauge(ring, g, blk)
        cols = _col_gauge(ring, g, blk)
        blocks[key] = FBlock(key, blk.rows, blk.cols, np.linalg.solve(rows, blk.matrix @ cols))
    return data.with_blocks(blocks)


def random_gauge(data: FusionCategoryData, rng, unitary: bool = False, scale: float = 0.5) -> GaugeTransform:
    """Random invertible basis change on every vertex space without a unit leg."""
    ring = data.ring
    out = {}
    for i, j, k in itertools.product(range(ring.rank), repeat=3):
        n = ring.N(i, j, k)
        if n == 0 or _unit_leg(ring, i, j, k):
            continue
        z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        if unitary:
            q, r = np.linalg.qr(z)
            out[(i, j, k)] = q * (np.diag(r) / abs(np.diag(r)))
        else:
            out[(i, j, k)] = np.eye(n) + scale * z
    return GaugeTransform(out, note="random")


def make_fair_basis(data: FusionCategoryData):
    """Rescale the units ``eta_i`` so that ``a_i = a_i*`` and ``a_i > 0`` for non-self-dual ``i``.

    For each dual pair ``i < i*``, ``eta_i*`` is scaled by the principal root of
    ``a_i / a_i*``; a remaining negative sign is moved onto ``eta_i``.  Self-dual
    labels are untouched.  Returns ``(fair data, gauge)``.
    """
    ring = data.ring
    a, _, _, _ = paired_dimensions(data)
    scale = np.ones(ring.rank, dtype=complex)
    for i in range(ring.rank):
        s = ring.dual[i]
        if s <= i:
            continue
        lam = np.sqrt(a[i] / a[s])
        scale[s] = lam
        if (a[i] / lam).real < 0:
            scale[i] = -1.0
    mats = {}
    for i in range(ring.rank):
        if scale[i] != 1:
            # eta_i lives in (unit; i*, i)
            mats[(ring.unit, ring.dual[i], i)] = np.array([[scale[i]]])
    g = GaugeTransform(mats, note="fair basis: eta_i scaled by principal square roots")
    return apply_gauge(data, g), g


def pivotal_indicators(data: FusionCategoryData) -> np.ndarray:
    """Signs ``p_i``: 1 off the self-dual labels, otherwise the sign of ``a_i d_i``."""
    ring = data.ring
    a, _, _, d = paired_dimensions(data)
    p = np.ones(ring.rank, dtype=int)
    for i in range(ring.rank):
        x = a[i] * d[i]
        if ring.is_self_dual(i):
            p[i] = 1 if x.real > 0 else -1
        if abs(x - p[i]) > 10 * data.tol:
            raise GaugeError(f"not a fair basis: a_{ring.labels[i]} d = {x:.6g}")
    return p


@dataclass
class PairingKit:
    """Coefficients of the duality maps of every simple in the vertex bases.

    ``cup[i]`` multiplies ``eta_i`` (right unit ``1 -> i* i``); ``cap[i]`` multiplies the
    dual of ``eta_i*`` (right counit ``i i* -> 1``); ``left_cup[i]`` multiplies ``eta_i*``
    (left unit ``1 -> i i*``); ``left_cap[i]`` multiplies the dual of ``eta_i`` (left counit
    ``i* i -> 1``).
    """

    dims: np.ndarray
    cup: np.ndarray
    cap: np.ndarray
    left_cup: np.ndarray
    left_cap: np.ndarray
    snake_residuals: dict
    loops: dict

    @property
    def max_snake_residual(self) -> float:
        return max(self.snake_residuals.values(), default=0.0)


def pairing_kit(data: FusionCategoryData) -> PairingKit:
    ring = data.ring
    a, _, _, d = paired_dimensions(data)
    b = np.array([extract_b(data, i) for i in range(ring.rank)])
    dual = list(ring.dual)
    cup = np.ones(ring.rank, dtype=complex)
    cap = 1.0 / a
    left_cap = d.astype(complex)
    left_cup = d * a
    res, loops = {}, {}
    for i in range(ring.rank):
        s = dual[i]
        res[(i, "right", 1)] = abs(cap[i] * cup[i] * a[i] - 1)
        res[(i, "right", 2)] = abs(cap[i] * cup[i] * b[s] - 1)
        res[(i, "left", 1)] = abs(left_cap[i] * left_cup[i] * a[s] - 1)
        res[(i, "left", 2)] = abs(left_cap[i] * left_cup[i] * b[i] - 1)
        loops[(i, "e.eta")] = complex(left_cap[i] * cup[i])
        loops[(i, "eps.n")] = complex(cap[i] * left_cup[i])
    kit = PairingKit(d, cup, cap, left_cup, left_cap, {k: float(v) for k, v in res.items()}, loops)
    if kit.max_snake_residual > 10 * data.tol:
        raise GaugeError(f"snake equations fail: residual {kit.max_snake_residual:.3g}")
    return kit
