"""Pivotal structures, quantum dimensions, Frobenius-Schur indicators, fusion homomorphisms
and the sphericalization."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .catdata import FBlock, FusionCategoryData, FusionRing, block_cols, block_rows
from .dims import paired_dimensions
from .gauge import make_fair_basis, pivotal_indicators
from .pivotal import PivotalReport, cyclic_operator, pivotal_report


class StructureError(ArithmeticError):
    pass


# ---------------------------------------------------------------- Smith normal form

def smith_normal_form(A):
    """Integer matrices ``(U, D, V)`` with ``U A V = D`` diagonal, ``d_1 | d_2 | ...``, ``d_k >= 0``.

    ``U`` and ``V`` are unimodular.  Exact arithmetic on Python ints.
    """
    A = [[int(x) for x in row] for row in np.asarray(A, dtype=object)]
    m = len(A)
    n = len(A[0]) if m else 0
    D = [row[:] for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(a, b):
        D[a], D[b] = D[b], D[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for M in (D, V):
            for row in M:
                row[a], row[b] = row[b], row[a]

    def add_row(dst, src, q):  # row_dst += q row_src
        for M in (D, U):
            M[dst] = [x + q * y for x, y in zip(M[dst], M[src])]

    def add_col(dst, src, q):
        for M in (D, V):
            for row in M:
                row[dst] += q * row[src]

    def move_min_to(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            return False
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        return True

    for t in range(min(m, n)):
        if not move_min_to(t):
            break
        while True:
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
            if any(D[i][t] for i in range(t + 1, m)) or any(D[t][j] for j in range(t + 1, n)):
                # a smaller remainder appeared in row/col t: make it the pivot
                best = min(((i, t) for i in range(t, m) if D[i][t]), key=lambda x: abs(D[x[0]][x[1]]))
                best2 = min(((t, j) for j in range(t, n) if D[t][j]), key=lambda x: abs(D[x[0]][x[1]]))
                if abs(D[best2[0]][best2[1]]) < abs(D[best[0]][best[1]]):
                    swap_cols(t, best2[1])
                else:
                    swap_rows(t, best[0])
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            for M in (D, U):
                M[t] = [-x for x in M[t]]
    return np.array(U, dtype=object), np.array(D, dtype=object).reshape(m, n), np.array(V, dtype=object)


# ---------------------------------------------------------------- pivotal structures

@dataclass
class PivotalStructure:
    gamma: np.ndarray
    theta: tuple
    spherical: bool
    qdims: np.ndarray

    def as_dict(self, labels) -> dict:
        return {
            "gamma": {lab: [float(g.real), float(g.imag)] for lab, g in zip(labels, self.gamma)},
            "theta": [str(t) for t in self.theta],
            "spherical": self.spherical,
            "qdims": {lab: [float(q.real), float(q.imag)] for lab, q in zip(labels, self.qdims)},
        }


class PivotalSolutions(list):
    """List of pivotal structures plus the reason for an empty answer."""

    def __init__(self, items=(), reason: str = "", certificate=None, relations=None):
        super().__init__(items)
        self.reason = reason
        self.certificate = certificate
        self.relations = relations or []


def pivotal_relations(report: PivotalReport):
    """``(i, j, k, eps)`` for every admissible triple: ``gamma_j gamma_k = eps gamma_i``."""
    out = []
    for (i, j, k), T in sorted(report.T.items()):
        out.append((i, j, k, 1 if T[0, 0].real > 0 else -1))
    return out


def solve_pivotal(data: FusionCategoryData, report: PivotalReport | None = None) -> PivotalSolutions:
    """All solutions ``gamma`` of ``gamma_j gamma_k = gamma_i eps^i_jk`` with ``|gamma| = 1``.

    Writing ``gamma = exp(2 pi i theta)`` gives integer relations mod 1; the Smith normal
    form decides consistency and lists every torsion solution.
    """
    if report is None:
        report = pivotal_report(data)
    if not report.orientable:
        return PivotalSolutions(reason="not orientable: pivotal operators "
                                + ", ".join(map(str, report.offending)) + " are not scalar")
    ring = report.data.ring
    rels = pivotal_relations(report)
    R = np.zeros((len(rels), ring.rank), dtype=int)
    rhs = []
    for r, (i, j, k, eps) in enumerate(rels):
        R[r, j] += 1
        R[r, k] += 1
        R[r, i] -= 1
        rhs.append(Fraction(0) if eps > 0 else Fraction(1, 2))
    U, D, V = smith_normal_form(R)
    c = [sum((int(U[a, b]) * rhs[b] for b in range(len(rhs))), Fraction(0)) for a in range(len(rhs))]
    diag = [int(D[t, t]) for t in range(min(D.shape))]
    rank = sum(1 for x in diag if x)
    for a in range(rank, len(rels)):
        if c[a] % 1:
            cert = {rels[b][:3]: int(U[a, b]) for b in range(len(rels)) if U[a, b]}
            return PivotalSolutions(reason="inconsistent pivotal equations", certificate=cert, relations=rels)
    if rank < ring.rank:
        raise StructureError(f"pivotal equations leave {ring.rank - rank} continuous parameters; data error")
    d = paired_dimensions(report.data)[3]
    sols = []
    for z in itertools.product(*[range(diag[t]) for t in range(rank)]):
        phi = [(c[t] + z[t]) / diag[t] for t in range(rank)]
        theta = tuple(sum((int(V[a, t]) * phi[t] for t in range(rank)), Fraction(0)) % 1 for a in range(ring.rank))
        gamma = np.array([_root_of_unity(t) for t in theta])
        sols.append(PivotalStructure(gamma, theta, all(t in (0, Fraction(1, 2)) for t in theta), gamma * d))
    sols.sort(key=lambda s: s.theta)
    for s in sols:
        res = max(abs(s.gamma[j] * s.gamma[k] - eps * s.gamma[i]) for i, j, k, eps in rels)
        if res > 1e-12:
            raise StructureError(f"solution fails its relations by {res:.3g}")
    return PivotalSolutions(sols, relations=rels)


def _root_of_unity(theta: Fraction) -> complex:
    if (4 * theta).denominator == 1:
        return complex(1j ** int(4 * theta))
    return complex(np.exp(2j * np.pi * float(theta)))


def quantum_dims(data: FusionCategoryData, gamma) -> np.ndarray:
    return np.asarray(gamma) * paired_dimensions(data)[3]


def frobenius_schur(data: FusionCategoryData, gamma, i: int):
    """``(nu_2, nu_3)`` of ``X_i`` for the pivotal structure ``gamma``; ``nu_2`` is ``None`` off self-dual labels."""
    fair, _ = make_fair_basis(data)
    g = complex(np.asarray(gamma)[i])
    nu2 = g * pivotal_indicators(fair)[i] if fair.ring.is_self_dual(i) else None
    C = cyclic_operator(fair, i, i, i)
    nu3 = g * complex(np.trace(C))
    return nu2, nu3


# ---------------------------------------------------------------- fusion homomorphisms

@dataclass
class FusionHomomorphism:
    values: np.ndarray
    residual: float
    pairing_residual: float

    @property
    def is_fusion(self) -> bool:
        return self.pairing_residual < 1e-9


@dataclass
class HomomorphismSearch:
    ring_homs: list
    fusion_homs: list
    warnings: list = field(default_factory=list)


def ring_homomorphisms(ring: FusionRing, tol: float = 1e-9, seed: int = 0):
    """Characters of the fusion ring: common eigenvectors ``f`` of ``L_j^T`` with ``f_unit = 1``."""
    rng = np.random.default_rng(seed)
    mats = [ring.fusion_matrix(j).T.astype(float) for j in range(ring.rank)]
    M = sum(rng.normal() * m for m in mats)
    w, vecs = np.linalg.eig(M)
    out, warnings = [], []
    for a in range(len(w)):
        if np.sum(abs(w - w[a]) < 1e-7 * max(1.0, abs(w[a]))) > 1:
            warnings.append(f"degenerate eigenvalue {w[a]:.6g}; characters may be missed")
        f = vecs[:, a]
        if abs(f[ring.unit]) < tol:
            continue
        f = f / f[ring.unit]
        res = max(np.abs(np.outer(f, f) - np.einsum("ijk,i->jk", ring.mult, f)).max(), 0.0)
        if res > 1e-8 * max(1.0, np.abs(f).max() ** 2):
            continue
        if not any(np.abs(f - g).max() < 1e-8 for g, _ in out):
            out.append((f, float(res)))
    out.sort(key=lambda x: tuple(np.round(np.concatenate([x[0].real, x[0].imag]), 8)))
    return out, sorted(set(warnings))


def fusion_homomorphisms(data: FusionCategoryData) -> HomomorphismSearch:
    """Ring characters, and those with ``f_i f_i* = d_{i,i*}`` (the fusion homomorphisms)."""
    ring = data.ring
    paired = paired_dimensions(data)[2]
    chars, warnings = ring_homomorphisms(ring, data.tol)
    homs = []
    for f, res in chars:
        pr = float(np.abs(f * f[list(ring.dual)] - paired).max())
        homs.append(FusionHomomorphism(f, res, pr))
    fusion = [h for h in homs if h.pairing_residual < max(data.tol, 1e-9) * max(1.0, paired.real.max())]
    return HomomorphismSearch(homs, fusion, warnings)


# ---------------------------------------------------------------- sphericalization

def _split_vertices(report: PivotalReport, ring: FusionRing):
    """For each old vertex space and sign, the old (pivotal-basis) vertices with that symbol."""
    out = {}
    for i, j, k in itertools.product(range(ring.rank), repeat=3):
        n = ring.N(i, j, k)
        sym = report.symbols.get((i, j, k), [1] * n)
        for s in (1, -1):
            out[(i, j, k, s)] = [a for a in range(n) if sym[a] == s]
    return out


def sphericalize(data: FusionCategoryData, report: PivotalReport | None = None):
    """Doubled category with simples ``(i, s)``; returns ``(data, canonical PivotalStructure)``.

    Vertex spaces are the ``s_i s_j s_k`` eigenspaces of the pivotal operators and the
    F-blocks are the matching sub-blocks of the F-data in a pivotal basis.  Label
    ``(i, s)`` has index ``2 i + (s < 0)``.
    """
    if report is None:
        report = pivotal_report(data)
    piv = report.pivotal_data()
    ring = piv.ring
    n = ring.rank
    idx = lambda i, s: 2 * i + (s < 0)  # noqa: E731
    sgn = lambda a: 1 if a % 2 == 0 else -1  # noqa: E731
    split = _split_vertices(report, ring)
    mult = np.zeros((2 * n,) * 3, dtype=np.int64)
    for a, b, c in itertools.product(range(2 * n), repeat=3):
        mult[a, b, c] = len(split[(a // 2, b // 2, c // 2, sgn(a) * sgn(b) * sgn(c))])
    labels = tuple(f"{lab}{'+' if s > 0 else '-'}" for lab in ring.labels for s in (1, -1))
    dual = tuple(idx(ring.dual[a // 2], sgn(a)) for a in range(2 * n))
    new_ring = FusionRing(labels, idx(ring.unit, 1), dual, mult)

    def old_vertex(a, b, c, v):
        return split[(a // 2, b // 2, c // 2, sgn(a) * sgn(b) * sgn(c))][v]

    blocks = {}
    new_unit = new_ring.unit
    for key in itertools.product(range(2 * n), repeat=4):
        if new_unit in key[1:]:
            continue
        rows, cols = block_rows(new_ring, *key), block_cols(new_ring, *key)
        if not rows:
            continue
        if len(rows) != len(cols):
            raise StructureError(f"sphericalized block {key} is not square")
        i, j, k, l = key
        old = piv.block(i // 2, j // 2, k // 2, l // 2)
        r_old = [old.row_index[(old_vertex(i, nn, l, g), nn // 2, old_vertex(nn, j, k, d))] for g, nn, d in rows]
        c_old = [old.col_index[(old_vertex(i, j, m, a), m // 2, old_vertex(m, k, l, b))] for a, m, b in cols]
        blocks[key] = FBlock(key, rows, cols, old.matrix[np.ix_(r_old, c_old)])
    out = FusionCategoryData(new_ring, blocks, tol=data.tol, name=f"{data.name}_sphericalized" if data.name else "")
    d = paired_dimensions(report.data)[3]
    t = np.array([sgn(a) for a in range(2 * n)], dtype=complex)
    theta = tuple(Fraction(0) if sgn(a) > 0 else Fraction(1, 2) for a in range(2 * n))
    canonical = PivotalStructure(t, theta, True, t * np.repeat(d, 2))
    return out, canonical
