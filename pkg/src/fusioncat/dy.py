"""Davydov-Yetter tangent complex on left-comb fusion-tree bases.

A cochain in ``C^n`` is a natural endomorphism of ``X_1 (x) ... (x) X_n``; on the
left-comb basis of ``Hom(X_t, ((X_1 X_2) X_3) ... X_n)`` it is a square block per
(tuple, root).  Blocks are stored row-major, tuples in ``itertools.product`` order,
roots in label order.  A block ``M`` acts as ``c(w_b) = sum_a M[a, b] w_a``.

Faces ``f_k : C^n -> C^{n+1}`` (strands numbered from 0): ``f_0`` puts an identity
strand on the left, ``f_{n+1}`` on the right, and ``f_k`` (``1 <= k <= n``) feeds the
product of strands ``k-1, k`` into one input of the cochain.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from . import trees as tr
from .catdata import FusionCategoryData
from .dims import paired_dimensions

MAX_DEGREE = 4


class DegreeError(ValueError):
    pass


@dataclass
class TreeBasis:
    n: int
    blocks: list  # (tuple, root, trees)
    offsets: dict  # (tuple, root) -> offset into the cochain vector
    dim: int

    def block(self, X, t):
        return self.offsets[(tuple(X), t)]


def _leaf_path(tree, pos):
    """Path to the leaf with left-to-right index ``pos``."""
    path, node = [], tree
    while not tr.is_leaf(node):
        nl = len(tr.leaves(node[2]))
        if pos < nl:
            path.append(0)
            node = node[2]
        else:
            path.append(1)
            pos -= nl
            node = node[3]
    return tuple(path)


class DYComplex:
    """Face maps, differentials and the contracting homotopy of one data set."""

    def __init__(self, data: FusionCategoryData, max_degree: int = MAX_DEGREE):
        self.data = data
        self.ring = data.ring
        self.max_degree = max_degree
        self._bases = {}
        self._faces = {}
        self._prepend_blocks = {}
        self._chi = {}

    # ------------------------------------------------------------ bases
    def basis(self, n: int) -> TreeBasis:
        if n < 0 or n > self.max_degree:
            raise DegreeError(f"degree {n} outside 0..{self.max_degree}")
        if n not in self._bases:
            blocks, offsets, pos = [], {}, 0
            for X in itertools.product(range(self.ring.rank), repeat=n):
                for t in range(self.ring.rank):
                    trees = tr.comb_trees(self.data, X, t)
                    if not trees:
                        continue
                    blocks.append((X, t, trees))
                    offsets[(X, t)] = pos
                    pos += len(trees) ** 2
            self._bases[n] = TreeBasis(n, blocks, offsets, pos)
        return self._bases[n]

    def dim(self, n: int) -> int:
        return self.basis(n).dim

    # ------------------------------------------------------------ face maps
    def _structured(self, k: int, n: int, J: tuple, t: int):
        """Groups ``(source tuple, source root, trees[s][x])`` of a structured basis of W(J; t)."""
        ring, data = self.ring, self.data
        groups = []
        if k == 0:
            j0, rest = J[0], J[1:]
            for m in range(ring.rank):
                src = tr.comb_trees(data, rest, m)
                if not src or not ring.N(t, j0, m):
                    continue
                groups.append((rest, m, [[(t, a, (j0,), s) for a in range(ring.N(t, j0, m))] for s in src]))
        elif k == n + 1:
            rest, jl = J[:-1], J[-1]
            for m in range(ring.rank):
                src = tr.comb_trees(data, rest, m)
                if not src or not ring.N(t, m, jl):
                    continue
                groups.append((rest, m, [[(t, v, s, (jl,)) for v in range(ring.N(t, m, jl))] for s in src]))
        else:
            a, b = J[k - 1], J[k]
            for mu in range(ring.rank):
                nmu = ring.N(mu, a, b)
                if not nmu:
                    continue
                red = J[:k - 1] + (mu,) + J[k + 1:]
                src = tr.comb_trees(data, red, t)
                if not src:
                    continue
                groups.append((red, t, [[tr.replace(s, _leaf_path(s, k - 1), (mu, be, (a,), (b,)))
                                         for be in range(nmu)] for s in src]))
        return groups

    def face(self, n: int, k: int) -> sp.csr_matrix:
        """Matrix of ``f^n_k : C^n -> C^{n+1}``."""
        if not 0 <= k <= n + 1:
            raise ValueError(f"face index {k} outside 0..{n + 1}")
        key = (n, k)
        if key not in self._faces:
            src, dst = self.basis(n), self.basis(n + 1)
            if n == 0:
                rows = [dst.offsets[((i,), i)] for i in range(self.ring.rank)]
                M = sp.csr_matrix((np.ones(len(rows), dtype=complex), (rows, [0] * len(rows))),
                                  shape=(dst.dim, 1))
            else:
                M = self._assemble(n, k, src, dst)
            self._faces[key] = M
        return self._faces[key]

    def _block_maps(self, n, k, J, t, w):
        """For output block (J, t): list of (source offset, ns, K) with K: vec(M_src) -> vec(out)."""
        idx = tr.comb_index(self.data, J, t)
        groups = self._structured(k, n, J, t)
        cols, meta = [], []
        for S, r, trees in groups:
            ns, nx = len(trees), len(trees[0])
            for s in range(ns):
                for x in range(nx):
                    vec = tr.to_left_comb({trees[s][x]: 1.0}, self.data)
                    cols.append(tr.coordinates(vec, idx))
            meta.append((S, r, ns, nx))
        U = np.array(cols).T
        if U.shape != (w, w):
            raise ArithmeticError(f"structured basis of {J}, root {t} has wrong size {U.shape}")
        V = np.linalg.inv(U)
        out, pos = [], 0
        for S, r, ns, nx in meta:
            U3 = U[:, pos:pos + ns * nx].reshape(w, ns, nx)
            V3 = V[pos:pos + ns * nx, :].reshape(ns, nx, w)
            K = np.einsum("asx,yxb->absy", U3, V3).reshape(w * w, ns * ns)
            out.append(((S, r), ns, K))
            pos += ns * nx
        return out

    def _assemble(self, n, k, src, dst):
        rows, cols, vals = [], [], []
        for J, t, trees in dst.blocks:
            w = len(trees)
            base = dst.offsets[(J, t)]
            for (S, r), ns, K in self._block_maps(n, k, J, t, w):
                if k == 0:
                    self._prepend_blocks[(J, t, S, r)] = K
                soff = src.offsets[(S, r)]
                nz = np.nonzero(np.abs(K) > 1e-15)
                rows.append(base + nz[0])
                cols.append(soff + nz[1])
                vals.append(K[nz])
        if not rows:
            return sp.csr_matrix((dst.dim, src.dim), dtype=complex)
        return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                             shape=(dst.dim, src.dim))

    def differential(self, n: int) -> sp.csr_matrix:
        """``d^n = sum_k (-1)^k f^n_k``."""
        return sum(((-1) ** k) * self.face(n, k) for k in range(n + 2)).tocsr()

    # ------------------------------------------------------------ homotopy
    @cached_property
    def _weights(self):
        d = paired_dimensions(self.data)[3]
        return d ** 2 / float((d ** 2).sum())

    def homotopy(self, n: int) -> sp.csr_matrix:
        """``chi^n : C^n -> C^{n-1}``: close the leftmost strand, weight ``d_p^2 / D``.

        The closure reads off the channel of ``f_0(c)`` on ``(p*, p, X)`` in which the
        first two strands fuse to the unit through ``eta_p``.
        """
        if n < 1:
            raise DegreeError("chi is defined for n >= 1")
        if n in self._chi:
            return self._chi[n]
        ring, data = self.ring, self.data
        self.face(n, 0)  # fills the prepend blocks for arity n + 1
        src, dst = self.basis(n), self.basis(n - 1)
        u = ring.unit
        rows, cols, vals = [], [], []
        for X, t, trees in dst.blocks:
            base = dst.offsets[(X, t)]
            for p in range(ring.rank):
                ps = ring.dual[p]
                J = (ps, p) + X
                bidx = tr.comb_index(data, J, t)
                cap = (u, 0, (ps,), (p,))
                if X:
                    emb = [tr.replace(s, _leaf_path(s, 0), (X[0], 0, cap, (X[0],))) for s in trees]
                else:
                    emb = [cap]
                sel = np.array([bidx[e] for e in emb])
                wb = len(bidx)
                flat = (sel[:, None] * wb + sel[None, :]).ravel()
                for (S, r), K in ((key[2:], K) for key, K in self._prepend_blocks.items()
                                  if key[0] == J and key[1] == t):
                    part = self._weights[p] * K[flat]
                    nz = np.nonzero(np.abs(part) > 1e-15)
                    rows.append(base + nz[0])
                    cols.append(src.offsets[(S, r)] + nz[1])
                    vals.append(part[nz])
        M = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                          shape=(dst.dim, src.dim)) if rows else sp.csr_matrix((dst.dim, src.dim), dtype=complex)
        self._chi[n] = M
        return M

    # ------------------------------------------------------------ checks
    def dd_residual(self, n: int) -> float:
        """``||d^n d^{n-1}||`` (max entry)."""
        P = self.differential(n) @ self.differential(n - 1)
        return float(abs(P).max()) if P.nnz else 0.0

    def simplicial_residual(self, n: int) -> float:
        """max over ``k <= m`` of ``||f^{n+1}_k f^n_m - f^{n+1}_{m+1} f^n_k||``."""
        worst = 0.0
        for k in range(n + 2):
            for m in range(k, n + 2):
                D = self.face(n + 1, k) @ self.face(n, m) - self.face(n + 1, m + 1) @ self.face(n, k)
                if D.nnz:
                    worst = max(worst, float(abs(D).max()))
        return worst

    def rank(self, n: int, tol: float | None = None):
        """``(rank d^n, ambiguous)`` from singular values relative to the largest."""
        tol = self.data.tol if tol is None else tol
        if n < 0:
            return 0, False
        M = self.differential(n).toarray()
        if M.size == 0:
            return 0, False
        s = np.linalg.svd(M, compute_uv=False)
        if s.size == 0 or s[0] == 0:
            return 0, False
        cut = tol * s[0]
        ambiguous = bool(np.any((s > cut / 10) & (s < cut * 10)))
        return int((s > cut).sum()), ambiguous

    def cohomology_dim(self, n: int):
        """``(dim H^n, ambiguous)``."""
        r_out, a1 = self.rank(n)
        r_in, a2 = self.rank(n - 1)
        return self.dim(n) - r_out - r_in, a1 or a2

    def contracting_residual(self, n: int) -> float:
        """``||d^{n-1} chi^n + chi^{n+1} d^n - id||`` on ``C^n``."""
        A = self.differential(n - 1) @ self.homotopy(n) + self.homotopy(n + 1) @ self.differential(n)
        A = A - sp.identity(self.dim(n), dtype=complex, format="csr")
        return float(abs(A).max()) if A.nnz else 0.0

    def chi_face_residuals(self, n: int) -> dict:
        """Residuals of ``chi f_0 = id``, ``chi f_1 = f_0 chi`` and ``chi f_k = f_{k-1} chi`` (k >= 2) on ``C^n``."""
        chi1 = self.homotopy(n + 1)
        out = {}
        for k in range(n + 2):
            lhs = chi1 @ self.face(n, k)
            if k == 0:
                rhs = sp.identity(self.dim(n), dtype=complex, format="csr")
            else:
                if n == 0:
                    continue
                rhs = self.face(n - 1, k - 1) @ self.homotopy(n)
            D = lhs - rhs
            out[k] = float(abs(D).max()) if D.nnz else 0.0
        return out


_CACHE: dict = {}


def complex_for(data: FusionCategoryData, max_degree: int = MAX_DEGREE) -> DYComplex:
    key = (data.digest(), max_degree)
    if key not in _CACHE:
        _CACHE[key] = DYComplex(data, max_degree)
    return _CACHE[key]


def cochain_space(data, n, max_degree=MAX_DEGREE) -> TreeBasis:
    return complex_for(data, max_degree).basis(n)


def face_map(data, n, k, max_degree=MAX_DEGREE):
    return complex_for(data, max_degree).face(n, k)


def differential(data, n, max_degree=MAX_DEGREE):
    return complex_for(data, max_degree).differential(n)


def cohomology_dim(data, n, max_degree=MAX_DEGREE) -> int:
    dim, ambiguous = complex_for(data, max_degree).cohomology_dim(n)
    if ambiguous:
        import warnings
        warnings.warn(f"rank near the threshold in degree {n}", RuntimeWarning, stacklevel=2)
    return dim


def homotopy(data, n, max_degree=MAX_DEGREE):
    return complex_for(data, max_degree).homotopy(n)


def verify_contracting(data, n, max_degree=MAX_DEGREE) -> dict:
    cx = complex_for(data, max_degree)
    return {"residual": cx.contracting_residual(n), "faces": cx.chi_face_residuals(n)}
