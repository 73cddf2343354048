"""Apex associators, cyclic and pivotal operators, pivotal symbols and trace tables.

Coordinates: ``V_ijk = Hom(1, X_i (x) (X_j (x) X_k))`` has the basis
``(id_i (x) alpha) eta_i*`` with ``alpha`` running over the vertices of ``(i*; j, k)``.
Identifying ``Hom(X_i, X_j (x) X_k)`` with ``V_i*jk`` through ``eta_i`` makes the
yanking map the identity on coordinates, so pivotal operators are plain
monodromy matrices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import trees as tr
from .catdata import FusionCategoryData
from .dims import paired_dimensions
from .gauge import GaugeTransform, _col_gauge, _row_gauge, make_fair_basis, pivotal_indicators


class PivotalError(ArithmeticError):
    pass


def _triples(ring):
    return [t for t in itertools.product(range(ring.rank), repeat=3) if ring.N(*t)]


def _signs(data, root_choice):
    """Pivotal indicators relative to a root choice ``x_i d_i`` (fair basis)."""
    p = pivotal_indicators(data)
    if root_choice is None:
        return p
    x = np.asarray(root_choice, dtype=int)
    if (x != x[list(data.ring.dual)]).any() or set(np.unique(x)) - {1, -1}:
        raise ValueError("root choice signs must be +-1 with x_i = x_i*")
    return p * x


def apex_associator(data: FusionCategoryData, i: int, j: int, k: int) -> np.ndarray:
    """``S_ijk``: coordinates of ``(i*; j, k)`` to coordinates of ``(k*; i, j)``."""
    ring = data.ring
    u, du = ring.unit, ring.dual
    rows, cols = ring.N(du[k], i, j), ring.N(du[i], j, k)
    if rows != cols:
        raise PivotalError(f"N^{du[k]}_({i},{j}) != N^{du[i]}_({j},{k}): ring symmetry violated")
    blk = data.block(u, i, j, k)
    S = np.zeros((rows, cols), dtype=complex)
    for b in range(rows):
        for a in range(cols):
            S[b, a] = blk.entry((0, du[k], b), (0, du[i], a))
    return S


def apex_monodromy(data: FusionCategoryData, i: int, j: int, k: int) -> np.ndarray:
    """``A_ijk = S_jki S_kij S_ijk`` acting on ``(i*; j, k)`` coordinates."""
    return apex_associator(data, j, k, i) @ apex_associator(data, k, i, j) @ apex_associator(data, i, j, k)


def cyclic_operator(data: FusionCategoryData, i: int, j: int, k: int, root_choice=None) -> np.ndarray:
    """``C_ijk = p_k S_ijk`` (fair basis)."""
    return _signs(data, root_choice)[k] * apex_associator(data, i, j, k)


def cyclic_operator_direct(data: FusionCategoryData, i: int, j: int, k: int, root_choice=None) -> np.ndarray:
    """``C_ijk`` evaluated from its string diagram by tree moves; valid in any gauge.

    The strand ``k`` is bent under the diagram: a unit ``eta_k*`` is attached on the
    left, the old ``k`` leg is re-bracketed next to the new ``k*`` leg, the pair is
    closed with the dual of ``eta_k*`` and the result is scaled by ``d_k``.
    """
    ring = data.ring
    u, du = ring.unit, ring.dual
    d = paired_dimensions(data)[3]
    if root_choice is not None:
        d = d * np.asarray(root_choice)
    n_in, n_out = ring.N(du[i], j, k), ring.N(du[k], i, j)
    C = np.zeros((n_out, n_in), dtype=complex)
    for a in range(n_in):
        v = (u, 0, (i,), (du[i], a, (j,), (k,)))
        vec = {(u, 0, (k,), (du[k], 0, v, (du[k],))): 1.0}
        vec = tr.rotate_right(vec, data, (1,))
        vec = tr.rotate_right(vec, data, (1, 1))
        vec = tr.contract(vec, data, (1, 1, 1), 0)
        vec = tr.drop_unit_leaf(vec, data, (1, 1))
        for tree, coef in vec.items():
            C[tree[3][1], a] += d[k] * coef
    return C


def pivotal_operator(data: FusionCategoryData, i: int, j: int, k: int, root_choice=None) -> np.ndarray:
    """``T^i_jk = p_i p_j p_k A_i*jk`` on ``(i; j, k)`` coordinates (fair basis)."""
    p = _signs(data, root_choice)
    T = p[i] * p[j] * p[k] * apex_monodromy(data, data.ring.dual[i], j, k)
    _check_involution(data, T, (i, j, k))
    return T


def pivotal_operator_direct(data: FusionCategoryData, i: int, j: int, k: int, root_choice=None) -> np.ndarray:
    """Monodromy of the directly evaluated cyclic operators; valid in any gauge."""
    s = data.ring.dual[i]
    C = lambda a, b, c: cyclic_operator_direct(data, a, b, c, root_choice)  # noqa: E731
    return C(j, k, s) @ C(k, s, j) @ C(s, j, k)


def involution_residual(T: np.ndarray) -> float:
    return float(np.abs(T @ T - np.eye(len(T))).max(initial=0.0))


def _check_involution(data, T, key):
    r = involution_residual(T)
    if r > 10 * data.tol:
        raise PivotalError(f"T^{key[0]}_({key[1]},{key[2]}) squares to identity only up to {r:.3g}")


def involution_split(T: np.ndarray, tol: float = 1e-9):
    """Basis (columns) of the +1 then -1 eigenspaces of an involution, and the symbols.

    Uses the projectors ``(1 +- T)/2``; spaces on which ``T`` is already ``+-1`` keep the
    identity basis.
    """
    n = len(T)
    eye = np.eye(n)
    for s in (1, -1):
        if np.abs(T - s * eye).max(initial=0.0) <= tol:
            return eye.astype(complex), [s] * n
    cols, signs = [], []
    for s in (1, -1):
        P = (eye + s * T) / 2
        U, sv, _ = np.linalg.svd(P)
        r = int((sv > 0.5).sum())
        if np.any((sv > tol) & (sv < 0.5)):
            raise PivotalError("operator is not an involution within tolerance")
        cols.append(U[:, :r])
        signs += [s] * r
    g = np.hstack(cols)
    if g.shape != (n, n):
        raise PivotalError("eigenspaces of the involution do not span the vertex space")
    return g, signs


def pivotal_eigenbasis(data: FusionCategoryData, i: int, j: int, k: int):
    """``(gauge matrix, symbols)`` diagonalizing ``T^i_jk``, with ``+1`` before ``-1``."""
    return involution_split(pivotal_operator(data, i, j, k), data.tol)


@dataclass
class PivotalReport:
    data: FusionCategoryData
    fair_gauge: GaugeTransform
    p: np.ndarray
    S: dict
    A: dict
    T: dict
    symbols: dict
    eigenbasis: GaugeTransform
    traces: np.ndarray
    trace_residuals: dict
    involution_residuals: dict
    coherence_residual: float
    orientable: bool
    offending: list = field(default_factory=list)
    monodromy_is_identity: bool = True

    def pivotal_data(self) -> FusionCategoryData:
        """Fair-basis data re-expressed in the pivotal eigenbasis."""
        return _apply_any(self.data, self.eigenbasis)


def _apply_any(data, g):
    # eigenbasis changes never touch unit-leg spaces with non-identity matrices
    from .gauge import apply_gauge
    return apply_gauge(data, GaugeTransform(
        {k: v for k, v in g.matrices.items() if data.ring.unit not in k[1:]}, g.note))


def pivotal_operators(data: FusionCategoryData, root_choice=None) -> dict:
    return {t: pivotal_operator(data, *t, root_choice=root_choice) for t in _triples(data.ring)}


def trace_table(data: FusionCategoryData, T: dict | None = None, root_choice=None):
    """``Tr T^i_jk`` as an array ``[i, j, k]`` and the residuals of its three identities.

    ``homprop``: ``d_j d_k = sum_i Tr(T^i_jk) d_i``; ``conjugate_cyclic``:
    ``Tr T^i_jk = Tr T^k*_i*j``; ``conjugate_symmetric``: ``Tr T^i_jk = Tr T^i*_k*j*``.
    """
    ring = data.ring
    if T is None:
        T = pivotal_operators(data, root_choice)
    d = paired_dimensions(data)[3]
    if root_choice is not None:
        d = d * np.asarray(root_choice)
    tr_ = np.zeros((ring.rank,) * 3, dtype=complex)
    for key, mat in T.items():
        tr_[key] = np.trace(mat)
    du = list(ring.dual)
    hom = np.abs(np.outer(d, d) - np.einsum("ijk,i->jk", tr_, d)).max()
    cyc = max(abs(tr_[i, j, k] - tr_[du[k], du[i], j]) for i, j, k in itertools.product(range(ring.rank), repeat=3))
    sym = max(abs(tr_[i, j, k] - tr_[du[i], du[k], du[j]]) for i, j, k in itertools.product(range(ring.rank), repeat=3))
    return tr_, {"homprop": float(hom), "conjugate_cyclic": float(cyc), "conjugate_symmetric": float(sym)}


def is_orientable(data: FusionCategoryData, T: dict | None = None):
    """``(orientable, offending triples)``: orientable iff every ``T^i_jk`` is ``+-id``."""
    if T is None:
        T = pivotal_operators(data)
    bad = []
    for key, mat in T.items():
        n = len(mat)
        if not any(np.abs(mat - s * np.eye(n)).max() <= 10 * data.tol for s in (1, -1)):
            bad.append(key)
    return not bad, bad


def check_T_coherence(data: FusionCategoryData, T: dict | None = None) -> dict:
    """Residual of ``R F = F C`` per block, with ``R``/``C`` the pivotal action on row/column vertices."""
    ring = data.ring
    if T is None:
        T = pivotal_operators(data)
    g = GaugeTransform(dict(T))
    out = {}
    for i, j, k, l in itertools.product(range(ring.rank), repeat=4):
        blk = data.block(i, j, k, l)
        if blk.size == 0:
            continue
        R, C = _row_gauge(ring, g, blk), _col_gauge(ring, g, blk)
        out[(i, j, k, l)] = float(np.abs(R @ blk.matrix - blk.matrix @ C).max())
    return out


def pivotal_report(data: FusionCategoryData) -> PivotalReport:
    """Bring ``data`` to a fair basis and compute every pivotal quantity there."""
    fair, fg = make_fair_basis(data)
    ring = fair.ring
    p = pivotal_indicators(fair)
    S, A, T, sym, eig, inv = {}, {}, {}, {}, {}, {}
    mono_id = True
    # S_ijk and A_ijk act on (i*; j, k)
    for i, j, k in _triples(ring):
        t = (ring.dual[i], j, k)
        S[t] = apex_associator(fair, *t)
        A[t] = apex_monodromy(fair, *t)
        mono_id &= bool(np.abs(A[t] - np.eye(len(A[t]))).max(initial=0.0) <= 10 * fair.tol)
    for t in _triples(ring):
        T[t] = pivotal_operator(fair, *t)
        inv[t] = involution_residual(T[t])
        eig[t], sym[t] = involution_split(T[t], fair.tol)
    traces, tres = trace_table(fair, T)
    orientable, bad = is_orientable(fair, T)
    coh = check_T_coherence(fair, T)
    return PivotalReport(
        data=fair, fair_gauge=fg, p=p, S=S, A=A, T=T, symbols=sym,
        eigenbasis=GaugeTransform(eig, note="pivotal eigenbasis"),
        traces=traces, trace_residuals=tres, involution_residuals=inv,
        coherence_residual=max(coh.values(), default=0.0),
        orientable=orientable, offending=bad, monodromy_is_identity=mono_id,
    )
