import itertools

import numpy as np
import pytest

from conftest import pointed_z3
from fusioncat import trees as tr
from fusioncat.catdata import BUNDLED, bundled
from fusioncat.dims import paired_dimensions
from fusioncat.dy import DegreeError, DYComplex, cohomology_dim, complex_for

CATS = {name: bundled(name) for name in BUNDLED}
CATS["z3_q1"] = pointed_z3(1)


def brute_dim(ring, n):
    """dim End(X_1 ... X_n) summed over all label tuples."""
    total = 0
    for X in itertools.product(range(ring.rank), repeat=n):
        v = np.zeros(ring.rank, dtype=np.int64)
        v[ring.unit] = 1
        for x in X:
            v = ring.mult[:, :, x] @ v
        total += int((v ** 2).sum())
    return total


@pytest.mark.parametrize("name", sorted(CATS))
def test_cochain_dims(name):
    cx = complex_for(CATS[name])
    for n in range(5):
        assert cx.dim(n) == brute_dim(cx.ring, n)


def test_known_dims(yl, trivial):
    assert [complex_for(yl).dim(n) for n in range(5)] == [1, 2, 5, 15, 50]
    assert [complex_for(trivial).dim(n) for n in range(5)] == [1] * 5


def test_degree_cap(yl):
    with pytest.raises(DegreeError):
        DYComplex(yl, 4).basis(5)


@pytest.mark.parametrize("name", sorted(CATS))
def test_simplicial_identities(name):
    cx = complex_for(CATS[name])
    for n in range(0, 3):
        assert cx.simplicial_residual(n) < 1e-12


@pytest.mark.parametrize("name", sorted(CATS))
def test_d1_formula(name):
    cx = complex_for(CATS[name])
    ring = cx.ring
    c = np.random.default_rng(1).normal(size=ring.rank)
    v = np.zeros(cx.dim(1), dtype=complex)
    for i in range(ring.rank):
        v[cx.basis(1).offsets[((i,), i)]] = c[i]
    out = cx.differential(1) @ v
    b2 = cx.basis(2)
    for X, t, trees in b2.blocks:
        w = len(trees)
        M = out[b2.offsets[(X, t)]:b2.offsets[(X, t)] + w * w].reshape(w, w)
        assert np.abs(M - (c[X[0]] + c[X[1]] - c[t]) * np.eye(w)).max() < 1e-12


@pytest.mark.parametrize("name", sorted(CATS))
def test_coboundaries_fill_cocycles(name):
    cx = complex_for(CATS[name])
    for n in (1, 2, 3):
        assert cx.dd_residual(n) < 1e-12
    # every 2-cocycle is d of a 1-cochain: ker d^2 has the dimension of im d^1
    d2 = cx.differential(2).toarray()
    ker = cx.dim(2) - np.linalg.matrix_rank(d2, tol=1e-9)
    assert ker == cx.rank(1)[0]


@pytest.mark.parametrize("name", sorted(CATS))
def test_rigidity(name):
    for n in (1, 2):
        assert cohomology_dim(CATS[name], n) == 0


def chi_by_trees(cx, n, c):
    """Close the leftmost strand of ``id (x) c`` with explicit tree moves.

    The embedded tree ((p* p) X1) ... is re-bracketed to p* ((p X1) ...), the cochain
    acts on the right factor through its matrix blocks, and the result is re-bracketed
    back and paired against the same embedding.
    """
    data, ring = cx.data, cx.ring
    src, dst = cx.basis(n), cx.basis(n - 1)
    d = paired_dimensions(data)[3]
    w = d ** 2 / (d ** 2).sum()
    u = ring.unit
    out = np.zeros(dst.dim, dtype=complex)

    def act(vec):
        res = {}
        for tree, coef in vec.items():
            Y = tree[3]
            key = (tr.leaves(Y), tr.root(Y))
            idx = tr.comb_index(data, *key)
            basis = tr.comb_trees(data, *key)
            m = len(basis)
            M = c[src.offsets[key]:src.offsets[key] + m * m].reshape(m, m)
            for a in range(m):
                new = (tree[0], tree[1], tree[2], basis[a])
                res[new] = res.get(new, 0) + coef * M[a, idx[Y]]
        return res

    for X, t, trees in dst.blocks:
        m = len(trees)
        base = dst.offsets[(X, t)]
        for p in range(ring.rank):
            ps = ring.dual[p]
            cap = (u, 0, (ps,), (p,))
            emb = [tr.replace(s, _first_leaf(s), (X[0], 0, cap, (X[0],))) if X else cap for s in trees]
            for b in range(m):
                vec = tr.to_right_comb({emb[b]: 1.0}, data)
                vec = tr.to_left_comb(vec, data, (1,))
                vec = act(vec)
                vec = tr.to_left_comb(vec, data)
                for a in range(m):
                    out[base + a * m + b] += w[p] * vec.get(emb[a], 0)
    return out


def _first_leaf(tree):
    path = []
    while not tr.is_leaf(tr.subtree(tree, tuple(path))):
        path.append(0)
    return tuple(path)


@pytest.mark.parametrize("name", sorted(CATS))
def test_chi_independent_route(name):
    cx = complex_for(CATS[name])
    rng = np.random.default_rng(3)
    for n in (1, 2, 3):
        c = rng.normal(size=cx.dim(n)) + 1j * rng.normal(size=cx.dim(n))
        assert np.abs(chi_by_trees(cx, n, c) - cx.homotopy(n) @ c).max() < 1e-10


@pytest.mark.parametrize("name", sorted(CATS))
def test_chi_face_cases(name):
    cx = complex_for(CATS[name])
    for n in (1, 2):
        res = cx.chi_face_residuals(n)
        assert res[0] < 1e-10  # closing a prepended identity strand gives back c
        assert res[1] < 1e-10  # handleslide
        assert all(res[k] < 1e-10 for k in range(2, n + 2))


@pytest.mark.parametrize("name", sorted(CATS))
def test_contracting_homotopy(name):
    cx = complex_for(CATS[name])
    for n in (1, 2):
        assert cx.contracting_residual(n) < 1e-10
