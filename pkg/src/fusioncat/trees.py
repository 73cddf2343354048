"""Planar fusion trees and F-moves.

A tree is a nested tuple: a leaf is ``(label,)`` and an internal node is
``(label, vertex, left, right)`` meaning the vertex ``label -> left (x) right``
of the vertex space ``(label; root(left), root(right))``.  A vector is a dict
``tree -> coefficient``.  All trees in one vector share a shape.
"""
from __future__ import annotations

from collections import defaultdict
from functools import lru_cache

import numpy as np

from .catdata import FusionCategoryData

Tree = tuple


def is_leaf(tree: Tree) -> bool:
    return len(tree) == 1


def root(tree: Tree) -> int:
    return tree[0]


def leaves(tree: Tree) -> tuple:
    if is_leaf(tree):
        return (tree[0],)
    return leaves(tree[2]) + leaves(tree[3])


def subtree(tree: Tree, path) -> Tree:
    for step in path:
        tree = tree[2 + step]
    return tree


def replace(tree: Tree, path, new: Tree) -> Tree:
    if not path:
        return new
    head, rest = path[0], path[1:]
    parts = list(tree)
    parts[2 + head] = replace(tree[2 + head], rest, new)
    return tuple(parts)


def _accumulate(out, tree, coef):
    if coef != 0:
        out[tree] += coef


def rotate_left(vec: dict, data: FusionCategoryData, path=()) -> dict:
    """``A (x) (B (x) C) -> (A (x) B) (x) C`` at the node ``path``."""
    ring = data.ring
    out = defaultdict(complex)
    for tree, coef in vec.items():
        t, alpha, A, right = subtree(tree, path)
        m, beta, B, C = right
        a, b, c = root(A), root(B), root(C)
        blk = data.block(t, a, b, c)
        col = blk.col_index[(alpha, m, beta)]
        for n in range(ring.rank):
            for g in range(ring.N(t, n, c)):
                for d in range(ring.N(n, a, b)):
                    f = blk.matrix[blk.row_index[(g, n, d)], col]
                    _accumulate(out, replace(tree, path, (t, g, (n, d, A, B), C)), coef * f)
    return dict(out)


def rotate_right(vec: dict, data: FusionCategoryData, path=()) -> dict:
    """``(A (x) B) (x) C -> A (x) (B (x) C)`` at the node ``path``."""
    ring = data.ring
    out = defaultdict(complex)
    for tree, coef in vec.items():
        t, g, left, C = subtree(tree, path)
        n, d, A, B = left
        a, b, c = root(A), root(B), root(C)
        blk = data.block(t, a, b, c)
        inv = blk.inverse
        row = blk.row_index[(g, n, d)]
        for m in range(ring.rank):
            for al in range(ring.N(t, a, m)):
                for be in range(ring.N(m, b, c)):
                    f = inv[blk.col_index[(al, m, be)], row]
                    _accumulate(out, replace(tree, path, (t, al, A, (m, be, B, C))), coef * f)
    return dict(out)


def _shape(vec: dict) -> Tree | None:
    for tree in vec:
        return tree
    return None


def to_left_comb(vec: dict, data: FusionCategoryData, path=()) -> dict:
    """Re-bracket every tree of ``vec`` below ``path`` as ``((x1 x2) x3) ... xn``."""
    while True:
        sample = _shape(vec)
        if sample is None:
            return vec
        node = subtree(sample, path)
        if is_leaf(node):
            return vec
        if is_leaf(node[3]):
            return to_left_comb(vec, data, path + (0,))
        vec = rotate_left(vec, data, path)


def to_right_comb(vec: dict, data: FusionCategoryData, path=()) -> dict:
    """Re-bracket below ``path`` as ``x1 (x2 (... xn))``."""
    while True:
        sample = _shape(vec)
        if sample is None:
            return vec
        node = subtree(sample, path)
        if is_leaf(node):
            return vec
        if is_leaf(node[2]):
            return to_right_comb(vec, data, path + (1,))
        vec = rotate_right(vec, data, path)


def contract(vec: dict, data: FusionCategoryData, path, vertex: int) -> dict:
    """Apply the dual of ``vertex`` in ``(unit; x, y)`` to the leaf pair at ``path``.

    The node becomes a unit leaf; terms fusing to a non-unit channel vanish.
    """
    u = data.ring.unit
    out = defaultdict(complex)
    for tree, coef in vec.items():
        lab, v, A, B = subtree(tree, path)
        if not (is_leaf(A) and is_leaf(B)):
            raise ValueError("contract expects two leaves")
        if lab == u and v == vertex:
            _accumulate(out, replace(tree, path, (u,)), coef)
    return dict(out)


def drop_unit_leaf(vec: dict, data: FusionCategoryData, path) -> dict:
    """Remove a unit leaf child of the node at ``path`` (canonical unit vertex)."""
    u = data.ring.unit
    out = {}
    for tree, coef in vec.items():
        lab, v, A, B = subtree(tree, path)
        if B == (u,):
            keep = A
        elif A == (u,):
            keep = B
        else:
            raise ValueError("node has no unit leaf")
        if v != 0 or root(keep) != lab:
            raise ValueError("unit vertex is not canonical")
        out[replace(tree, path, keep)] = out.get(replace(tree, path, keep), 0) + coef
    return out


# ---------------------------------------------------------------- comb bases

@lru_cache(maxsize=None)
def _comb_trees(mult_key, rank, unit, leaf_labels: tuple, t: int) -> tuple:
    mult = np.frombuffer(mult_key, dtype=np.int64).reshape(rank, rank, rank)
    n = len(leaf_labels)
    if n == 0:
        return ((unit,),) if t == unit else ()
    if n == 1:
        return ((leaf_labels[0],),) if t == leaf_labels[0] else ()
    last = leaf_labels[-1]
    out = []
    for m in range(rank):
        if not mult[t, m, last]:
            continue
        for sub in _comb_trees(mult_key, rank, unit, leaf_labels[:-1], m):
            for v in range(mult[t, m, last]):
                out.append((t, v, sub, (last,)))
    return tuple(out)


def comb_trees(data: FusionCategoryData, leaf_labels, t: int) -> tuple:
    """Left-comb basis of ``Hom(X_t, ((x1 x2) x3) ... xn)`` in deterministic order.

    Order: by the penultimate intermediate label, then recursively, then the top vertex.
    """
    ring = data.ring
    return _comb_trees(ring.mult.tobytes(), ring.rank, ring.unit, tuple(leaf_labels), t)


def comb_index(data: FusionCategoryData, leaf_labels, t: int) -> dict:
    return {tree: n for n, tree in enumerate(comb_trees(data, leaf_labels, t))}


def coordinates(vec: dict, index: dict) -> np.ndarray:
    out = np.zeros(len(index), dtype=complex)
    for tree, coef in vec.items():
        out[index[tree]] += coef
    return out
