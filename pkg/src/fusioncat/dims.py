"""Frobenius-Perron, paired and fusion dimensions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catdata import FusionCategoryData, FusionRing


class DimensionError(ArithmeticError):
    """Data violates a dimension invariant (rigidity, positivity, FP uniqueness)."""


@dataclass
class DimensionTable:
    fp: np.ndarray
    a: np.ndarray
    b: np.ndarray
    paired: np.ndarray
    fusion: np.ndarray
    global_dim: float
    fp_dim: float
    pseudo_unitary: bool

    def as_dict(self, labels) -> dict:
        def cplx(z):
            return [float(z.real), float(z.imag)]
        return {
            "labels": list(labels),
            "fp": [float(x) for x in self.fp],
            "a": [cplx(z) for z in self.a],
            "b": [cplx(z) for z in self.b],
            "paired": [float(z.real) for z in self.paired],
            "fusion": [float(x) for x in self.fusion],
            "global_dim": self.global_dim,
            "fp_dim": self.fp_dim,
            "pseudo_unitary": self.pseudo_unitary,
        }


def frobenius_perron_dims(ring: FusionRing, tol: float = 1e-9) -> np.ndarray:
    """Spectral radius of each left-multiplication matrix, certified by the FP equation."""
    d = np.array([max(abs(np.linalg.eigvals(ring.fusion_matrix(i)))) for i in range(ring.rank)])
    res = fp_residual(ring, d)
    if res > tol * max(1.0, d.max() ** 2) or abs(d[ring.unit] - 1) > tol:
        raise DimensionError(f"Frobenius-Perron equation residual {res:.3g}")
    return d


def fp_residual(ring: FusionRing, d) -> float:
    """max over (j, k) of |d_j d_k - sum_i N^i_jk d_i|."""
    d = np.asarray(d)
    lhs = np.outer(d, d)
    rhs = np.einsum("ijk,i->jk", ring.mult, d)
    return float(np.abs(lhs - rhs).max())


def _unit_coords(data: FusionCategoryData, i: int):
    u = data.ring.unit
    # column: i -> i (x) 1 -> i (x) (i* (x) i) via eta_i; row: i -> 1 (x) i -> (i (x) i*) (x) i via eta_i*
    return (0, u, 0), (0, u, 0)


def extract_a(data: FusionCategoryData, i: int) -> complex:
    """Coefficient of ``eta_i* (x) id`` in the expansion of ``id (x) eta_i`` on ``X_i``."""
    col, row = _unit_coords(data, i)
    a = complex(data.block(i, i, data.ring.dual[i], i).entry(row, col))
    if abs(a) < data.tol:
        raise DimensionError(f"a_{data.labels[i]} vanishes: F-data is not rigid")
    return a


def extract_b(data: FusionCategoryData, i: int) -> complex:
    """Same coefficient for the inverse associator of the block ``(i; i, i*, i)``."""
    col, row = _unit_coords(data, i)
    b = complex(data.block(i, i, data.ring.dual[i], i).inverse_entry(col, row))
    if abs(b) < data.tol:
        raise DimensionError(f"b_{data.labels[i]} vanishes: F-data is not rigid")
    return b


def paired_dimensions(data: FusionCategoryData):
    """Return ``(a, b, paired, fusion)``; paired dims must be real and positive."""
    ring = data.ring
    a = np.array([extract_a(data, i) for i in range(ring.rank)])
    b = np.array([extract_b(data, i) for i in range(ring.rank)])
    paired = 1.0 / (a * a[list(ring.dual)])
    for i, p in enumerate(paired):
        if abs(p.imag) > data.tol * max(1.0, abs(p)) or p.real <= 0:
            raise DimensionError(
                f"paired dimension of {ring.labels[i]} is {p:.6g}; a fusion category has real positive"
                " paired dimensions")
    fusion = np.sqrt(paired.real)
    return a, b, paired, fusion


def dimension_summary(data: FusionCategoryData) -> DimensionTable:
    fp = frobenius_perron_dims(data.ring, data.tol)
    a, b, paired, fusion = paired_dimensions(data)
    return DimensionTable(
        fp=fp, a=a, b=b, paired=paired, fusion=fusion,
        global_dim=float(paired.real.sum()),
        fp_dim=float((fp ** 2).sum()),
        pseudo_unitary=bool(np.abs(fp - fusion).max() < data.tol * max(1.0, fp.max())),
    )


def fusion_dims(data: FusionCategoryData) -> np.ndarray:
    return paired_dimensions(data)[3]


def global_dimension(data: FusionCategoryData) -> float:
    return float(paired_dimensions(data)[2].real.sum())
