"""Skeletal fusion-category data: fusion ring, F-blocks, file format, validation.

Conventions
-----------
``mult[i, j, k]`` is ``N^i_{jk} = dim Hom(X_i, X_j (x) X_k)``.  A vertex space
``(i; j, k)`` has basis vertices ``0 .. N^i_{jk} - 1``.

The block ``F^i_{jkl}`` expresses the right-nested tree
``i -alpha-> j (x) m``, ``m -beta-> k (x) l`` in terms of the left-nested trees
``i -gamma-> n (x) l``, ``n -delta-> j (x) k``::

    right[(alpha, m, beta)] = sum  F[(gamma, n, delta), (alpha, m, beta)] * left[(gamma, n, delta)]

so rows are indexed by ``(gamma, n, delta)`` and columns by ``(alpha, m, beta)``.
Vertex 0 of the channel-1 space ``(1; i*, i)`` is the unit ``eta_i : 1 -> X_i* (x) X_i``.
Vertex spaces with a unit leg use the canonical vertex, so every block with a unit
among ``j, k, l`` is the identity.
"""
from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np

DEFAULT_TOL = 1e-9


class CategoryDataError(ValueError):
    """Raised for malformed or inconsistent category files."""


@dataclass
class ValidationReport:
    """Collected invariant violations; empty ``violations`` means everything passed."""

    check: str
    violations: list[str] = field(default_factory=list)
    residuals: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class FusionRing:
    labels: tuple[str, ...]
    unit: int
    dual: tuple[int, ...]
    mult: np.ndarray

    def __post_init__(self):
        mult = np.asarray(self.mult, dtype=np.int64)
        n = len(self.labels)
        if mult.shape != (n, n, n):
            raise CategoryDataError(f"fusion tensor has shape {mult.shape}, expected {(n, n, n)}")
        if len(self.dual) != n:
            raise CategoryDataError("dual has wrong length")
        if not 0 <= self.unit < n:
            raise CategoryDataError(f"unit index {self.unit} out of range")
        for d in self.dual:
            if not 0 <= d < n:
                raise CategoryDataError(f"dual index {d} out of range")
        mult.setflags(write=False)
        object.__setattr__(self, "mult", mult)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "dual", tuple(int(d) for d in self.dual))

    @property
    def rank(self) -> int:
        return len(self.labels)

    def N(self, i: int, j: int, k: int) -> int:
        return int(self.mult[i, j, k])

    def fusion_matrix(self, j: int) -> np.ndarray:
        """Left multiplication by ``X_j``: entry ``[i, k] = N^i_{jk}``."""
        return np.array(self.mult[:, j, :], dtype=float)

    def channels(self, j: int, k: int) -> list[int]:
        return [i for i in range(self.rank) if self.mult[i, j, k] > 0]

    def is_self_dual(self, i: int) -> bool:
        return self.dual[i] == i

    def __eq__(self, other):
        if not isinstance(other, FusionRing):
            return NotImplemented
        return (self.labels == other.labels and self.unit == other.unit
                and self.dual == other.dual and np.array_equal(self.mult, other.mult))

    def __hash__(self):
        return hash((self.labels, self.unit, self.dual, self.mult.tobytes()))


def block_rows(ring: FusionRing, i, j, k, l) -> list[tuple[int, int, int]]:
    """Admissible left-nested triples ``(gamma, n, delta)`` in canonical order."""
    return [(g, n, d)
            for n in range(ring.rank)
            for g in range(ring.N(i, n, l))
            for d in range(ring.N(n, j, k))]


def block_cols(ring: FusionRing, i, j, k, l) -> list[tuple[int, int, int]]:
    """Admissible right-nested triples ``(alpha, m, beta)`` in canonical order."""
    return [(a, m, b)
            for m in range(ring.rank)
            for a in range(ring.N(i, j, m))
            for b in range(ring.N(m, k, l))]


class FBlock:
    """One associator block ``F^i_{jkl}`` with explicit row/column triples."""

    def __init__(self, labels, rows, cols, matrix):
        self.labels = tuple(int(x) for x in labels)
        self.rows = [tuple(int(x) for x in r) for r in rows]
        self.cols = [tuple(int(x) for x in c) for c in cols]
        self.matrix = np.asarray(matrix, dtype=complex)
        if self.matrix.shape != (len(self.rows), len(self.cols)):
            raise CategoryDataError(
                f"block {self.labels}: matrix shape {self.matrix.shape} does not match "
                f"{len(self.rows)} rows x {len(self.cols)} cols")
        self.row_index = {r: n for n, r in enumerate(self.rows)}
        self.col_index = {c: n for n, c in enumerate(self.cols)}

    @property
    def size(self) -> int:
        return len(self.rows)

    @cached_property
    def inverse(self) -> np.ndarray:
        """Inverse block; rows indexed by ``cols`` and columns by ``rows``."""
        if self.size == 0:
            return np.zeros((0, 0), dtype=complex)
        return np.linalg.inv(self.matrix)

    @cached_property
    def condition_number(self) -> float:
        if self.size == 0:
            return 1.0
        return float(np.linalg.cond(self.matrix))

    def entry(self, row, col) -> complex:
        return self.matrix[self.row_index[tuple(row)], self.col_index[tuple(col)]]

    def inverse_entry(self, col, row) -> complex:
        return self.inverse[self.col_index[tuple(col)], self.row_index[tuple(row)]]

    def canonical(self, ring: FusionRing) -> np.ndarray:
        """Matrix reordered to canonical row/column triples."""
        r = [self.row_index[t] for t in block_rows(ring, *self.labels)]
        c = [self.col_index[t] for t in block_cols(ring, *self.labels)]
        return self.matrix[np.ix_(r, c)]


class FusionCategoryData:
    """Fusion ring plus F-blocks; immutable after construction."""

    def __init__(self, ring: FusionRing, blocks: dict, tol: float = DEFAULT_TOL, name: str = ""):
        self.ring = ring
        self.tol = float(tol)
        self.name = name
        self._stored = {tuple(k): v for k, v in blocks.items()}
        self._cache: dict = {}
        self._check_blocks()

    def _check_blocks(self):
        ring = self.ring
        n = ring.rank
        for key, blk in self._stored.items():
            if len(key) != 4 or any(not 0 <= x < n for x in key):
                raise CategoryDataError(f"block labels {key} out of range")
            if blk.size != len(blk.cols):
                raise CategoryDataError(f"block {key} is not square")
            rows, cols = block_rows(ring, *key), block_cols(ring, *key)
            if sorted(blk.rows) != sorted(rows) or len(blk.rows) != len(rows):
                raise CategoryDataError(
                    f"block {key}: rows {blk.rows} inconsistent with fusion rules (expected {rows})")
            if sorted(blk.cols) != sorted(cols) or len(blk.cols) != len(cols):
                raise CategoryDataError(
                    f"block {key}: cols {blk.cols} inconsistent with fusion rules (expected {cols})")
        u = ring.unit
        for key in itertools.product(range(n), repeat=4):
            if key in self._stored or u in key[1:]:
                continue
            if block_rows(ring, *key):
                raise CategoryDataError(f"block {key} is nonempty but missing from the data")

    @property
    def labels(self):
        return self.ring.labels

    @property
    def rank(self) -> int:
        return self.ring.rank

    def block(self, i, j, k, l) -> FBlock:
        key = (i, j, k, l)
        blk = self._stored.get(key)
        if blk is not None:
            return blk
        blk = self._cache.get(key)
        if blk is None:
            rows = block_rows(self.ring, *key)
            cols = block_cols(self.ring, *key)
            mat = np.eye(len(rows), dtype=complex) if rows else np.zeros((0, 0), dtype=complex)
            blk = self._cache[key] = FBlock(key, rows, cols, mat)
        return blk

    def stored_blocks(self) -> dict:
        return dict(self._stored)

    def nontrivial_blocks(self) -> list:
        """Stored blocks that differ from the identity (beyond tol) or are not unit blocks."""
        out = []
        for key, blk in self._stored.items():
            if blk.size == 0:
                continue
            m = blk.canonical(self.ring)
            if m.shape[0] != m.shape[1] or np.abs(m - np.eye(m.shape[0])).max() > self.tol:
                out.append(key)
        return out

    def channel(self, i, j, k, l, n, m) -> np.ndarray:
        """4-index view ``[gamma, delta, alpha, beta]`` of the ``(n, m)`` channel of ``F^i_{jkl}``."""
        key = ("ch", i, j, k, l, n, m)
        arr = self._cache.get(key)
        if arr is None:
            ring = self.ring
            blk = self.block(i, j, k, l)
            sg, sd = ring.N(i, n, l), ring.N(n, j, k)
            sa, sb = ring.N(i, j, m), ring.N(m, k, l)
            arr = np.zeros((sg, sd, sa, sb), dtype=complex)
            for g, d, a, b in itertools.product(range(sg), range(sd), range(sa), range(sb)):
                arr[g, d, a, b] = blk.entry((g, n, d), (a, m, b))
            self._cache[key] = arr
        return arr

    def channel_inverse(self, i, j, k, l, m, n) -> np.ndarray:
        """4-index view ``[alpha, beta, gamma, delta]`` of the inverse block."""
        key = ("chinv", i, j, k, l, m, n)
        arr = self._cache.get(key)
        if arr is None:
            ring = self.ring
            blk = self.block(i, j, k, l)
            sg, sd = ring.N(i, n, l), ring.N(n, j, k)
            sa, sb = ring.N(i, j, m), ring.N(m, k, l)
            arr = np.zeros((sa, sb, sg, sd), dtype=complex)
            for g, d, a, b in itertools.product(range(sg), range(sd), range(sa), range(sb)):
                arr[a, b, g, d] = blk.inverse_entry((a, m, b), (g, n, d))
            self._cache[key] = arr
        return arr

    def with_blocks(self, blocks: dict, name: str | None = None) -> "FusionCategoryData":
        return FusionCategoryData(self.ring, blocks, self.tol, self.name if name is None else name)

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(to_json(self), sort_keys=True).encode()).hexdigest()


def f_block(data: FusionCategoryData, i, j, k, l, inverse: bool = False) -> np.ndarray:
    """Stored block, identity for unit labels, or a 0x0 matrix if nothing is admissible."""
    blk = data.block(i, j, k, l)
    return blk.inverse if inverse else blk.matrix


# ---------------------------------------------------------------- file format

def _parse_complex(x):
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise CategoryDataError(f"complex entry {x!r} must be a [re, im] pair")
        return complex(float(x[0]), float(x[1]))
    return complex(float(x))


def from_json(obj: dict, tol: float | None = None, name: str = "") -> FusionCategoryData:
    try:
        labels = [str(s) for s in obj["labels"]]
        unit = int(obj["unit"])
        dual = [int(d) for d in obj["dual"]]
        n = len(labels)
        mult = np.zeros((n, n, n), dtype=np.int64)
        for entry in obj["fusion"]:
            i, j, k, v = (int(x) for x in entry)
            if not all(0 <= x < n for x in (i, j, k)):
                raise CategoryDataError(f"fusion entry {entry} has index out of range")
            mult[i, j, k] = v
        ring = FusionRing(tuple(labels), unit, tuple(dual), mult)
        blocks = {}
        for b in obj.get("F", []):
            key = (int(b["i"]), int(b["j"]), int(b["k"]), int(b["l"]))
            if not all(0 <= x < n for x in key):
                raise CategoryDataError(f"block labels {key} out of range")
            if key in blocks:
                raise CategoryDataError(f"duplicate block {key}")
            rows, cols = b["rows"], b["cols"]
            flat = [_parse_complex(x) for x in b["matrix"]]
            if len(flat) != len(rows) * len(cols):
                raise CategoryDataError(f"block {key}: {len(flat)} entries for "
                                        f"{len(rows)}x{len(cols)} matrix")
            if len(rows) != len(cols):
                raise CategoryDataError(f"block {key} is not square")
            mat = np.array(flat, dtype=complex).reshape(len(rows), len(cols))
            blocks[key] = FBlock(key, rows, cols, mat)
        if tol is None:
            tol = float(obj.get("tol", DEFAULT_TOL))
    except (KeyError, TypeError) as exc:
        raise CategoryDataError(f"malformed category file: {exc!r}") from exc
    return FusionCategoryData(ring, blocks, tol, name or obj.get("name", ""))


def to_json(data: FusionCategoryData) -> dict:
    ring = data.ring
    n = ring.rank
    fusion = [[i, j, k, int(ring.mult[i, j, k])]
              for i in range(n) for j in range(n) for k in range(n) if ring.mult[i, j, k]]
    blocks = []
    for key in sorted(data.stored_blocks()):
        blk = data.stored_blocks()[key]
        blocks.append({
            "i": key[0], "j": key[1], "k": key[2], "l": key[3],
            "rows": [list(r) for r in blk.rows],
            "cols": [list(c) for c in blk.cols],
            "matrix": [[float(z.real), float(z.imag)] for z in blk.matrix.ravel()],
        })
    out = {"labels": list(ring.labels), "unit": ring.unit, "dual": list(ring.dual),
           "fusion": fusion, "F": blocks, "tol": data.tol}
    if data.name:
        out["name"] = data.name
    return out


def load_category(path, tol: float | None = None) -> FusionCategoryData:
    """Load a category file; bare names (``"yang_lee"``) resolve to bundled data."""
    p = Path(path)
    if not p.exists() and not p.suffix:
        p = Path(str(resources.files("fusioncat") / "data" / f"{path}.json"))
    try:
        obj = json.loads(p.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise
    except json.JSONDecodeError as exc:
        raise CategoryDataError(f"{p}: not valid JSON ({exc})") from exc
    return from_json(obj, tol=tol, name=obj.get("name", p.stem))


def dumps(data: FusionCategoryData) -> str:
    """JSON text with one line per top-level field and one line per block."""
    obj = to_json(data)
    blocks = obj.pop("F")
    lines = [f" {json.dumps(k)}: {json.dumps(v)}" for k, v in obj.items()]
    body = ",\n".join("  " + json.dumps(b) for b in blocks)
    lines.append(f' "F": [\n{body}\n ]')
    return "{\n" + ",\n".join(lines) + "\n}\n"


def save_category(data: FusionCategoryData, path) -> None:
    Path(path).write_text(dumps(data), encoding="utf-8")


def bundled(name: str, tol: float | None = None) -> FusionCategoryData:
    return load_category(name, tol=tol)


BUNDLED = ("trivial", "yang_lee", "e6")

# Reference apex associator S_xxx of the bundled e6 data: the inverse of the (x; x, x)
# recoupling matrix e^{-7 pi i/12}/sqrt 2 [[1, 1], [-i, i]]. The bundled file is gauged to it.
E6_APEX_TRANSCRIPTION = np.exp(7j * np.pi / 12) / np.sqrt(2) * np.array([[1, 1j], [1, -1j]])


# ---------------------------------------------------------------- validation

def validate_ring(ring: FusionRing) -> ValidationReport:
    rep = ValidationReport("ring")
    n, u, dual, N = ring.rank, ring.unit, ring.dual, ring.mult
    for i in range(n):
        if dual[dual[i]] != i:
            rep.violations.append(f"dual is not an involution at {ring.labels[i]} (index {i})")
    if dual[u] != u:
        rep.violations.append("dual(unit) != unit")
    if (N < 0).any():
        rep.violations.append("negative multiplicity")
    eye = np.eye(n, dtype=np.int64)
    for i, k in itertools.product(range(n), repeat=2):
        if N[i, u, k] != eye[i, k]:
            rep.violations.append(f"N^{i}_(unit,{k}) = {N[i, u, k]}, expected {eye[i, k]}")
        if N[i, k, u] != eye[i, k]:
            rep.violations.append(f"N^{i}_({k},unit) = {N[i, k, u]}, expected {eye[i, k]}")
    for j, k in itertools.product(range(n), repeat=2):
        want = 1 if (0 <= dual[j] < n and k == dual[j]) else 0
        if N[u, j, k] != want:
            rep.violations.append(f"N^unit_({j},{k}) = {N[u, j, k]}, expected {want}")
    # (X_j X_k) X_l = X_j (X_k X_l)
    lhs = np.einsum("mjk,iml->ijkl", N, N)
    rhs = np.einsum("nkl,ijn->ijkl", N, N)
    for i, j, k, l in zip(*np.nonzero(lhs != rhs)):
        rep.violations.append(f"associativity fails at (i,j,k,l)=({i},{j},{k},{l})")
    rep.residuals["associativity"] = float(np.abs(lhs - rhs).max(initial=0))
    if all(dual[dual[i]] == i for i in range(n)):
        # Hom(i, j k) = Hom(k, j* i) = Hom(j, i k*)
        for i, j, k in itertools.product(range(n), repeat=3):
            if N[i, j, k] != N[k, dual[j], i]:
                rep.violations.append(f"N^{i}_({j},{k}) != N^{k}_({dual[j]},{i})")
            if N[i, j, k] != N[j, i, dual[k]]:
                rep.violations.append(f"N^{i}_({j},{k}) != N^{j}_({i},{dual[k]})")
    return rep


def check_unit_blocks(data: FusionCategoryData) -> ValidationReport:
    """Stored blocks with a unit label must be identities."""
    rep = ValidationReport("unit_blocks")
    u = data.ring.unit
    for key, blk in data.stored_blocks().items():
        if u in key[1:] and blk.size:
            r = float(np.abs(blk.canonical(data.ring) - np.eye(blk.size)).max())
            rep.residuals[key] = r
            if r > data.tol:
                rep.violations.append(f"unit block {key} differs from identity by {r:.3g}")
    return rep


def check_inverses(data: FusionCategoryData) -> ValidationReport:
    rep = ValidationReport("inverses")
    for key, blk in data.stored_blocks().items():
        if not blk.size:
            continue
        r = float(np.abs(blk.matrix @ blk.inverse - np.eye(blk.size)).max())
        rep.residuals[key] = r
        if r > data.tol:
            rep.violations.append(f"block {key}: |F F^-1 - 1| = {r:.3g} (cond {blk.condition_number:.3g})")
    return rep


def pentagon_residuals(data: FusionCategoryData) -> dict:
    """Max residual of the pentagon for every label 5-tuple ``(t; a, b, c, d)``.

    Path 1 re-brackets ``a(b(cd)) -> (ab)(cd) -> ((ab)c)d``; path 2 goes
    ``a(b(cd)) -> a((bc)d) -> (a(bc))d -> ((ab)c)d``.
    """
    ring = data.ring
    n = ring.rank
    N = ring.mult
    out = {}
    for t, a, b, c, d in itertools.product(range(n), repeat=5):
        worst = 0.0
        for m, r, s, u in itertools.product(range(n), repeat=4):
            if not (N[t, a, m] and N[m, b, r] and N[r, c, d] and N[s, a, b] and N[u, s, c] and N[t, u, d]):
                continue
            # indices: alpha, beta, gamma (right-nested); nu, lam, kappa (left-nested)
            p1 = np.einsum("pvab,klpg->abgvlk",
                           data.channel(t, a, b, r, s, m),
                           data.channel(t, s, c, d, u, r))
            p2 = np.zeros_like(p1)
            for q in range(n):
                if not (N[m, q, d] and N[q, b, c] and N[u, a, q]):
                    continue
                p2 += np.einsum("rsbg,kpar,lvps->abgvlk",
                                data.channel(m, b, c, d, q, r),
                                data.channel(t, a, q, d, u, m),
                                data.channel(u, a, b, c, s, q))
            if p1.size:
                worst = max(worst, float(np.abs(p1 - p2).max()))
        out[(t, a, b, c, d)] = worst
    return out


def verify_pentagon(data: FusionCategoryData) -> ValidationReport:
    rep = ValidationReport("pentagon")
    rep.residuals = pentagon_residuals(data)
    for key, r in rep.residuals.items():
        if r > data.tol:
            rep.violations.append(f"pentagon residual {r:.3g} at (t;a,b,c,d)={key}")
    return rep


def validate(data: FusionCategoryData) -> list[ValidationReport]:
    reports = [validate_ring(data.ring)]
    if reports[0].ok:
        reports += [check_unit_blocks(data), check_inverses(data), verify_pentagon(data)]
    return reports
