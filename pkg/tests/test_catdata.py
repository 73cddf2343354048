import itertools
import json

import numpy as np
import pytest

from fusioncat import trees
from fusioncat.catdata import (BUNDLED, CategoryDataError, FBlock, FusionRing, bundled, dumps,
                               from_json, load_category, pentagon_residuals, save_category,
                               to_json, validate, validate_ring, verify_pentagon)


def brute_associative(ring):
    n = ring.rank
    N = ring.mult
    for j, k, l, i in itertools.product(range(n), repeat=4):
        lhs = sum(N[m, j, k] * N[i, m, l] for m in range(n))
        rhs = sum(N[m, k, l] * N[i, j, m] for m in range(n))
        if lhs != rhs:
            return False
    return True


def tree_pentagon_residual(data):
    """Both re-bracketings ((ab)c)d -> a(b(cd)) via tree rotations; independent of the einsum checker."""
    n = data.rank
    worst = 0.0
    for t, a, b, c, d in itertools.product(range(n), repeat=5):
        for tree in trees.comb_trees(data, (a, b, c, d), t):
            v1 = trees.rotate_right(trees.rotate_right({tree: 1.0}, data), data)
            v2 = trees.rotate_right({tree: 1.0}, data, (0,))
            v2 = trees.rotate_right(trees.rotate_right(v2, data), data, (1,))
            for key in set(v1) | set(v2):
                worst = max(worst, abs(v1.get(key, 0) - v2.get(key, 0)))
    return worst


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_validate(name):
    data = bundled(name)
    for rep in validate(data):
        assert rep.ok, rep.violations[:3]


@pytest.mark.parametrize("name", BUNDLED)
def test_ring_associativity_matches_brute_force(name):
    ring = bundled(name).ring
    assert validate_ring(ring).ok == brute_associative(ring) is True


def test_nonassociative_ring_rejected():
    # x x = y, x y = 1 + x: violates (xx)x = x(xx)
    N = np.zeros((3, 3, 3), dtype=int)
    for i in range(3):
        N[i, 0, i] = N[i, i, 0] = 1
    N[2, 1, 1] = 1
    N[0, 1, 2] = N[1, 1, 2] = 1
    N[0, 2, 1] = N[1, 2, 1] = 1
    N[0, 2, 2] = 1
    ring = FusionRing(("1", "x", "y"), 0, (0, 2, 1), N)
    rep = validate_ring(ring)
    assert not brute_associative(ring)
    assert not rep.ok
    assert rep.residuals["associativity"] > 0


def test_bad_dual_rejected():
    N = np.zeros((2, 2, 2), dtype=int)
    N[0, 0, 0] = N[1, 0, 1] = N[1, 1, 0] = 1
    rep = validate_ring(FusionRing(("1", "g"), 0, (0, 1), N))
    assert not rep.ok  # g g must contain the unit when g is self-dual


@pytest.mark.parametrize("name", BUNDLED)
def test_pentagon_tree_oracle(name):
    data = bundled(name)
    assert tree_pentagon_residual(data) < 1e-12
    assert max(pentagon_residuals(data).values()) < 1e-12


@pytest.mark.parametrize("name", ["yang_lee", "e6"])
def test_sign_flip_breaks_pentagon(name):
    data = bundled(name)
    key = max(data.stored_blocks(), key=lambda k: data.stored_blocks()[k].size)
    blk = data.stored_blocks()[key]
    M = blk.matrix.copy()
    M[0, :] *= -1
    M[:, 0] *= -1  # keeps invertibility; still a legal-looking block
    M[0, 0] *= -1
    bad = data.with_blocks({**data.stored_blocks(), key: FBlock(key, blk.rows, blk.cols, M)})
    rep = verify_pentagon(bad)
    assert not rep.ok
    assert rep.max_residual > 0.1
    assert tree_pentagon_residual(bad) > 0.1


@pytest.mark.parametrize("name", BUNDLED)
def test_round_trip_bit_exact(name, tmp_path):
    data = bundled(name)
    p = tmp_path / "c.json"
    save_category(data, p)
    back = load_category(p)
    assert dumps(back) == dumps(data)
    assert back.digest() == data.digest()
    for key, blk in data.stored_blocks().items():
        assert np.array_equal(back.stored_blocks()[key].matrix, blk.matrix)


def test_yang_lee_block_values(yl):
    a = -(1 + np.sqrt(5)) / 2
    blk = yl.block(1, 1, 1, 1)
    assert blk.size == 2
    assert np.allclose(blk.canonical(yl.ring), [[a, a], [1, -a]])


def test_e6_shapes(e6):
    assert e6.labels == ("1", "x", "y")
    assert e6.block(1, 1, 1, 1).size == 6


def test_malformed_inputs():
    good = to_json(bundled("yang_lee"))
    bad = json.loads(json.dumps(good))
    bad["F"][1]["matrix"] = bad["F"][1]["matrix"][:3]
    with pytest.raises(CategoryDataError):
        from_json(bad)
    bad = json.loads(json.dumps(good))
    del bad["fusion"]
    with pytest.raises(CategoryDataError):
        from_json(bad)
    bad = json.loads(json.dumps(good))
    bad["F"].append(bad["F"][0])
    with pytest.raises(CategoryDataError):
        from_json(bad)


def test_unknown_file():
    with pytest.raises(FileNotFoundError):
        load_category("/nonexistent/file.json")
