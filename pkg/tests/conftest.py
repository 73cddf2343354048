import itertools

import numpy as np
import pytest

from fusioncat.catdata import BUNDLED, bundled

PHI = (1 + np.sqrt(5)) / 2
SQ3 = np.sqrt(3)


@pytest.fixture(scope="session")
def yl():
    return bundled("yang_lee")


@pytest.fixture(scope="session")
def e6():
    return bundled("e6")


@pytest.fixture(scope="session")
def trivial():
    return bundled("trivial")


@pytest.fixture(scope="session", params=BUNDLED)
def category(request):
    return bundled(request.param)


def admissible(ring):
    n = ring.rank
    return [(i, j, k) for i, j, k in itertools.product(range(n), repeat=3) if ring.N(i, j, k)]


def pointed_z3(q: int = 0):
    """Vec(Z/3) twisted by the 3-cocycle exp(2 pi i q a (b + c - [b + c]) / 9)."""
    from fusioncat.catdata import FBlock, FusionCategoryData, FusionRing

    N = np.zeros((3, 3, 3), dtype=int)
    for a, b in itertools.product(range(3), repeat=2):
        N[(a + b) % 3, a, b] = 1
    ring = FusionRing(("0", "1", "2"), 0, (0, 2, 1), N)
    blocks = {}
    for a, b, c in itertools.product(range(1, 3), repeat=3):
        w = np.exp(2j * np.pi * q * a * (b + c - (b + c) % 3) / 9)
        key = ((a + b + c) % 3, a, b, c)
        blocks[key] = FBlock(key, [(0, (a + b) % 3, 0)], [(0, (b + c) % 3, 0)], np.array([[w]]))
    return FusionCategoryData(ring, blocks, name=f"z3_q{q}")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
