"""Write the bundled ``trivial.json`` and ``yang_lee.json`` data files."""
from pathlib import Path

import numpy as np

from fusioncat.catdata import (FBlock, FusionCategoryData, FusionRing, block_cols, block_rows,
                               save_category, validate)

OUT = Path(__file__).resolve().parents[1] / "src" / "fusioncat" / "data"


def trivial():
    ring = FusionRing(("1",), 0, (0,), np.ones((1, 1, 1), dtype=np.int64))
    key = (0, 0, 0, 0)
    blk = FBlock(key, block_rows(ring, *key), block_cols(ring, *key), [[1.0]])
    return FusionCategoryData(ring, {key: blk}, name="trivial")


def yang_lee():
    a = -(1 + np.sqrt(5)) / 2
    N = np.zeros((2, 2, 2), dtype=np.int64)
    N[0, 0, 0] = N[1, 0, 1] = N[1, 1, 0] = N[0, 1, 1] = N[1, 1, 1] = 1
    ring = FusionRing(("1", "tau"), 0, (0, 1), N)
    blocks = {}
    # rows/cols: channel 1 then channel tau
    for key, mat in [((1, 1, 1, 1), [[a, a], [1.0, -a]]), ((0, 1, 1, 1), [[1.0]])]:
        blocks[key] = FBlock(key, block_rows(ring, *key), block_cols(ring, *key), mat)
    return FusionCategoryData(ring, blocks, name="yang_lee")


if __name__ == "__main__":
    for data in (trivial(), yang_lee()):
        assert all(r.ok for r in validate(data)), [r.violations for r in validate(data)]
        save_category(data, OUT / f"{data.name}.json")
        print("wrote", data.name)
