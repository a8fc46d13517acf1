#!/usr/bin/env python3
"""Regenerate the frozen cell data shipped in src/acy/data/.

Each file is produced by the numeric solver with a fixed seed and passes the
exact type I/II verification before being written; orbifold and unfolding
families (D, D*, E8) are reconstructed from these at runtime and need no
files of their own.
"""

import json
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from acy.cells import cells_to_doc  # noqa: E402
from acy.quiver import build_family  # noqa: E402
from acy.solver import solve_cells  # noqa: E402

TARGETS = [
    ("A", 4), ("A", 5), ("A", 6), ("A", 7), ("A", 8), ("A", 9), ("A", 12),
    ("A*", 5), ("A*", 6), ("A*", 7), ("A*", 8), ("A*", 9),
    ("A*", 10), ("A*", 11), ("A*", 12), ("A*", 13),
    ("E8*", None),
]


def main():
    outdir = pathlib.Path(__file__).resolve().parent.parent / "src" / "acy" / "data"
    outdir.mkdir(parents=True, exist_ok=True)
    for tag, n in TARGETS:
        t0 = time.time()
        g = build_family(tag, n)
        cells = solve_cells(g, seed=1)
        doc = cells_to_doc(cells)
        doc["label"] = "builtin"
        name = f"cells_{g.name.replace('*', 's')}.json"
        with open(outdir / name, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, separators=(",", ":"), sort_keys=True)
        print(f"{name}: |tri|={len(cells.weights)} tower_deg={cells.tower.degree} "
              f"({time.time() - t0:.1f}s)")


if __name__ == "__main__":
    main()
