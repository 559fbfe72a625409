"""Smoke test for the cubic_chessboard extension.

Build first with `cargo build -p chessboard_py`, then run `python3 python/smoke_test.py`.
Set CUBIC_CHESSBOARD_LIB to point at a specific shared library.
"""

import cmath
import importlib.util
import json
import os
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def find_library():
    explicit = os.environ.get("CUBIC_CHESSBOARD_LIB")
    if explicit:
        return Path(explicit)
    target = Path(os.environ.get("CARGO_TARGET_DIR", ROOT / "target"))
    for profile in ("release", "debug"):
        for name in ("libcubic_chessboard.so", "libcubic_chessboard.dylib", "cubic_chessboard.dll"):
            p = target / profile / name
            if p.exists():
                return p
    sys.exit("extension not built; run `cargo build -p chessboard_py`")


def load():
    lib = find_library()
    tmp = Path(tempfile.mkdtemp())
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    dest = tmp / f"cubic_chessboard{suffix}"
    shutil.copy(lib, dest)
    found = importlib.util.spec_from_file_location("cubic_chessboard", dest)
    module = importlib.util.module_from_spec(found)
    found.loader.exec_module(module)
    return module


def main():
    cc = load()

    re, im = cc.j()
    assert abs(complex(re, im) - cmath.exp(2j * cmath.pi / 3)) < 1e-12

    rows = cc.mult_table(2, "star", "csv").strip().splitlines()
    assert len(rows) == 513, len(rows)
    assert cc.mult_table(2, "star", "csv") == cc.mult_table(2, "star", "csv")

    flat = cc.flat_solutions()
    assert len(flat) == 9

    assert cc.bracket_search_nullity(2) == 0
    assert cc.bracket_search_nullity(2, binary=True) >= 1

    k, m = [0.3, -0.2, 0.5], 1.0
    for w in cc.solve_omega(k, m):
        kx, ky, kz = k
        lhs = w ** 3
        rhs = kx**3 + ky**3 + kz**3 - 3 * kx * ky * kz + m**3
        assert abs(lhs - rhs) < 1e-9, (w, lhs, rhs)

    samples = cc.dispersion(1.0, "-1:1:1")
    assert len(samples) == 27

    report = json.loads(cc.verify_json("grassmann", cc.DEFAULT_SEED))
    assert report["passed"], report

    for bad in (lambda: cc.mult_table(4), lambda: cc.verify_json("nope"), lambda: cc.dispersion(1.0, "2:1:1")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("cubic_chessboard smoke test: ok")


if __name__ == "__main__":
    main()
