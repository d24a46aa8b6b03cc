"""Smoke test for the posqbf_py extension.

Build and run from the workspace root:

    cargo build -p posqbf-py --features extension-module
    python3 crates/py/python/smoke_test.py
"""

import os
import shutil
import sys
import tempfile

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.abspath(os.path.join(HERE, "..", "..", ".."))


def import_extension():
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(ROOT, "target"))
    for profile in ("debug", "release"):
        lib = os.path.join(target, profile, "libposqbf_py.so")
        if os.path.exists(lib):
            tmp = tempfile.mkdtemp()
            shutil.copy(lib, os.path.join(tmp, "posqbf_py.so"))
            sys.path.insert(0, tmp)
            break
    import posqbf_py

    return posqbf_py


def main():
    pq = import_extension()

    board = pq.Instance.parse("size 4\nblack b1 a3\nwhite c1 a4 d4\n", "hex")
    assert board.kind == "hex" and board.num_positions == 16, board
    assert pq.black_wins(board, 7)
    assert not pq.black_wins(board, 5)
    assert pq.winning_first_moves(board, 7) == ["c3"]

    reduced = pq.reduce(board, 5)
    assert reduced.kind == "ghex" and reduced.num_positions == 4, reduced.text()

    assert "LN" in pq.encodings()
    for enc in ("EA", "EN", "ET", "LA", "LN", "SA", "SN"):
        e = pq.encode(board, enc, 5)
        assert e.evaluate() is False, enc
        assert e.render("qdimacs").splitlines()[0].startswith(("p cnf", "c")), enc
        assert e.render("qcir").startswith("#QCIR-G14"), enc
        assert e.stats()["num_vars"] >= 0

    domino = pq.Instance.polyomino("domino", 3)
    assert pq.encode(domino, "HTTT-SN", 3, symmetry_reduce=True).evaluate()

    big = pq.encode(pq.Instance.load("empty19"), "LN", 45).stats()
    assert 3750 <= big["num_vars"] <= 6250, big

    try:
        pq.encode(board, "EN", 4)
    except ValueError as err:
        assert "odd" in str(err)
    else:
        raise AssertionError("even depth accepted")

    checks, bad = pq.selfcheck()
    assert checks > 0 and not bad, bad
    print("smoke test passed")


if __name__ == "__main__":
    main()
