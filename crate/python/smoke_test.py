"""Smoke test for the abd_kit extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`,
then run `python python/smoke_test.py`.
"""

import math
from pathlib import Path

import abd_kit

FIXTURES = Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"


def fixture_tree(name):
    return abd_kit.MergeTree.from_json((FIXTURES / name).read_text())


def main():
    x, y, z = (fixture_tree(f"triangle_{c}.json") for c in "xyz")
    dxy = abd_kit.branching_distance(x, y)
    dyz = abd_kit.branching_distance(y, z)
    dxz = abd_kit.branching_distance(x, z, engine="baseline")
    assert (dxy, dyz, dxz) == (5.0, 3.0, 1.0), (dxy, dyz, dxz)
    assert abs(abd_kit.branching_distance(x, y, tol=1e-6) - 5.0) <= 1e-6

    g, h, j = (abd_kit.load_graph(FIXTURES / f"abd_{c}.json") for c in "ghj")
    one = dict(frames=1)
    values = [
        abd_kit.average_branching_distance(g, h, **one),
        abd_kit.average_branching_distance(g, j, **one),
        abd_kit.average_branching_distance(h, j, **one),
    ]
    assert values == [6.5, 2.5, 3.0], values

    w = abd_kit.Graph([(i, v) for i, v in enumerate([0, 5, 1, 6, 2])], [(i, i + 1) for i in range(4)])
    tree = abd_kit.merge_tree(w)
    assert len(tree) == 5 and tree.leaf_count == 3

    square = abd_kit.Graph([(0, 0), (1, 0), (1, 1), (0, 1)], [(0, 1), (1, 2), (2, 3), (3, 0)])
    hexagon = abd_kit.Graph(
        [(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)) for k in range(6)],
        [(k, (k + 1) % 6) for k in range(6)],
    )
    assert abd_kit.average_branching_distance(square, hexagon) == 0.0

    d = abd_kit.distance_matrix([g, h, j], labels=["g", "h", "j"], frames=1)
    assert d[0][1] == 6.5 and d[1][0] == 6.5
    steps = abd_kit.single_linkage(d)
    assert [s[2] for s in steps] == [2.5, 3.0]
    assert abd_kit.cut_clusters(d, 2) == [0, 1, 0]
    coords, clamped = abd_kit.classical_mds([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    assert len(coords) == 3 and clamped == 0

    try:
        abd_kit.MergeTree([1.0, 0.0], [1, 0])
    except ValueError:
        pass
    else:
        raise AssertionError("invalid tree accepted")

    ok, report = abd_kit.run_verify(trials=10)
    assert ok, report
    print(report)
    print("smoke test passed")


if __name__ == "__main__":
    main()
