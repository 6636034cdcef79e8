import random

import pytest

from oracles import random_connected
from tangleforge.errors import TangleForgeError
from tangleforge.families import truncate_cubic
from tangleforge.graph import Graph, complete_bipartite, complete_graph, cycle_graph, path_graph, to_mask
from tangleforge.separations import (Separation, all_separations_naive, classify_pair, compare,
                                     enumerate_tight_separations, is_degenerate, is_nested, is_tight,
                                     is_valid, precedes, separations_at, validate)


def test_validity():
    p = path_graph(4)
    assert is_valid(p, Separation.of([0], [1], [2, 3]))
    assert not is_valid(p, Separation.of([0], [2], [1, 3]))
    with pytest.raises(TangleForgeError):
        validate(p, Separation.of([0, 1], [1], [2, 3]))


def test_tight_and_degenerate():
    k33 = complete_bipartite(3, 3)
    s = Separation.of([0], [3, 4, 5], [1, 2])
    assert is_tight(k33, s) and is_degenerate(k33, s)
    assert not is_degenerate(k33, s.flip())
    c6 = cycle_graph(6)
    assert is_tight(c6, Separation.of([1, 2], [0, 3], [4, 5]))
    assert is_tight(c6, Separation.of([1], [0, 2], [3, 4, 5]))
    assert not is_tight(path_graph(4), Separation.of([0], [1, 2], [3]))


def test_order_on_separations():
    a = Separation.of([0], [1], [2, 3])
    b = Separation.of([0, 1], [2], [3])
    assert precedes(b, a) and not precedes(a, b)
    assert compare(a, a) == "equal" and compare(b, a) == "less" and compare(a, b) == "greater"


def test_crossing_and_orthogonal_pairs():
    # truncated K4: the separations cutting off two adjacent triangles cross
    # in the edge joining them
    g, matching = truncate_cubic(complete_graph(4))
    tri = [[3 * v, 3 * v + 1, 3 * v + 2] for v in range(4)]
    seps = []
    for t in tri[:2]:
        nb = [v for v in range(g.n) if g.neighborhood(to_mask(t)) >> v & 1]
        seps.append(Separation.of(t, nb, [v for v in range(g.n) if v not in t and v not in nb]))
    kind, edge = classify_pair(seps[0], seps[1], g)
    assert kind == "crossing" and tuple(sorted(edge)) in matching
    assert classify_pair(seps[0], seps[1], Graph(12)) == ("neither", None)
    c8 = cycle_graph(8)
    x = Separation.of([1], [0, 2], [3, 4, 5, 6, 7])
    y = Separation.of([5], [4, 6], [0, 1, 2, 3, 7])
    assert classify_pair(x, y)[0] == "orthogonal"
    assert is_nested(x, y)


def test_tight_enumeration_against_naive():
    rng = random.Random(3)
    for _ in range(40):
        g = random_connected(rng, 2, 7)
        want = sorted({s for s in all_separations_naive(g, 3) if is_tight(g, s)}, key=Separation.key)
        assert enumerate_tight_separations(g, 3) == want


def test_separations_at_and_json():
    g = cycle_graph(6)
    seps = separations_at(g, 0b1001)
    assert len(seps) == 4
    for s in seps:
        assert Separation.from_json(s.to_json()) == s
        assert s.flip().flip() == s
