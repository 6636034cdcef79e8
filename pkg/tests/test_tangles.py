import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import random_connected
from tangleforge.errors import TangleForgeError
from tangleforge.families import gadget_sets, generate, matching_of_hex_tri, truncate_cubic
from tangleforge.graph import Graph, complete_graph, cycle_graph, grid_graph, petersen_graph, to_mask
from tangleforge.minors import find_minor_model
from tangleforge.separations import classify_pair
from tangleforge.tangles import (Tangle, check_axioms_explicit, core_X, crossedges, distinguishes,
                                 distinguishing_order, efficiently_distinguishes, enumerate_tangles,
                                 enumerate_tangles_bruteforce, fence, lift_tangle, minimal_separations,
                                 nondegenerate_minimal, region_R, satisfies_axioms, tangle_members)

# counts below were produced by the exhaustive orientation search and frozen
COUNTS = [
    (complete_graph(4), 4, 0), (complete_graph(5), 4, 1), (complete_graph(6), 4, 1),
    (complete_graph(4), 3, 1), (cycle_graph(7), 2, 1), (cycle_graph(7), 3, 0),
    (grid_graph(3, 3), 3, 1), (grid_graph(4, 4), 4, 1), (petersen_graph(), 4, 1),
    (Graph(1), 1, 1), (Graph(2, [(0, 1)]), 2, 1),
]


@pytest.mark.parametrize("g,k,count", COUNTS)
def test_frozen_tangle_counts(g, k, count):
    assert len(enumerate_tangles(g, k)) == count
    if g.n <= 10:
        assert len(enumerate_tangles_bruteforce(g, k)) == count


def test_enumerators_agree_on_random_graphs():
    rng = random.Random(11)
    for _ in range(80):
        g = random_connected(rng, 1, 8)
        for k in (2, 3, 4):
            fast = {frozenset(tangle_members(t)) for t in enumerate_tangles(g, k)}
            assert fast == set(enumerate_tangles_bruteforce(g, k))


def test_axiom_checks_agree():
    rng = random.Random(12)
    for _ in range(30):
        g = random_connected(rng, 4, 8)
        for t in enumerate_tangles(g, 3) + enumerate_tangles(g, 4):
            assert satisfies_axioms(t) and check_axioms_explicit(t)


def test_broken_orientation_is_rejected():
    g = grid_graph(3, 3)
    t = enumerate_tangles(g, 3)[0]
    sep, comp = t.choice[0]
    rest = g.full & ~sep & ~comp
    bad = Tangle(g, 3, tuple(sorted([(sep, rest)] + list(t.choice[1:]))))
    assert not satisfies_axioms(bad)
    assert not check_axioms_explicit(bad)


def test_json_round_trip():
    g = grid_graph(4, 4)
    t = enumerate_tangles(g, 4)[0]
    assert Tangle.from_json(g, t.to_json()) == t
    with pytest.raises(TangleForgeError):
        Tangle.from_json(cycle_graph(16), t.to_json())


def test_hex_triangle_torus_region():
    g, _ = generate("hex-tri-torus", [3, 3])
    (t,) = enumerate_tangles(g, 4)
    assert len(minimal_separations(t)) == 18
    nd = nondegenerate_minimal(t)
    assert len(nd) == 18
    assert core_X(t) == []
    assert region_R(t) == list(range(g.n))
    assert crossedges(t) == sorted(matching_of_hex_tri(3, 3))
    for s in nd:
        assert len(fence(t, s)) == 3
    kinds = {classify_pair(a, b, g)[0] for a in nd for b in nd if a != b}
    assert kinds <= {"crossing", "orthogonal"}


def test_tri_gadget_tangles():
    g, _ = generate("tri-gadget-torus", [3, 3])
    ts = enumerate_tangles(g, 4)
    assert len(ts) == 19
    grid = list(range(9))
    bulk = [t for t in ts if region_R(t) == grid]
    assert len(bulk) == 1
    assert core_X(bulk[0]) == grid and crossedges(bulk[0]) == []
    assert len(minimal_separations(bulk[0])) == 18
    gadgets = {frozenset(region_R(t)) for t in ts if t is not bulk[0]}
    assert gadgets == set(gadget_sets(3, 3))
    for t in ts:
        if t is not bulk[0]:
            assert len(nondegenerate_minimal(t)) == 1
            assert frozenset(core_X(t)) == frozenset(region_R(t))


def test_distinguishing():
    g, _ = generate("tri-gadget-torus", [3, 3])
    ts = enumerate_tangles(g, 4)
    for a in ts[:4]:
        for b in ts[:4]:
            if a == b:
                assert distinguishing_order(a, b) is None
            else:
                assert distinguishing_order(a, b) == 3
    a, b = ts[0], ts[1]
    sep = next(s for s, c in a.choice if b.component(s) != c)
    from tangleforge.separations import Separation
    s = Separation(g.full & ~sep & ~a.component(sep), sep, a.component(sep))
    assert distinguishes(s, a, b) and efficiently_distinguishes(s, a, b)
    assert not distinguishes(s, b, a)


def test_lifting_along_a_k5_model():
    g = complete_graph(5)
    (t5,) = enumerate_tangles(g, 4)
    host = Graph(10, [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)]
                 + [(5 + i, 5 + j) for i in range(5) for j in range(i + 1, 5)])
    model = find_minor_model(host, g)
    lifted = lift_tangle(model, t5)
    assert lifted in enumerate_tangles(host, 4)


def test_region_needs_three_connectivity():
    t = enumerate_tangles(grid_graph(4, 4), 4)[0]
    with pytest.raises(TangleForgeError):
        region_R(t)


def test_truncated_polyhedra_crossedges_are_the_original_edges():
    for base in (complete_graph(4), petersen_graph()):
        g, matching = truncate_cubic(base)
        (t,) = enumerate_tangles(g, 4)
        assert crossedges(t) == matching


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_every_tangle_orients_each_separator_once(seed):
    g = random_connected(random.Random(seed), 3, 8)
    for t in enumerate_tangles(g, 4):
        seps = [s for s, _ in t.choice]
        assert len(seps) == len(set(seps))
        for s, c in t.choice:
            assert c & s == 0 and c and g.neighborhood(c) & ~s == 0
