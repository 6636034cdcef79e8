from itertools import permutations

import networkx as nx
import pytest

from oracles import to_nx
from tangleforge.contraction import (compose_maps, contract_matching, expand_set, image_edge, induced_tangle,
                                     is_matching, project_separation, project_set, surviving_projections)
from tangleforge.errors import TangleForgeError
from tangleforge.families import generate, kagome_torus, truncate_cubic
from tangleforge.graph import complete_graph, cycle_graph, is_quasi_4_connected, petersen_graph
from tangleforge.separations import Separation
from tangleforge.tangles import crossedges, enumerate_tangles, minimal_separations


def test_contracting_a_matching():
    cm = contract_matching(cycle_graph(6), [(0, 1), (3, 4)])
    assert cm.target == cycle_graph(4)
    assert cm.forward == (0, 0, 1, 2, 2, 3)
    assert cm.backward == ((0, 1), (2,), (3, 4), (5,))
    assert project_set(cm, [1, 2]) == [0, 1]
    assert expand_set(cm, [0, 3]) == [0, 1, 5]
    with pytest.raises(TangleForgeError):
        contract_matching(cycle_graph(6), [(0, 1), (1, 2)])
    with pytest.raises(TangleForgeError):
        contract_matching(cycle_graph(6), [(0, 2)])
    assert is_matching([(0, 1), (2, 3)]) and not is_matching([(0, 1), (1, 2)])


def test_rounds_compose_to_a_single_contraction():
    g = cycle_graph(8)
    first = contract_matching(g, [(0, 1)])
    second = contract_matching(first.target, [image_edge(first, (4, 5))])
    both = compose_maps(first, second)
    direct = contract_matching(g, [(0, 1), (4, 5)])
    assert both.target == direct.target and both.forward == direct.forward


def test_projection_moves_touching_vertices_into_the_separator():
    g = cycle_graph(6)
    cm = contract_matching(g, [(1, 2)])
    s = Separation.of([2, 3], [1, 4], [0, 5])
    p = project_separation(cm, s)
    assert p.sets() == ([2], [1, 3], [0, 4])


def test_hex_triangle_torus_contracts_to_kagome():
    g, _ = generate("hex-tri-torus", [3, 3])
    (t,) = enumerate_tangles(g, 4)
    ex = crossedges(t)
    cm, t2 = induced_tangle(g, t, ex)
    assert nx.is_isomorphic(to_nx(cm.target), to_nx(kagome_torus(3, 3)))
    assert is_quasi_4_connected(cm.target)
    assert crossedges(t2) == []


def test_order_independence_on_truncated_k4():
    g, matching = truncate_cubic(complete_graph(4))
    (t,) = enumerate_tangles(g, 4)
    L = matching[:3]
    seen = set()
    for perm in permutations(L):
        cur_g, cur_t, acc = g, t, None
        for e in perm:
            e2 = image_edge(acc, e) if acc else e
            step, cur_t = induced_tangle(cur_g, cur_t, [e2])
            acc = step if acc is None else compose_maps(acc, step)
            cur_g = step.target
        seen.add((acc.forward, cur_t.choice))
    assert len(seen) == 1


def test_crossedges_and_minimal_separations_transfer():
    g, matching = truncate_cubic(petersen_graph())
    (t,) = enumerate_tangles(g, 4)
    L = matching[:2]
    cm, t2 = induced_tangle(g, t, L)
    assert crossedges(t2) == sorted(image_edge(cm, e) for e in matching[2:])
    key = lambda s: (s.S, min(s.Y, s.Z))  # noqa: E731
    assert {key(s) for s in minimal_separations(t2)} == {
        key(s) for s in surviving_projections(cm, minimal_separations(t))}


def test_non_crossedges_are_refused():
    g, _ = generate("hex-tri-torus", [3, 3])
    (t,) = enumerate_tangles(g, 4)
    with pytest.raises(TangleForgeError):
        induced_tangle(g, t, [(0, 1)])
