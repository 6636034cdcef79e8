import networkx as nx
import pytest

from tangleforge.graph import Graph, cycle_graph, petersen_graph
from tangleforge.td import TreeDecomposition, tutte_decomposition
from tangleforge.walks import (canonical_walk, closed_walk_generators, fundamental_cycles, generates,
                               generates_all, is_closed_walk, reduce_walk, theta_graph)


def test_reduction():
    assert reduce_walk([0, 1, 0]) == ()
    assert reduce_walk([0, 1, 2, 1]) == ()
    assert reduce_walk([0, 1, 2, 3, 2, 1]) == ()
    assert reduce_walk([5, 0, 1, 2, 0]) == (0, 1, 2)
    assert reduce_walk([0, 1, 2]) == (0, 1, 2)
    assert canonical_walk((2, 0, 1)) == canonical_walk((0, 2, 1)) == (0, 1, 2)


@pytest.mark.parametrize("n", range(3, 11))
def test_cycle_generator_is_the_cycle(n):
    g = cycle_graph(n)
    (w,) = closed_walk_generators(g, TreeDecomposition.trivial(g))
    assert sorted(w) == list(range(n)) and is_closed_walk(g, w)
    assert generates_all(g, [w]) is True


def test_tree_has_no_generators():
    g = Graph(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
    assert closed_walk_generators(g, tutte_decomposition(g)) == []
    assert generates_all(g, []) is True


def test_theta_two_faces_generate_the_third():
    g = theta_graph(1, 1, 1)
    gens = closed_walk_generators(g, tutte_decomposition(g))
    assert len(gens) == 2
    for w in gens:
        assert is_closed_walk(g, w)
    third = (0, 3, 1, 4)
    assert generates(g, gens, third) is True
    assert generates(g, gens[:1], third) in (False, None)


def test_missing_generator_is_detected():
    g = petersen_graph()
    cyc = fundamental_cycles(g)
    assert generates_all(g, cyc) is True
    assert generates_all(g, cyc[1:], max_states=2000) is not True


def test_fundamental_cycle_count():
    g = petersen_graph()
    assert len(fundamental_cycles(g)) == g.m - g.n + 1
    h = nx.cycle_basis(nx.petersen_graph())
    assert len(h) == len(fundamental_cycles(g))
