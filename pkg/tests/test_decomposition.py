import random

import networkx as nx
import pytest

from oracles import random_connected, to_nx
from tangleforge.contraction import contract_matching
from tangleforge.decomposition import (efficient_distinguishers, fan_td, grohe_decomposition, grohe_errors,
                                       orbit_bound_check, reduced_region, region_star_td,
                                       stabilizer_action, structure_decomposition, tangle_distinguishing,
                                       tangle_distinguishing_td)
from tangleforge.families import cycle_tree, gadget_sets, generate
from tangleforge.graph import Graph, complete_graph, cycle_graph, grid_graph, is_quasi_4_connected, prism_graph
from tangleforge.symmetry import GroupAction, automorphisms, is_canonical_td
from tangleforge.tangles import crossedges, enumerate_tangles
from tangleforge.td import TreeDecomposition, validate_td


def _two_grids_on_a_triangle():
    """Two 4x4 grids, each with a triangle 0,1,4 made a clique, glued on it."""
    g1 = grid_graph(4, 4)
    es = set(g1.edges()) | {(1, 4), (0, 5)}
    m = {v: v for v in (0, 1, 4)}
    nxt = 16
    for v in range(16):
        if v not in m:
            m[v] = nxt
            nxt += 1
    es2 = {(min(m[u], m[v]), max(m[u], m[v])) for u, v in es}
    return Graph(nxt, sorted(es | es2))


def test_single_tangle_gives_trivial_decomposition():
    g, act = generate("hex-tri-torus", [3, 3])
    td, rep = tangle_distinguishing(g, enumerate_tangles(g, 4), act)
    assert td.size == 1 and rep["ok"]


def test_tri_gadget_star():
    g, act = generate("tri-gadget-torus", [3, 3])
    td, rep = tangle_distinguishing(g, enumerate_tangles(g, 4), act)
    assert rep["ok"] and not rep["fallback"]
    bags = sorted((frozenset(td.bag(i)) for i in range(td.size)), key=len)
    assert bags[-1] == frozenset(range(9))
    assert set(bags[:-1]) == set(gadget_sets(3, 3))
    assert is_canonical_td(td, act)[0]


def test_two_grids_glued_on_a_triangle_are_distinguished():
    g = _two_grids_on_a_triangle()
    ts = enumerate_tangles(g, 4)
    assert len(ts) == 2
    td, rep = tangle_distinguishing(g, ts)
    assert rep["ok"] and rep["all_pairs"] and td.size >= 2
    assert td.adhesion == 3
    assert validate_td(td)["ok"]
    assert len(efficient_distinguishers(g, ts)) >= 1


def test_region_star_examples():
    g, _ = generate("hex-tri-torus", [3, 3])
    (t,) = enumerate_tangles(g, 4)
    assert region_star_td(g, t).size == 1
    (t,) = enumerate_tangles(complete_graph(5), 4)
    assert region_star_td(complete_graph(5), t).size == 1
    g, _ = generate("tri-gadget-torus", [3, 3])
    bulk = next(t for t in enumerate_tangles(g, 4) if len(crossedges(t)) == 0 and g.n > 9
                and region_star_td(g, t).size == 19)
    td = region_star_td(g, bulk)
    leaves = {frozenset(td.bag(i)) for i in range(1, td.size)}
    assert leaves == set(gadget_sets(3, 3))


def test_grohe_examples():
    assert grohe_decomposition(prism_graph()).size == 1
    g, _ = generate("hex-tri-torus", [3, 3])
    td = grohe_decomposition(g)
    assert grohe_errors(g, td, minor_limit=4) == []
    center = max(range(td.size), key=lambda i: len(td.bag(i)))
    (t,) = enumerate_tangles(g, 4)
    contracted = contract_matching(g, crossedges(t)).target
    assert sorted(td.bag(center)) == reduced_region(t)
    assert nx.is_isomorphic(to_nx(td.torso(center)[0]), to_nx(contracted))


def test_grohe_on_random_graphs():
    rng = random.Random(71)
    for _ in range(40):
        g = random_connected(rng, 1, 11)
        td = grohe_decomposition(g)
        assert grohe_errors(g, td) == []


def test_fan():
    td = fan_td(cycle_graph(7))
    assert td.size == 5 and td.width == 2 and validate_td(td)["ok"]


@pytest.mark.parametrize("n", range(4, 13))
def test_structure_of_cycles_is_trivial(n):
    g, act = generate("cycle", [n])
    td, rep = structure_decomposition(g, act)
    assert td.size == 1 and rep["canonical"]


def test_structure_of_hex_triangle_torus():
    g, act = generate("hex-tri-torus", [3, 3])
    td, rep = structure_decomposition(g, automorphisms(g))
    assert td.size == 1
    (tor,) = rep["torsos"]
    assert len(tor["crossedges"]) == 27 and tor["contracted_quasi_4_connected"] is True
    assert tor["planar"] is False


def test_structure_of_tri_gadget_torus():
    g, act = generate("tri-gadget-torus", [3, 3])
    td, rep = structure_decomposition(g, act)
    assert rep["canonical"] and rep["tight"] and rep["nondegenerate"] and rep["adhesion"] <= 3
    assert validate_td(td)["ok"]


@pytest.mark.parametrize("k,depth,branching", [(4, 2, 1), (5, 2, 1), (6, 2, 2), (8, 1, 3)])
def test_structure_keeps_cycles_of_cycle_trees_whole(k, depth, branching):
    g, _, cycles = cycle_tree(k, depth, branching)
    td, rep = structure_decomposition(g, automorphisms(g))
    assert rep["canonical"]
    for cyc in cycles:
        assert any(set(cyc) <= set(td.bag(i)) for i in range(td.size))


def test_structure_is_canonical_on_random_graphs():
    rng = random.Random(72)
    for _ in range(30):
        g = random_connected(rng, 1, 10)
        act = automorphisms(g)
        td, rep = structure_decomposition(g, act)
        assert is_canonical_td(td, act)[0]
        assert rep["adhesion"] <= 3


def test_stabiliser_and_orbit_bound():
    g, act = generate("tri-gadget-torus", [3, 3])
    td, _ = structure_decomposition(g, act)
    for row in orbit_bound_check(td, act):
        assert row["ok"], row
    center = max(range(td.size), key=lambda i: len(td.bag(i)))
    stab = stabilizer_action(td, act, center)
    assert stab.host.n == len(td.bag(center))


def test_trivial_action_default():
    td, rep = structure_decomposition(cycle_graph(5))
    assert td == TreeDecomposition.trivial(cycle_graph(5)) and rep["canonical"]
    assert GroupAction.trivial(cycle_graph(5)).order() == 1
