import random
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from oracles import random_connected, to_nx
from tangleforge.errors import ParseError, TangleForgeError
from tangleforge.graph import (Graph, articulation_points, complete_bipartite, complete_graph, components,
                               cycle_graph, grid_graph, is_connected, is_k_connected, is_quasi_4_connected,
                               parse_edge_list, parse_graph6, petersen_graph, prism_graph, separating_sets,
                               to_graph6, torso)


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(0, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(n, chosen)


@given(graphs(max_n=20))
def test_graph6_round_trip(g):
    assert parse_graph6(to_graph6(g)) == g


@pytest.mark.parametrize("g", [complete_graph(5), petersen_graph(), Graph(0), Graph(1)])
def test_graph6_matches_networkx(g):
    assert to_graph6(g) == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()


@pytest.mark.parametrize("text,offset", [("", 0), ("D", 1), ("D??!", 3), ("~abc", 0), ("B~", 1)])
def test_graph6_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as e:
        parse_graph6(text)
    assert e.value.offset == offset


def test_edge_list_parsing():
    g = parse_edge_list("a b\n# comment\nb c  # trailing\nd\n")
    assert g.n == 4 and g.edges() == [(0, 1), (1, 2)]
    assert g.labels == ("a", "b", "c", "d")
    with pytest.raises(ParseError) as e:
        parse_edge_list("a b\na a\n")
    assert e.value.offset == 4
    with pytest.raises(ParseError):
        parse_edge_list("a b\nb a\n")
    with pytest.raises(ParseError):
        parse_edge_list("a b c\n")


def test_graph_rejects_bad_edges():
    with pytest.raises(TangleForgeError):
        Graph(2, [(0, 0)])
    with pytest.raises(TangleForgeError):
        Graph(2, [(0, 2)])
    assert Graph(2, [(0, 1), (1, 0)]).m == 1


@settings(max_examples=150)
@given(graphs())
def test_components_and_cut_vertices_match_networkx(g):
    h = to_nx(g)
    ours = sorted(sorted(v for v in range(g.n) if c >> v & 1) for c in components(g))
    assert ours == sorted(sorted(c) for c in nx.connected_components(h))
    assert articulation_points(g) == set(nx.articulation_points(h))


def test_separating_sets_against_brute_force():
    rng = random.Random(1)
    for _ in range(60):
        g = random_connected(rng, 2, 8)
        want = []
        for k in range(0, 4):
            for s in combinations(range(g.n), k):
                rest = [v for v in range(g.n) if v not in s]
                if len(rest) >= 2 and not nx.is_connected(to_nx(g).subgraph(rest)):
                    want.append(s)
        assert separating_sets(g, 3) == want


def test_connectivity_against_networkx():
    rng = random.Random(2)
    for _ in range(80):
        g = random_connected(rng, 2, 9)
        kappa = nx.node_connectivity(to_nx(g))
        for k in range(1, 5):
            assert is_k_connected(g, k) == (g.n > k and kappa >= k)


@pytest.mark.parametrize("g,want", [
    (prism_graph(), True), (complete_graph(4), True), (complete_graph(5), True),
    (petersen_graph(), True), (complete_bipartite(3, 3), False),
    (complete_bipartite(3, 4), False), (cycle_graph(6), False), (grid_graph(3, 3), False),
])
def test_quasi_4_connected_examples(g, want):
    assert is_quasi_4_connected(g) == want


def test_torso_adds_cliques_on_neighbourhoods():
    c6 = cycle_graph(6)
    h, keep = torso(c6, [0, 2, 4])
    assert keep == [0, 2, 4]
    assert h.edges() == [(0, 1), (0, 2), (1, 2)]
    h, _ = torso(c6, range(6))
    assert h == c6
    assert is_connected(torso(grid_graph(3, 3), [0, 8])[0])
