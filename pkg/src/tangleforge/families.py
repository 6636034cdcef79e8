"""Generators for the graph families used as worked examples.

Every generator returns ``(graph, generators)`` where the generators are
vertex permutations describing the intended symmetry (translations,
rotations, local swaps).  They are validated as automorphisms when wrapped in
a GroupAction.
"""
from __future__ import annotations

from .errors import TangleForgeError
from .graph import Graph, complete_bipartite, complete_graph, cycle_graph
from .symmetry import GroupAction

FAMILIES = ("hex-tri-torus", "tri-gadget-torus", "cycle", "torus-grid", "cycle-tree",
            "complete", "complete-bipartite")


def _check_dims(a: int, b: int):
    if a < 3 or b < 3:
        raise TangleForgeError("torus dimensions must be at least 3")


def _perm_from(index: dict, mapping) -> tuple[int, ...]:
    perm = [0] * len(index)
    for key, v in index.items():
        perm[v] = index[mapping(key)]
    return tuple(perm)


def hex_torus(a: int, b: int) -> tuple[Graph, dict]:
    """Honeycomb on an a x b torus: vertices (i, j, s), s in {0, 1}."""
    _check_dims(a, b)
    index = {}
    for i in range(a):
        for j in range(b):
            for s in range(2):
                index[(i, j, s)] = len(index)
    edges = []
    for i in range(a):
        for j in range(b):
            u = index[(i, j, 1)]
            edges.append((index[(i, j, 0)], u))
            edges.append((u, index[((i + 1) % a, j, 0)]))
            edges.append((u, index[(i, (j + 1) % b, 0)]))
    labels = [f"h{i},{j},{s}" for (i, j, s) in index]
    return Graph(len(index), edges, labels), index


def hex_tri_torus(a: int, b: int) -> tuple[Graph, list]:
    """Honeycomb torus with every vertex replaced by a triangle.

    Vertex (i, j, s, d) is the corner of the triangle at honeycomb vertex
    (i, j, s) pointing along direction d; the honeycomb edges become a
    perfect matching between triangle corners.
    """
    _check_dims(a, b)
    index = {}
    for i in range(a):
        for j in range(b):
            for s in range(2):
                for d in range(3):
                    index[(i, j, s, d)] = len(index)
    edges = []
    for key, v in index.items():
        i, j, s, d = key
        for e in range(d + 1, 3):
            edges.append((v, index[(i, j, s, e)]))
    for i in range(a):
        for j in range(b):
            edges.append((index[(i, j, 0, 0)], index[(i, j, 1, 0)]))
            edges.append((index[(i, j, 1, 1)], index[((i + 1) % a, j, 0, 1)]))
            edges.append((index[(i, j, 1, 2)], index[(i, (j + 1) % b, 0, 2)]))
    labels = [f"t{i},{j},{s},{d}" for (i, j, s, d) in index]
    g = Graph(len(index), edges, labels)
    gens = [_perm_from(index, lambda k: ((k[0] + 1) % a, k[1], k[2], k[3])),
            _perm_from(index, lambda k: (k[0], (k[1] + 1) % b, k[2], k[3]))]
    return g, gens


def matching_of_hex_tri(a: int, b: int) -> list[tuple[int, int]]:
    """The inter-triangle matching of hex_tri_torus(a, b), as sorted pairs."""
    g, _ = hex_tri_torus(a, b)
    tri = {}
    for v, lab in enumerate(g.labels):
        i, j, s, _d = lab[1:].split(",")
        tri[v] = (i, j, s)
    return sorted((u, v) for u, v in g.edges() if tri[u] != tri[v])


def kagome_torus(a: int, b: int) -> Graph:
    """Line graph of the honeycomb torus, built directly from its edge list."""
    h, _ = hex_torus(a, b)
    es = h.edges()
    at: dict[int, list[int]] = {}
    for k, (u, v) in enumerate(es):
        at.setdefault(u, []).append(k)
        at.setdefault(v, []).append(k)
    edges = set()
    for ks in at.values():
        for x in ks:
            for y in ks:
                if x < y:
                    edges.add((x, y))
    return Graph(len(es), sorted(edges))


def triangular_torus(a: int, b: int) -> tuple[Graph, list[tuple[int, int, int]]]:
    """Triangulated a x b torus and its list of 2ab triangular faces."""
    _check_dims(a, b)

    def idx(i, j):
        return (i % a) * b + (j % b)

    edges = []
    faces = []
    for i in range(a):
        for j in range(b):
            edges += [(idx(i, j), idx(i + 1, j)), (idx(i, j), idx(i, j + 1)), (idx(i, j), idx(i + 1, j + 1))]
            faces.append(tuple(sorted((idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)))))
            faces.append(tuple(sorted((idx(i, j), idx(i, j + 1), idx(i + 1, j + 1)))))
    return Graph(a * b, edges), faces


def tri_gadget_torus(a: int, b: int) -> tuple[Graph, list]:
    """Triangulated torus where each face v1v2v3 receives w1, w2, w3 (each
    joined to v1, v2, v3) and an apex z joined to w1, w2, w3."""
    _check_dims(a, b)
    base, faces = triangular_torus(a, b)
    n = a * b
    labels = [f"v{v // b},{v % b}" for v in range(n)]
    edges = list(base.edges())
    gadgets = []
    for f, face in enumerate(faces):
        ws = [n + 4 * f + r for r in range(3)]
        z = n + 4 * f + 3
        for w in ws:
            for v in face:
                edges.append((w, v))
            edges.append((w, z))
        labels += [f"w{f},{r}" for r in range(3)] + [f"z{f}"]
        gadgets.append((face, tuple(ws), z))
    g = Graph(n + 4 * len(faces), edges, labels)

    def translate(di, dj):
        vmap = [((v // b + di) % a) * b + (v % b + dj) % b for v in range(n)]
        fpos = {face: f for f, face in enumerate(faces)}
        perm = list(vmap)
        for f, face in enumerate(faces):
            img = fpos[tuple(sorted(vmap[v] for v in face))]
            for r in range(4):
                perm.append(n + 4 * img + r)
        return tuple(perm)

    swap = list(range(g.n))
    swap[n], swap[n + 1] = n + 1, n
    gens = [translate(1, 0), translate(0, 1), tuple(swap)]
    return g, gens


def gadget_sets(a: int, b: int) -> list[frozenset]:
    """Vertex sets of the 7-vertex gadgets of tri_gadget_torus(a, b)."""
    _, faces = triangular_torus(a, b)
    n = a * b
    return [frozenset(face) | frozenset(range(n + 4 * f, n + 4 * f + 4)) for f, face in enumerate(faces)]


def torus_grid(a: int, b: int) -> tuple[Graph, list]:
    _check_dims(a, b)

    def idx(i, j):
        return (i % a) * b + (j % b)

    edges = []
    for i in range(a):
        for j in range(b):
            edges += [(idx(i, j), idx(i + 1, j)), (idx(i, j), idx(i, j + 1))]
    g = Graph(a * b, edges)
    gens = [tuple(idx(v // b + 1, v % b) for v in range(a * b)),
            tuple(idx(v // b, v % b + 1) for v in range(a * b)),
            tuple(idx(-(v // b), v % b) for v in range(a * b))]
    return g, gens


def cycle_with_action(n: int) -> tuple[Graph, list]:
    if n < 3:
        raise TangleForgeError("a cycle needs at least 3 vertices")
    return cycle_graph(n), [tuple((v + 1) % n for v in range(n)), tuple((-v) % n for v in range(n))]


def cycle_tree(k: int, depth: int, branching: int = 2) -> tuple[Graph, list, list[list[int]]]:
    """k-cycles glued edge-to-edge along a rooted tree.

    The root cycle gets ``branching`` children and so does every cycle above
    the given depth; a child shares one edge with its parent, and siblings
    use disjoint parent edges.  Returns the graph, symmetry generators (none
    are claimed; callers compute Aut) and the vertex lists of the cycles.
    """
    if k < 4 or depth < 0 or branching < 1 or branching > (k - 2) // 2:
        raise TangleForgeError("cycle-tree needs k >= 4, depth >= 0 and 1 <= branching <= (k-2)//2")
    edges = []
    cycles = []
    count = [0]

    def new_vertex():
        count[0] += 1
        return count[0] - 1

    def grow(cyc, level):
        cycles.append(cyc)
        for i in range(k):
            edges.append(tuple(sorted((cyc[i], cyc[(i + 1) % k]))))
        if level == depth:
            return
        # cyc[0]cyc[1] is the edge shared with the parent; children use later edges
        for c in range(branching):
            u, v = cyc[2 + 2 * c], cyc[3 + 2 * c]
            child = [v, u] + [new_vertex() for _ in range(k - 2)]
            grow(child, level + 1)

    root = [new_vertex() for _ in range(k)]
    grow(root, 0)
    return Graph(count[0], sorted(set(edges))), [], cycles


def truncate_cubic(g: Graph) -> tuple[Graph, list[tuple[int, int]]]:
    """Replace every vertex of a cubic graph by a triangle; returns the graph
    and the matching formed by the original edges."""
    if any(g.degree(v) != 3 for v in range(g.n)):
        raise TangleForgeError("truncation expects a cubic graph")
    index = {}
    for v in range(g.n):
        for u in g.adj[v]:
            index[(v, u)] = len(index)
    es = []
    for v in range(g.n):
        a, b, c = (index[(v, u)] for u in g.adj[v])
        es += [(a, b), (b, c), (a, c)]
    matching = sorted((min(index[(u, v)], index[(v, u)]), max(index[(u, v)], index[(v, u)])) for u, v in g.edges())
    return Graph(len(index), es + matching), matching


def generate(family: str, params: list[int]) -> tuple[Graph, GroupAction]:
    """Build a family member and its intended action."""
    def need(lo, hi):
        if not lo <= len(params) <= hi:
            raise TangleForgeError(f"{family} takes {lo}..{hi} integer parameters")

    if family == "hex-tri-torus":
        need(1, 2)
        a, b = params[0], params[-1]
        g, gens = hex_tri_torus(a, b)
    elif family == "tri-gadget-torus":
        need(1, 2)
        g, gens = tri_gadget_torus(params[0], params[-1])
    elif family == "cycle":
        need(1, 1)
        g, gens = cycle_with_action(params[0])
    elif family == "torus-grid":
        need(1, 2)
        g, gens = torus_grid(params[0], params[-1])
    elif family == "cycle-tree":
        need(2, 3)
        g, gens, _ = cycle_tree(*params)
    elif family == "complete":
        need(1, 1)
        n = params[0]
        if n < 1:
            raise TangleForgeError("complete graph needs n >= 1")
        g = complete_graph(n)
        gens = []
        if n >= 2:
            gens = [tuple([1, 0] + list(range(2, n))), tuple((v + 1) % n for v in range(n))]
    elif family == "complete-bipartite":
        need(2, 2)
        a, b = params
        if a < 1 or b < 1:
            raise TangleForgeError("complete bipartite graph needs positive sides")
        g = complete_bipartite(a, b)
        gens = []
        for lo, size in ((0, a), (a, b)):
            if size >= 2:
                gens.append(tuple(lo + (v - lo + 1) % size if lo <= v < lo + size else v for v in range(a + b)))
                gens.append(tuple(lo + 1 if v == lo else lo if v == lo + 1 else v for v in range(a + b)))
        if a == b:
            gens.append(tuple((v + a) % (2 * a) for v in range(2 * a)))
    else:
        raise TangleForgeError(f"unknown family {family!r}")
    return g, GroupAction.of(g, gens)
