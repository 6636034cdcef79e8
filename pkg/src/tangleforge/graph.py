"""Simple undirected graphs on vertices 0..n-1 with bitmask adjacency.

Vertex sets are passed around either as iterables of ints or as int
bitmasks (bit v set iff v is in the set).  The helpers at the top convert
between the two.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import ParseError, TangleForgeError


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def from_mask(mask: int) -> list[int]:
    return list(bits(mask))


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class Graph:
    """Immutable simple graph.

    ``adj[v]`` is the sorted tuple of neighbours of ``v`` and ``nbr[v]`` the
    same set as a bitmask.  Optional string labels record provenance (for
    generated families) and are ignored by equality.
    """

    __slots__ = ("n", "adj", "nbr", "labels", "_edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), labels: Sequence[str] | None = None):
        if n < 0:
            raise TangleForgeError("negative vertex count")
        nbr = [0] * n
        for u, v in edges:
            if u == v:
                raise TangleForgeError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise TangleForgeError(f"edge {u}-{v} out of range")
            nbr[u] |= 1 << v
            nbr[v] |= 1 << u
        self.n = n
        self.nbr = tuple(nbr)
        self.adj = tuple(tuple(bits(m)) for m in nbr)
        self.labels = tuple(labels) if labels is not None else None
        self._edges = None

    # basic queries -------------------------------------------------------

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def edges(self) -> list[tuple[int, int]]:
        if self._edges is None:
            self._edges = [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]
        return self._edges

    @property
    def m(self) -> int:
        return len(self.edges())

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.nbr[u] >> v & 1)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighborhood(self, mask: int) -> int:
        """Open neighbourhood N(X) of a vertex mask."""
        out = 0
        for v in bits(mask):
            out |= self.nbr[v]
        return out & ~mask

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.nbr == other.nbr

    def __hash__(self) -> int:
        return hash((self.n, self.nbr))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # derived graphs ------------------------------------------------------

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vertices``; returns the graph and the index map
        (new index -> old vertex)."""
        keep = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(keep)}
        es = [(pos[u], pos[v]) for u, v in self.edges() if u in pos and v in pos]
        labels = [self.labels[v] for v in keep] if self.labels else None
        return Graph(len(keep), es, labels), keep

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex v renamed perm[v]."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        return cls(int(data["n"]), [tuple(e) for e in data["edges"]], data.get("labels"))


# ---------------------------------------------------------------------------
# named small graphs

def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def grid_graph(rows: int, cols: int) -> Graph:
    es = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                es.append((v, v + 1))
            if r + 1 < rows:
                es.append((v, v + cols))
    return Graph(rows * cols, es)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def prism_graph() -> Graph:
    """C3 x K2: triangles 0,1,2 and 3,4,5 joined by the matching i - i+3."""
    return Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])


# ---------------------------------------------------------------------------
# parsing and serialisation

def _g6_bits(data: bytes, start: int, count: int) -> list[int]:
    out = []
    for i, byte in enumerate(data[start:]):
        if not 63 <= byte <= 126:
            raise ParseError("invalid graph6 byte", start + i)
        val = byte - 63
        for k in range(5, -1, -1):
            out.append(val >> k & 1)
    if len(out) < count:
        raise ParseError("graph6 string too short", len(data))
    return out


def parse_graph6(data: bytes | str) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.strip()
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    if not data:
        raise ParseError("empty graph6 input", 0)
    if data[0] == 126:
        raise ParseError("graph6 with n > 62 is not supported", 0)
    n = data[0] - 63
    if not 0 <= n <= 62:
        raise ParseError("invalid graph6 size byte", 0)
    count = n * (n - 1) // 2
    need = (count + 5) // 6
    if len(data) != 1 + need:
        raise ParseError(f"graph6 length mismatch: expected {1 + need} bytes", min(len(data), 1 + need))
    flags = _g6_bits(data, 1, count)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if flags[k]:
                edges.append((i, j))
            k += 1
    if any(flags[count:]):
        raise ParseError("nonzero graph6 padding", len(data) - 1)
    return Graph(n, edges)


def to_graph6(g: Graph) -> str:
    if g.n > 62:
        raise TangleForgeError("graph6 output supports n <= 62")
    flags = [1 if g.has_edge(i, j) else 0 for j in range(1, g.n) for i in range(j)]
    flags += [0] * (-len(flags) % 6)
    chars = [chr(g.n + 63)]
    for k in range(0, len(flags), 6):
        val = 0
        for b in flags[k:k + 6]:
            val = val << 1 | b
        chars.append(chr(val + 63))
    return "".join(chars)


def parse_edge_list(data: bytes | str) -> Graph:
    """Whitespace separated pairs, one edge per line; ``#`` starts a comment.

    Vertex tokens are arbitrary strings and are renumbered in order of first
    appearance.  A line holding a single token declares an isolated vertex.
    """
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data
    index: dict[str, int] = {}
    names: list[str] = []
    edges: set[tuple[int, int]] = set()
    ordered: list[tuple[int, int]] = []
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        toks = body.split()
        if toks:
            if len(toks) > 2:
                raise ParseError("expected at most two tokens per line", offset)
            ids = []
            for t in toks:
                if t not in index:
                    index[t] = len(names)
                    names.append(t)
                ids.append(index[t])
            if len(ids) == 2:
                u, v = ids
                if u == v:
                    raise ParseError(f"loop at vertex {toks[0]}", offset)
                key = (min(u, v), max(u, v))
                if key in edges:
                    raise ParseError(f"parallel edge {toks[0]}-{toks[1]}", offset)
                edges.add(key)
                ordered.append(key)
        offset += len(line.encode("utf-8"))
    return Graph(len(names), ordered, names)


def to_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges())


def load_graph(fmt: str, data: bytes | str) -> Graph:
    if fmt == "graph6":
        return parse_graph6(data)
    if fmt in ("edge-list", "edgelist"):
        return parse_edge_list(data)
    raise TangleForgeError(f"unknown graph format {fmt!r}")


# ---------------------------------------------------------------------------
# connectivity

def components(g: Graph, allowed: int | None = None) -> list[int]:
    """Connected components of G[allowed] as bitmasks, ordered by lowest vertex."""
    if allowed is None:
        allowed = g.full
    out = []
    rest = allowed
    nbr = g.nbr
    while rest:
        comp = rest & -rest
        frontier = comp
        while frontier:
            grow = 0
            for v in bits(frontier):
                grow |= nbr[v]
            frontier = grow & rest & ~comp
            comp |= frontier
        out.append(comp)
        rest &= ~comp
    return out


def is_connected(g: Graph, allowed: int | None = None) -> bool:
    if allowed is None:
        allowed = g.full
    return len(components(g, allowed)) <= 1


def articulation_points(g: Graph, allowed: int | None = None) -> set[int]:
    """Cut vertices of G[allowed] (iterative Tarjan)."""
    if allowed is None:
        allowed = g.full
    disc = {}
    low = {}
    aps: set[int] = set()
    t = 0
    adj = g.adj
    for root in bits(allowed):
        if root in disc:
            continue
        disc[root] = low[root] = t
        t += 1
        children = 0
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if not allowed >> w & 1:
                    continue
                if w not in disc:
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, v, iter(adj[w])))
                    advanced = True
                    break
                if w != parent:
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[v])
                if parent == root:
                    children += 1
                elif low[v] >= disc[parent]:
                    aps.add(parent)
        if children >= 2:
            aps.add(root)
    return aps


def separating_sets(g: Graph, max_size: int) -> list[tuple[int, ...]]:
    """All vertex sets S with |S| <= max_size (max_size <= 3) whose removal
    leaves at least two components, sorted by (|S|, S)."""
    if max_size > 3:
        raise TangleForgeError("separating_sets supports sizes up to 3")
    full = g.full
    found: set[tuple[int, ...]] = set()
    if not is_connected(g):
        # every small set is checked directly; disconnected hosts are rare here
        for k in range(max_size + 1):
            for s in combinations(range(g.n), k):
                if len(components(g, full & ~to_mask(s))) >= 2:
                    found.add(s)
        return sorted(found, key=lambda s: (len(s), s))

    def extend(base: tuple[int, ...]):
        rest = full & ~to_mask(base)
        comps = components(g, rest)
        if len(comps) >= 2:
            singles = {lowest(c) for c in comps if c & (c - 1) == 0}
            for c in bits(rest):
                if len(comps) == 2 and c in singles:
                    continue
                found.add(tuple(sorted(base + (c,))))
        elif len(comps) == 1:
            for c in articulation_points(g, rest):
                found.add(tuple(sorted(base + (c,))))

    if max_size >= 1:
        extend(())
    if max_size >= 2:
        for a in range(g.n):
            extend((a,))
    if max_size >= 3:
        for a, b in combinations(range(g.n), 2):
            extend((a, b))
    return sorted(found, key=lambda s: (len(s), s))


def is_k_connected(g: Graph, k: int) -> bool:
    if k <= 0:
        return True
    if g.n < k + 1:
        return False
    if k <= 4:
        return not separating_sets(g, k - 1)
    for size in range(k):
        for s in combinations(range(g.n), size):
            if not is_connected(g, g.full & ~to_mask(s)):
                return False
    return True


def is_quasi_4_connected(g: Graph) -> bool:
    if not is_k_connected(g, 3):
        return False
    for s in separating_sets(g, 3):
        comps = components(g, g.full & ~to_mask(s))
        if len(comps) != 2 or min(c.bit_count() for c in comps) != 1:
            return False
    return True


def torso(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    """Torso G[[X]]: G[X] plus every pair inside N(C) for a component C of G - X.

    Returns the torso on 0..|X|-1 and the index map (new -> old)."""
    keep = sorted(set(vertices))
    if not keep:
        raise TangleForgeError("torso of an empty vertex set")
    xmask = to_mask(keep)
    pos = {v: i for i, v in enumerate(keep)}
    es = {(pos[u], pos[v]) for u, v in g.edges() if xmask >> u & 1 and xmask >> v & 1}
    for comp in components(g, g.full & ~xmask):
        attach = sorted(pos[v] for v in bits(g.neighborhood(comp)))
        es.update(combinations(attach, 2))
    labels = [g.labels[v] for v in keep] if g.labels else None
    return Graph(len(keep), sorted(es), labels), keep


def torso_edges(g: Graph, xmask: int) -> set[tuple[int, int]]:
    """Edge set of the torso on X in original vertex names."""
    es = {(u, v) for u, v in g.edges() if xmask >> u & 1 and xmask >> v & 1}
    for comp in components(g, g.full & ~xmask):
        attach = sorted(bits(g.neighborhood(comp)))
        es.update(combinations(attach, 2))
    return es
