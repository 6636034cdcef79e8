"""Generating sets of closed walks built from a tree-decomposition, and a
bounded search deciding whether a set of closed walks generates a cycle."""
from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from .errors import TangleForgeError
from .graph import Graph, bits, components, to_mask
from .td import TreeDecomposition, require_valid

Walk = tuple  # closed walk v0 v1 ... v_{k-1}, returning to v0


def _bfs_tree(h: Graph) -> dict[int, int]:
    parent = {}
    for root in range(h.n):
        if root in parent:
            continue
        parent[root] = -1
        dq = deque([root])
        while dq:
            x = dq.popleft()
            for y in h.adj[x]:
                if y not in parent:
                    parent[y] = x
                    dq.append(y)
    return parent


def _tree_path(parent: dict[int, int], a: int, b: int) -> list[int]:
    """Path a -> b in a rooted tree."""
    up_a = [a]
    while parent[up_a[-1]] != -1:
        up_a.append(parent[up_a[-1]])
    depth = {v: i for i, v in enumerate(up_a)}
    up_b = [b]
    while up_b[-1] not in depth:
        up_b.append(parent[up_b[-1]])
    meet = up_b[-1]
    return up_a[:depth[meet] + 1] + up_b[-2::-1]


def fundamental_cycles(h: Graph) -> list[list[int]]:
    parent = _bfs_tree(h)
    out = []
    for u, v in h.edges():
        if parent.get(u) == v or parent.get(v) == u:
            continue
        out.append(_tree_path(parent, v, u))
    return out


def _virtual_path(g: Graph, bag: int, x: int, y: int) -> list[int]:
    """Shortest x-y path whose interior lies in the least component of
    G - bag that attaches to both x and y."""
    for comp in components(g, g.full & ~bag):
        nb = g.neighborhood(comp)
        if nb >> x & 1 and nb >> y & 1:
            allowed = comp | 1 << y
            prev = {x: -1}
            dq = deque([x])
            while dq:
                a = dq.popleft()
                if a == y:
                    break
                for b in g.adj[a]:
                    if b not in prev and allowed >> b & 1:
                        prev[b] = a
                        dq.append(b)
            path = [y]
            while path[-1] != x:
                path.append(prev[path[-1]])
            return path[::-1]
    raise TangleForgeError(f"torso edge {x}-{y} has no realising component")


def closed_walk_generators(g: Graph, td: TreeDecomposition) -> list[Walk]:
    """Fundamental cycles of every torso, with each torso edge missing from G
    replaced by a path through a component outside the bag."""
    require_valid(td)
    out = []
    seen = set()
    for t in range(td.size):
        h, keep = td.torso(t)
        bag = to_mask(keep)
        for cyc in fundamental_cycles(h):
            walk = []
            for i, a in enumerate(cyc):
                x, y = keep[a], keep[cyc[(i + 1) % len(cyc)]]
                if g.has_edge(x, y):
                    walk.append(x)
                else:
                    walk.extend(_virtual_path(g, bag, x, y)[:-1])
            w = reduce_walk(walk)
            if w and canonical_walk(w) not in seen:
                seen.add(canonical_walk(w))
                out.append(w)
    return out


# ---------------------------------------------------------------------------
# closure oracle

def reduce_walk(walk: Sequence[int]) -> Walk:
    """Cyclically reduced form: spurs x y x and repetitions x x removed."""
    st: list[int] = []
    for v in walk:
        if st and st[-1] == v:
            continue
        if len(st) >= 2 and st[-2] == v:
            st.pop()
            continue
        st.append(v)
    # cyclic reduction
    while len(st) >= 2 and st[0] == st[-1]:
        st.pop()
    while len(st) >= 3 and st[1] == st[-1]:
        st = st[1:-1]
        while len(st) >= 2 and st[0] == st[-1]:
            st.pop()
    if len(st) <= 2:
        return ()
    return tuple(st)


def canonical_walk(w: Walk) -> Walk:
    if not w:
        return w
    forms = []
    for seq in (w, w[::-1]):
        for i in range(len(seq)):
            forms.append(seq[i:] + seq[:i])
    return min(forms)


def is_closed_walk(g: Graph, w: Walk) -> bool:
    return all(g.has_edge(w[i], w[(i + 1) % len(w)]) for i in range(len(w)))


def _rotations_at(gens: list[Walk]) -> dict[int, list[Walk]]:
    """Every rotation and reflection of every generator, keyed by its start."""
    at: dict[int, set] = {}
    for w in gens:
        for seq in (w, w[::-1]):
            for i in range(len(seq)):
                r = seq[i:] + seq[:i]
                at.setdefault(r[0], set()).add(r)
    return {v: sorted(s) for v, s in at.items()}


def generates(g: Graph, gens: Iterable[Walk], target: Walk, max_len: int | None = None,
              max_states: int = 200_000) -> bool | None:
    """Whether target reduces to the trivial walk by inserting rotations and
    reflections of generators and removing spurs.  Words longer than
    max_len (default 2|E|) are not explored; None means inconclusive."""
    if max_len is None:
        max_len = 2 * g.m
    gens = [reduce_walk(w) for w in gens]
    gens = [w for w in gens if w]
    at = _rotations_at(gens)
    start = reduce_walk(target)
    if not start:
        return True
    seen = {canonical_walk(start)}
    dq = deque([start])
    pruned = False
    while dq:
        w = dq.popleft()
        for i, x in enumerate(w):
            for r in at.get(x, ()):
                nxt = reduce_walk(w[:i + 1] + r[1:] + (x,) + w[i + 1:])
                if not nxt:
                    return True
                if len(nxt) > max_len:
                    pruned = True
                    continue
                key = canonical_walk(nxt)
                if key in seen:
                    continue
                if len(seen) >= max_states:
                    return None
                seen.add(key)
                dq.append(nxt)
    return None if pruned else False


def generates_all(g: Graph, gens: Iterable[Walk], max_len: int | None = None,
                  max_states: int = 200_000) -> bool | None:
    """Check every fundamental cycle of g; these generate every closed walk."""
    gens = list(gens)
    verdict: bool | None = True
    for cyc in fundamental_cycles(g):
        r = generates(g, gens, tuple(cyc), max_len, max_states)
        if r is False:
            return False
        if r is None:
            verdict = None
    return verdict


def theta_graph(a: int, b: int, c: int) -> Graph:
    """Two vertices 0 and 1 joined by three internally disjoint paths with
    a, b and c interior vertices (at most one of them empty)."""
    if sorted((a, b, c))[:2].count(0) > 1 or min(a, b, c) < 0:
        raise TangleForgeError("at most one path may be a direct edge")
    es = []
    nxt = 2
    for k in (a, b, c):
        prev = 0
        for _ in range(k):
            es.append((prev, nxt))
            prev = nxt
            nxt += 1
        es.append((prev, 1))
    return Graph(nxt, es)
