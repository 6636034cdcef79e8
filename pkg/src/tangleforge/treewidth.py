"""Exact treewidth of small graphs by branch and bound over elimination orders."""
from __future__ import annotations

from .errors import ResourceError
from .graph import Graph, bits
from .td import TreeDecomposition, require_valid

MAX_VERTICES = 25


def _eliminate(adj: dict[int, int], v: int) -> dict[int, int]:
    nb = adj[v]
    out = {}
    for u, m in adj.items():
        if u == v:
            continue
        m &= ~(1 << v)
        if nb >> u & 1:
            m |= nb & ~(1 << u)
        out[u] = m
    return out


def _min_fill_order(adj: dict[int, int]) -> tuple[int, list[int]]:
    width = 0
    order = []
    adj = dict(adj)
    while adj:
        def fill(v):
            ns = list(bits(adj[v]))
            missing = 0
            for i, a in enumerate(ns):
                missing += len([b for b in ns[i + 1:] if not adj[a] >> b & 1])
            return (missing, adj[v].bit_count(), v)
        v = min(adj, key=fill)
        width = max(width, adj[v].bit_count())
        order.append(v)
        adj = _eliminate(adj, v)
    return width, order


def _mmd_lower_bound(adj: dict[int, int]) -> int:
    """Minor-min-width: contract a min-degree vertex into its min-degree
    neighbour, recording the largest minimum degree seen."""
    adj = dict(adj)
    best = 0
    while len(adj) > 1:
        v = min(adj, key=lambda x: (adj[x].bit_count(), x))
        d = adj[v].bit_count()
        best = max(best, d)
        if d == 0:
            del adj[v]
            continue
        u = min(bits(adj[v]), key=lambda x: (adj[x].bit_count(), x))
        merged = (adj[u] | adj[v]) & ~(1 << u | 1 << v)
        del adj[v]
        for w in list(adj):
            if adj[w] >> v & 1:
                adj[w] = (adj[w] & ~(1 << v)) | (1 << u if w != u else 0)
        adj[u] = merged
        for w in bits(merged):
            adj[w] |= 1 << u
    return best


def _q(g: Graph, s: int, v: int) -> int:
    """Number of vertices outside s + v reachable from v through s."""
    seen = 1 << v
    frontier = 1 << v
    reach = 0
    while frontier:
        nxt = 0
        for u in bits(frontier):
            nxt |= g.nbr[u]
        nxt &= ~seen
        seen |= nxt
        reach |= nxt & ~s
        frontier = nxt & s
    return reach.bit_count()


def treewidth_exact(g: Graph, budget: int = 3_000_000) -> tuple[int, list[int]]:
    """(treewidth, optimal elimination order) for graphs with at most 25 vertices.

    Dynamic programme over eliminated sets, keeping only sets whose best
    elimination width stays below the current upper bound (min-fill) and
    stopping early once the minor-min-width lower bound is met.
    """
    if g.n > MAX_VERTICES:
        raise ResourceError(f"exact treewidth is capped at {MAX_VERTICES} vertices")
    if g.n == 0:
        return -1, []
    adj0 = {v: g.nbr[v] for v in range(g.n)}
    ub, ub_order = _min_fill_order(adj0)
    lb = _mmd_lower_bound(adj0)
    if lb >= ub:
        return ub, ub_order
    best, best_order = ub, ub_order
    level = {0: (-1, None, None)}  # eliminated set -> (width, previous set, vertex)
    history = [level]
    work = 0
    for size in range(g.n):
        nxt: dict[int, tuple] = {}
        for s, (w, _, _) in level.items():
            if g.n - size - 1 <= w:
                continue
            for v in range(g.n):
                if s >> v & 1:
                    continue
                work += 1
                if work > budget:
                    raise ResourceError("treewidth search exceeded its work budget")
                nw = max(w, _q(g, s, v))
                if nw >= best:
                    continue
                t = s | 1 << v
                if t not in nxt or nw < nxt[t][0]:
                    nxt[t] = (nw, s, v)
        # a state whose remaining vertices fit into one bag finishes the order
        for t, (w, _, _) in nxt.items():
            rest = g.n - t.bit_count()
            width = max(w, rest - 1)
            if width < best:
                best = width
                order = []
                cur, lvl = t, len(history)
                entry = nxt
                while cur:
                    _, prev, v = entry[cur]
                    order.append(v)
                    cur = prev
                    lvl -= 1
                    entry = history[lvl]
                order.reverse()
                best_order = order + [v for v in range(g.n) if not t >> v & 1]
        if best <= lb or not nxt:
            break
        history.append(nxt)
        level = {t: val for t, val in nxt.items() if val[0] < best}
    return best, best_order


def td_from_order(g: Graph, order: list[int]) -> TreeDecomposition:
    """Tree-decomposition from an elimination order, with bags contained in
    a neighbouring bag merged away."""
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: g.nbr[v] for v in range(g.n)}
    bag = {}
    parent = {}
    for v in order:
        nb = adj[v]
        bag[v] = nb | 1 << v
        if nb:
            parent[v] = min(bits(nb), key=lambda u: pos[u])
        adj = _eliminate(adj, v)
    # roots of separate components hang off the last root
    roots = [v for v in order if v not in parent]
    for r in roots[:-1]:
        parent[r] = roots[-1]
    nodes = list(order)
    edges = {(v, parent[v]) for v in parent}
    bags = dict(bag)
    changed = True
    while changed:
        changed = False
        for a, b in sorted(edges):
            if bags[a] & ~bags[b] == 0 or bags[b] & ~bags[a] == 0:
                keep, drop = (b, a) if bags[a] & ~bags[b] == 0 else (a, b)
                edges.discard((a, b))
                edges = {(keep if x == drop else x, keep if y == drop else y) for x, y in edges}
                nodes.remove(drop)
                del bags[drop]
                changed = True
                break
    idx = {v: i for i, v in enumerate(nodes)}
    td = TreeDecomposition.make(g, [bags[v] for v in nodes], [(idx[a], idx[b]) for a, b in edges])
    return require_valid(td)


def treewidth_td(g: Graph) -> tuple[int, TreeDecomposition]:
    tw, order = treewidth_exact(g)
    return tw, td_from_order(g, order)


def treewidth_bruteforce(g: Graph) -> int:
    """Subset dynamic programme (n <= 12), used as an independent check."""
    if g.n > 12:
        raise ResourceError("brute-force treewidth is capped at 12 vertices")
    if g.n == 0:
        return -1
    full = g.full

    tw = {0: -1}
    for s in range(1, full + 1):
        best = None
        for v in bits(s):
            prev = s & ~(1 << v)
            val = max(tw[prev], _q(g, prev, v))
            if best is None or val < best:
                best = val
        tw[s] = best
    return tw[full]

