"""Minor models and a backtracking search for them."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .errors import ResourceError, TangleForgeError
from .graph import Graph, bits, components, is_connected, to_mask

MAX_PATTERN = 8


@dataclass(frozen=True)
class MinorModel:
    """Branch sets of a pattern graph inside a host.

    ``roots[v]``, when given, names the host vertex that pattern vertex v
    stands for; the model is faithful if every root lies in its own branch set.
    """

    host: Graph
    pattern: Graph
    branch_sets: tuple  # tuple of frozensets, indexed by pattern vertex
    roots: tuple | None = None

    @property
    def faithful(self) -> bool:
        if self.roots is None:
            return False
        return all(r in b for r, b in zip(self.roots, self.branch_sets))

    def to_json(self) -> dict:
        out = {"branch_sets": [sorted(b) for b in self.branch_sets]}
        if self.roots is not None:
            out["roots"] = list(self.roots)
        return out


def model_errors(model: MinorModel) -> list[str]:
    g, h = model.host, model.pattern
    errs = []
    if len(model.branch_sets) != h.n:
        return ["wrong number of branch sets"]
    seen = 0
    masks = []
    for v, b in enumerate(model.branch_sets):
        m = to_mask(b)
        if not m:
            errs.append(f"branch set {v} is empty")
        if m & seen:
            errs.append(f"branch set {v} overlaps an earlier one")
        if m >> g.n:
            errs.append(f"branch set {v} leaves the host")
        seen |= m
        masks.append(m)
        if m and len(components(g, m)) != 1:
            errs.append(f"branch set {v} is not connected")
    for u, v in h.edges():
        if not (g.neighborhood(masks[u]) & masks[v]):
            errs.append(f"pattern edge {u}-{v} is not realised")
    return errs


def validate_model(model: MinorModel) -> None:
    errs = model_errors(model)
    if errs:
        raise TangleForgeError("invalid minor model: " + "; ".join(errs))


def _twin_classes(h: Graph) -> list[int]:
    """cls[v] = smallest u with N(u) - v == N(v) - u (interchangeable vertices)."""
    cls = list(range(h.n))
    for v in range(h.n):
        for u in range(v):
            if h.nbr[u] & ~(1 << v) == h.nbr[v] & ~(1 << u):
                cls[v] = cls[u]
                break
    return cls


def _suppress_low_degree(g: Graph) -> tuple[Graph, list]:
    """Delete vertices of degree <= 1 and suppress vertices of degree 2.

    Neither step changes which patterns of minimum degree >= 3 occur as
    minors.  Returns the reduced graph on a subset of the original names
    together with a trail used to map a model back.
    """
    adj = {v: set(g.adj[v]) for v in range(g.n)}
    trail = []
    queue = [v for v in adj if len(adj[v]) <= 2]
    while queue:
        v = queue.pop()
        if v not in adj or len(adj[v]) > 2:
            continue
        nb = sorted(adj.pop(v))
        for w in nb:
            adj[w].discard(v)
        anchor = None
        if len(nb) == 2:
            a, b = nb
            if b not in adj[a]:
                adj[a].add(b)
                adj[b].add(a)
                anchor = (a, b)
        trail.append((v, anchor))
        queue.extend(nb)
    keep = sorted(adj)
    pos = {v: i for i, v in enumerate(keep)}
    reduced = Graph(len(keep), [(pos[u], pos[w]) for u in keep for w in adj[u] if u < w])
    return reduced, (keep, trail)


def _lift_reduced(g, h, reduced, trail, budget, max_pattern):
    keep, steps = trail
    found = find_minor_model(reduced, h, budget=budget, max_pattern=max_pattern)
    if found is None:
        return None
    owner = {}
    for p, b in enumerate(found.branch_sets):
        for v in b:
            owner[keep[v]] = p
    for v, anchor in reversed(steps):
        if anchor is None:
            continue
        a, b = anchor
        if a in owner:
            owner[v] = owner[a]
        elif b in owner:
            owner[v] = owner[b]
    sets = [set() for _ in range(h.n)]
    for v, p in owner.items():
        sets[p].add(v)
    model = MinorModel(g, h, tuple(frozenset(x) for x in sets), None)
    validate_model(model)
    return model


def find_minor_model(g: Graph, h: Graph, faithful: bool = False, root_map: Mapping[int, int] | None = None,
                     budget: int = 2_000_000, max_pattern: int = MAX_PATTERN) -> MinorModel | None:
    """Search for a model of ``h`` in ``g``.

    ``root_map`` pins pattern vertices to host vertices inside their branch
    sets.  With ``faithful=True`` and no root map, pattern vertex v is pinned
    to host vertex v.  Returns None when no model exists; raises
    ResourceError when the node budget runs out.
    """
    if h.n > g.n:
        return None
    roots = dict(root_map or {})
    if faithful and not roots:
        roots = {v: v for v in range(h.n)}
    if faithful and len(roots) < h.n:
        raise TangleForgeError("faithful search needs a root for every pattern vertex")
    if h.n > max_pattern and len(roots) < h.n:
        raise ResourceError(f"pattern has {h.n} vertices; the search is capped at {max_pattern}")
    if len(set(roots.values())) != len(roots):
        return None
    if h.n == 0:
        return MinorModel(g, h, (), None)

    if not roots and min(h.degree(v) for v in range(h.n)) >= 3:
        reduced, trail = _suppress_low_degree(g)
        if reduced.n < g.n:
            return _lift_reduced(g, h, reduced, trail, budget, max_pattern)
    if len(components(h, h.full)) == 1 and not is_connected(g):
        # a connected pattern lives inside one component of the host
        for comp in components(g, g.full):
            members = set(bits(comp))
            if any(v not in members for v in roots.values()):
                continue
            sub, keep = g.induced(bits(comp))
            back = {v: i for i, v in enumerate(keep)}
            found = find_minor_model(sub, h, False, {p: back[v] for p, v in roots.items()}, budget, max_pattern)
            if found is not None:
                bsets = tuple(frozenset(keep[v] for v in b) for b in found.branch_sets)
                rootvec = tuple(roots[p] for p in range(h.n)) if len(roots) == h.n else None
                model = MinorModel(g, h, bsets, rootvec)
                validate_model(model)
                return model
        return None
    # In a connected host every leftover vertex can be absorbed by a
    # neighbouring branch set, so for a connected pattern nothing stays unused.
    allow_unused = not (is_connected(g) and len(components(h, h.full)) == 1)

    hn = h.n
    label = [-2] * g.n  # -2 unassigned, -1 unused, else pattern vertex
    bsets = [0] * hn
    for p, v in roots.items():
        label[v] = p
        bsets[p] |= 1 << v
    twins = _twin_classes(h)
    pinned = set(roots)
    hedges = h.edges()

    # maximum-cardinality order: each next vertex has the most placed neighbours
    start = sorted(roots.values()) or [max(range(g.n), key=lambda v: (g.degree(v), -v))]
    placed = to_mask(start)
    order = [v for v in start if label[v] == -2]
    weight = [0] * g.n
    for v in start:
        for w in g.adj[v]:
            weight[w] += 1
    while len(order) + len(roots) < g.n:
        best = max((v for v in range(g.n) if not placed >> v & 1), key=lambda v: (weight[v], -v))
        placed |= 1 << best
        if label[best] == -2:
            order.append(best)
        for w in g.adj[best]:
            weight[w] += 1

    nodes = [0]

    def comp_of(seed: int, allowed: int) -> int:
        comp = seed
        frontier = seed
        while frontier:
            grow = 0
            for v in bits(frontier):
                grow |= g.nbr[v]
            frontier = grow & allowed & ~comp
            comp |= frontier
        return comp

    def feasible(unassigned: int) -> bool:
        empties = sum(1 for b in bsets if not b)
        if empties > unassigned.bit_count():
            return False
        reach = []
        for b in bsets:
            if b:
                c = comp_of(b & -b, b | unassigned)
                if b & ~c:
                    return False
                reach.append(c)
            else:
                reach.append(0)
        for u, v in hedges:
            bu, bv = bsets[u], bsets[v]
            if bu and bv:
                if g.neighborhood(bu) & bv:
                    continue
                if not (g.neighborhood(reach[u]) & reach[v]) and not (reach[u] & reach[v]):
                    return False
            elif bu and not reach[u] & unassigned and not g.neighborhood(bu) & unassigned:
                return False
            elif bv and not reach[v] & unassigned and not g.neighborhood(bv) & unassigned:
                return False
        return True

    def complete() -> bool:
        for b in bsets:
            if not b or len(components(g, b)) != 1:
                return False
        for u, v in hedges:
            if not (g.neighborhood(bsets[u]) & bsets[v]):
                return False
        return True

    def rec(i: int, unassigned: int) -> bool:
        nodes[0] += 1
        if nodes[0] > budget:
            raise ResourceError("minor search exceeded its node budget")
        if complete():
            return True
        if i == len(order):
            return False
        if not feasible(unassigned):
            return False
        v = order[i]
        rest = unassigned & ~(1 << v)
        near = [p for p in range(hn) if bsets[p] and g.nbr[v] & bsets[p]]
        far = [p for p in range(hn) if bsets[p] and p not in near]
        fresh = []
        for p in range(hn):
            if bsets[p] or p in pinned:
                continue
            # interchangeable pattern vertices are opened in index order
            if any(twins[q] == twins[p] and q < p and not bsets[q] and q not in pinned for q in range(hn)):
                continue
            fresh.append(p)
        for p in near + fresh + far:
            bsets[p] |= 1 << v
            label[v] = p
            if rec(i + 1, rest):
                return True
            bsets[p] &= ~(1 << v)
        if allow_unused:
            label[v] = -1
            if rec(i + 1, rest):
                return True
        label[v] = -2
        return False

    unassigned = to_mask(order)
    if not rec(0, unassigned):
        return None
    rootvec = tuple(roots[p] for p in range(hn)) if len(roots) == hn else None
    model = MinorModel(g, h, tuple(frozenset(bits(b)) for b in bsets), rootvec)
    validate_model(model)
    return model


def has_minor(g: Graph, h: Graph, **kw) -> bool:
    return find_minor_model(g, h, **kw) is not None
