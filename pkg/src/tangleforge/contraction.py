"""Contraction of matchings, projections and induced tangles."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PropertyViolation, TangleForgeError
from .graph import Graph, bits, components, separating_sets, to_mask
from .separations import Separation, validate
from .tangles import Tangle, crossedges, enumerate_tangles


@dataclass(frozen=True)
class ContractionMap:
    source: Graph
    matching: tuple  # sorted tuple of sorted edge pairs
    target: Graph
    forward: tuple  # source vertex -> target vertex
    backward: tuple  # target vertex -> tuple of source vertices

    def merged(self, u: int, v: int) -> int:
        return self.forward[u]

    def to_json(self) -> dict:
        return {"matching": [list(e) for e in self.matching], "forward": list(self.forward)}


def _check_matching(g: Graph, edges: Iterable[Sequence[int]]) -> tuple:
    out = []
    used = set()
    for e in edges:
        u, v = sorted(e)
        if not g.has_edge(u, v):
            raise TangleForgeError(f"{u}-{v} is not an edge")
        if u in used or v in used:
            raise TangleForgeError("edge set is not a matching")
        used.update((u, v))
        out.append((u, v))
    return tuple(sorted(out))


def contract_matching(g: Graph, edges: Iterable[Sequence[int]]) -> ContractionMap:
    """Contract every edge of a matching.

    The merged vertex of uv inherits the name min(u, v); the surviving names
    are then renumbered in increasing order, so contracting in several
    rounds gives the same result as contracting at once.
    """
    L = _check_matching(g, edges)
    rep = list(range(g.n))
    for u, v in L:
        rep[v] = u
    names = sorted(set(rep))
    pos = {x: i for i, x in enumerate(names)}
    forward = tuple(pos[rep[v]] for v in range(g.n))
    back: list[list[int]] = [[] for _ in names]
    for v in range(g.n):
        back[forward[v]].append(v)
    es = set()
    for u, v in g.edges():
        a, b = forward[u], forward[v]
        if a != b:
            es.add((min(a, b), max(a, b)))
    labels = None
    if g.labels:
        labels = ["+".join(g.labels[v] for v in grp) for grp in back]
    target = Graph(len(names), sorted(es), labels)
    return ContractionMap(g, L, target, forward, tuple(tuple(b) for b in back))


def compose_maps(first: ContractionMap, second: ContractionMap) -> ContractionMap:
    """The map of contracting ``first.matching`` and then ``second.matching``."""
    if second.source != first.target:
        raise TangleForgeError("maps do not compose")
    L = list(first.matching)
    for a, b in second.matching:
        # an edge of the target lifts to some source edge between the classes
        pairs = [(u, v) for u in first.backward[a] for v in first.backward[b] if first.source.has_edge(u, v)]
        L.append(pairs[0])
    forward = tuple(second.forward[first.forward[v]] for v in range(first.source.n))
    back: list[list[int]] = [[] for _ in range(second.target.n)]
    for v, t in enumerate(forward):
        back[t].append(v)
    return ContractionMap(first.source, tuple(sorted(tuple(sorted(e)) for e in L)), second.target, forward,
                          tuple(tuple(b) for b in back))


def image_edge(cm: ContractionMap, e: Sequence[int]) -> tuple[int, int]:
    a, b = cm.forward[e[0]], cm.forward[e[1]]
    return (min(a, b), max(a, b))


def project_set(cm: ContractionMap, xs: Iterable[int]) -> list[int]:
    return sorted({cm.forward[v] for v in xs})


def expand_set(cm: ContractionMap, xs: Iterable[int]) -> list[int]:
    out = []
    for t in xs:
        out.extend(cm.backward[t])
    return sorted(out)


def _project_mask(cm: ContractionMap, mask: int) -> int:
    out = 0
    for v in bits(mask):
        out |= 1 << cm.forward[v]
    return out


def project_separation(cm: ContractionMap, s: Separation) -> Separation:
    """Image of a separation: a merged vertex touching S goes to the separator."""
    sep = _project_mask(cm, s.S)
    y = _project_mask(cm, s.Y) & ~sep
    z = _project_mask(cm, s.Z) & ~sep
    out = Separation(y, sep, z)
    validate(cm.target, out)
    return out


def _member_reps(t: Tangle) -> list[Separation]:
    g = t.host
    return [Separation(g.full & ~s & ~c, s, c) for s, c in t.choice]


def induced_tangle(g: Graph, t: Tangle, L: Iterable[Sequence[int]], cm: ContractionMap | None = None,
                   check_crossedges: bool = True) -> tuple[ContractionMap, Tangle]:
    """The tangle of the contracted graph containing the projection of t.

    Computed by enumerating the order-4 tangles of the target and keeping
    the ones that contain the projection of every member of t; exactly one
    must survive.
    """
    L = list(L)
    if check_crossedges:
        ex = set(crossedges(t))
        for e in L:
            if tuple(sorted(e)) not in ex:
                raise TangleForgeError(f"{tuple(e)} is not a crossedge of the tangle")
    if cm is None:
        cm = contract_matching(g, L)
    if not L:
        return cm, Tangle(cm.target, t.order, t.choice)
    projected = [project_separation(cm, s) for s in _member_reps(t)]
    hits = [t2 for t2 in enumerate_tangles(cm.target, t.order) if all(t2.contains(p) for p in projected)]
    if len(hits) != 1:
        raise PropertyViolation(f"{len(hits)} target tangles contain the projected tangle")
    return cm, hits[0]


def surviving_projections(cm: ContractionMap, seps: Iterable[Separation]) -> list[Separation]:
    """Projections whose separator still separates the target graph; the
    trivial separation stands in when none does."""
    tg = cm.target
    separators = {to_mask(s) for s in separating_sets(tg, 3)}
    out = set()
    for s in seps:
        p = project_separation(cm, s)
        if p.S in separators and p.Y and p.Z:
            out.add(p)
    if not out:
        out = {Separation(0, 0, tg.full)}
    return sorted(out, key=Separation.key)


def is_matching(edges: Iterable[Sequence[int]]) -> bool:
    seen = set()
    for u, v in edges:
        if u in seen or v in seen:
            return False
        seen.update((u, v))
    return True

