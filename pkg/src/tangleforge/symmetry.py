"""Automorphism groups, orbits and canonicity checks for small graphs."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

from .errors import PropertyViolation, ResourceError, TangleForgeError
from .graph import Graph, bits
from .separations import Separation

ELEMENT_CAP = 1_000_000


def is_automorphism(g: Graph, perm: Sequence[int]) -> bool:
    if sorted(perm) != list(range(g.n)):
        return False
    for v in range(g.n):
        img = 0
        for w in g.adj[v]:
            img |= 1 << perm[w]
        if img != g.nbr[perm[v]]:
            return False
    return True


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """First p, then q."""
    return tuple(q[x] for x in p)


def parse_cycles(text: str, n: int) -> tuple[int, ...]:
    """Parse cycle notation such as ``(0 1 2)(3 4)`` into a permutation array."""
    perm = list(range(n))
    for chunk in text.replace(")", ")\n").splitlines():
        chunk = chunk.strip()
        if not chunk:
            continue
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise TangleForgeError(f"bad cycle {chunk!r}")
        pts = [int(x) for x in chunk[1:-1].replace(",", " ").split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a] = b
    if sorted(perm) != list(range(n)):
        raise TangleForgeError("cycles do not describe a permutation")
    return tuple(perm)


@dataclass(frozen=True)
class GroupAction:
    host: Graph
    generators: tuple  # tuple of permutation tuples
    order_hint: int | None = None

    def __post_init__(self):
        for p in self.generators:
            if not is_automorphism(self.host, p):
                raise PropertyViolation("generator is not an automorphism", list(p))

    @classmethod
    def of(cls, g: Graph, gens: Iterable[Sequence[int]], order: int | None = None) -> "GroupAction":
        uniq = []
        ident = tuple(range(g.n))
        for p in gens:
            p = tuple(p)
            if p != ident and p not in uniq:
                uniq.append(p)
        return cls(g, tuple(uniq), order)

    @classmethod
    def trivial(cls, g: Graph) -> "GroupAction":
        return cls(g, (), 1)

    def elements(self, cap: int = ELEMENT_CAP) -> list[tuple[int, ...]]:
        ident = tuple(range(self.host.n))
        seen = {ident}
        out = [ident]
        dq = deque([ident])
        while dq:
            p = dq.popleft()
            for s in self.generators:
                q = compose(p, s)
                if q not in seen:
                    if len(seen) >= cap:
                        raise ResourceError(f"group has more than {cap} elements")
                    seen.add(q)
                    out.append(q)
                    dq.append(q)
        return out

    def order(self) -> int:
        if self.order_hint is not None:
            return self.order_hint
        return len(self.elements())

    def to_json(self) -> dict:
        return {"generators": [list(p) for p in self.generators]}

    @classmethod
    def from_json(cls, g: Graph, data: dict) -> "GroupAction":
        gens = []
        for p in data.get("generators", []):
            gens.append(parse_cycles(p, g.n) if isinstance(p, str) else p)
        return cls.of(g, gens)


# ---------------------------------------------------------------------------
# refinement

def _refine(g: Graph, cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement; fragments are ordered by neighbour count,
    so the result is invariant under relabelling."""
    cells = [list(c) for c in cells]
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(cells):
            smask = 0
            for v in cells[i]:
                smask |= 1 << v
            new = []
            for cell in cells:
                if len(cell) == 1:
                    new.append(cell)
                    continue
                groups: dict[int, list[int]] = {}
                for v in cell:
                    groups.setdefault((g.nbr[v] & smask).bit_count(), []).append(v)
                if len(groups) == 1:
                    new.append(cell)
                else:
                    changed = True
                    for key in sorted(groups):
                        new.append(groups[key])
            cells = new
            i += 1
    return cells


def _individualize(cells: list[list[int]], v: int) -> list[list[int]]:
    out = []
    for cell in cells:
        if v in cell:
            out.append([v])
            out.append([w for w in cell if w != v])
        else:
            out.append(cell)
    return out


def _target(cells: list[list[int]]) -> int:
    for i, c in enumerate(cells):
        if len(c) > 1:
            return i
    return -1


def _shape(cells):
    return tuple(len(c) for c in cells)


def automorphisms(g: Graph, budget: int = 1_000_000) -> GroupAction:
    """Generators of Aut(G) by individualisation-refinement along a base.

    At base level i every point of the target cell is tried as the image of
    the i-th base point; points already in the orbit of the stabiliser found
    so far are skipped.  The group order is the product of the basic orbit
    lengths.
    """
    if g.n == 0:
        return GroupAction(g, (), 1)
    nodes = [0]

    def tick():
        nodes[0] += 1
        if nodes[0] > budget:
            raise ResourceError("automorphism search exceeded its node budget")

    # leftmost path
    path = [_refine(g, [list(range(g.n))])]
    base = []
    while _target(path[-1]) >= 0:
        cell = path[-1][_target(path[-1])]
        v = min(cell)
        base.append(v)
        path.append(_refine(g, _individualize(path[-1], v)))
    leaf = [c[0] for c in path[-1]]

    def find(cells, depth):
        """Search below ``cells`` (which must match the shape of path[depth])
        for a leaf giving an automorphism."""
        tick()
        if _shape(cells) != _shape(path[depth]):
            return None
        t = _target(cells)
        if t < 0:
            img = [c[0] for c in cells]
            perm = [0] * g.n
            for a, b in zip(leaf, img):
                perm[a] = b
            return tuple(perm) if is_automorphism(g, perm) else None
        for w in sorted(cells[t]):
            found = find(_refine(g, _individualize(cells, w)), depth + 1)
            if found is not None:
                return found
        return None

    gens: list[tuple[int, ...]] = []
    orbit_sizes = []
    for level in range(len(base) - 1, -1, -1):
        cells = path[level]
        cell = cells[_target(cells)]
        b = base[level]
        level_gens = [p for p in gens if all(p[x] == x for x in base[:level])]
        orbit = _orbit_of(b, level_gens)
        for x in sorted(cell):
            if x in orbit:
                continue
            perm = find(_refine(g, _individualize(cells, x)), level + 1)
            if perm is not None:
                gens.append(perm)
                level_gens.append(perm)
                orbit = _orbit_of(b, level_gens)
        orbit_sizes.append(len(orbit))
    return GroupAction.of(g, gens, prod(orbit_sizes))


def _orbit_of(x: int, gens) -> set[int]:
    orbit = {x}
    dq = deque([x])
    while dq:
        y = dq.popleft()
        for p in gens:
            z = p[y]
            if z not in orbit:
                orbit.add(z)
                dq.append(z)
    return orbit


def automorphisms_bruteforce(g: Graph) -> list[tuple[int, ...]]:
    """Every automorphism, by backtracking over partial maps (n <= 10)."""
    if g.n > 10:
        raise ResourceError("brute-force automorphism search is capped at 10 vertices")
    out = []
    perm = [-1] * g.n
    used = [False] * g.n

    def rec(v):
        if v == g.n:
            out.append(tuple(perm))
            return
        for w in range(g.n):
            if used[w] or g.degree(w) != g.degree(v):
                continue
            if any(g.has_edge(u, v) != g.has_edge(perm[u], w) for u in range(v)):
                continue
            perm[v] = w
            used[w] = True
            rec(v + 1)
            used[w] = False
        perm[v] = -1

    rec(0)
    return out


# ---------------------------------------------------------------------------
# orbits and invariance

def vertex_orbits(action: GroupAction) -> list[list[int]]:
    n = action.host.n
    seen = [False] * n
    out = []
    for v in range(n):
        if not seen[v]:
            orb = sorted(_orbit_of(v, action.generators))
            for w in orb:
                seen[w] = True
            out.append(orb)
    return out


def _image_mask(mask: int, perm) -> int:
    out = 0
    for v in bits(mask):
        out |= 1 << perm[v]
    return out


def separation_orbits(action: GroupAction, seps: Iterable[Separation]) -> list[list[Separation]]:
    """Orbits of the given separations under the action (orbits may leave the
    input list; they are closed under the generators)."""
    out = []
    seen = set()
    for s in seps:
        if s in seen:
            continue
        orb = {s}
        dq = deque([s])
        while dq:
            t = dq.popleft()
            for p in action.generators:
                u = t.permute(p)
                if u not in orb:
                    orb.add(u)
                    dq.append(u)
        seen |= orb
        out.append(sorted(orb, key=Separation.key))
    return out


def invariant_family(action: GroupAction, seps: Iterable[Separation]) -> bool:
    fam = set(seps)
    return all(s.permute(p) in fam for s in fam for p in action.generators)


def invariant_set(action: GroupAction, vertices: Iterable[int]) -> bool:
    xs = set(vertices)
    return all({p[v] for v in xs} == xs for p in action.generators)


def tree_automorphism_for(td, perm) -> dict[int, int] | None:
    """A tree automorphism sigma with bag(sigma(t)) = perm(bag(t)), or None."""
    bags = td.bags
    nodes = list(range(len(bags)))
    by_bag: dict[int, list[int]] = {}
    for t in nodes:
        by_bag.setdefault(bags[t], []).append(t)
    cand = {}
    for t in nodes:
        cand[t] = by_bag.get(_image_mask(bags[t], perm), [])
        if not cand[t]:
            return None
    nbrs = td.tree_adjacency()
    # assign in BFS order so every node after the first has an assigned parent
    order = []
    seen = set()
    for root in nodes:
        if root in seen:
            continue
        seen.add(root)
        dq = deque([root])
        while dq:
            t = dq.popleft()
            order.append(t)
            for u in nbrs[t]:
                if u not in seen:
                    seen.add(u)
                    dq.append(u)
    sigma: dict[int, int] = {}
    used: set[int] = set()

    def rec(i):
        if i == len(order):
            return True
        t = order[i]
        for c in cand[t]:
            if c in used or len(nbrs[c]) != len(nbrs[t]):
                continue
            if any(u in sigma and sigma[u] not in nbrs[c] for u in nbrs[t]):
                continue
            sigma[t] = c
            used.add(c)
            if rec(i + 1):
                return True
            del sigma[t]
            used.discard(c)
        return False

    return dict(sigma) if rec(0) else None


def is_canonical_td(td, action: GroupAction) -> tuple[bool, object]:
    """(True, witnesses) with one tree automorphism per generator, or
    (False, failing generator)."""
    witnesses = []
    for p in action.generators:
        sigma = tree_automorphism_for(td, p)
        if sigma is None:
            return False, list(p)
        witnesses.append(sigma)
    return True, witnesses


def tree_edge_orbits(td, action: GroupAction) -> list[list[tuple[int, int]]]:
    sigmas = []
    for p in action.generators:
        sigma = tree_automorphism_for(td, p)
        if sigma is None:
            raise PropertyViolation("decomposition is not canonical under the action", list(p))
        sigmas.append(sigma)
    edges = [tuple(sorted(e)) for e in td.tree_edges]
    seen = set()
    out = []
    for e in edges:
        if e in seen:
            continue
        orb = {e}
        dq = deque([e])
        while dq:
            a, b = dq.popleft()
            for s in sigmas:
                f = tuple(sorted((s[a], s[b])))
                if f not in orb:
                    orb.add(f)
                    dq.append(f)
        seen |= orb
        out.append(sorted(orb))
    return out


def setwise_stabilizer_orbits(action: GroupAction, vertices: Iterable[int]) -> list[list[int]]:
    """Orbits on ``vertices`` of the setwise stabiliser, by enumerating the group."""
    xs = set(vertices)
    stab = [p for p in action.elements() if {p[v] for v in xs} == xs]
    seen: set[int] = set()
    out = []
    for v in sorted(xs):
        if v in seen:
            continue
        orb = {p[v] for p in stab}
        seen |= orb
        out.append(sorted(orb))
    return out
