"""Separations (Y, S, Z) of a graph and the relations between them."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import TangleForgeError
from .graph import Graph, bits, components, from_mask, separating_sets, to_mask


@dataclass(frozen=True, order=False)
class Separation:
    """A separation stored as three vertex bitmasks."""

    Y: int
    S: int
    Z: int

    @classmethod
    def of(cls, Y: Iterable[int], S: Iterable[int], Z: Iterable[int]) -> "Separation":
        return cls(to_mask(Y), to_mask(S), to_mask(Z))

    @property
    def order(self) -> int:
        return self.S.bit_count()

    @property
    def is_proper(self) -> bool:
        return bool(self.Y) and bool(self.Z)

    def flip(self) -> "Separation":
        return Separation(self.Z, self.S, self.Y)

    def sets(self) -> tuple[list[int], list[int], list[int]]:
        return from_mask(self.Y), from_mask(self.S), from_mask(self.Z)

    def key(self) -> tuple:
        """Canonical sort key: sorted S, then sorted Y, then sorted Z."""
        return (from_mask(self.S), from_mask(self.Y), from_mask(self.Z))

    def permute(self, perm: Sequence[int]) -> "Separation":
        def img(mask: int) -> int:
            out = 0
            for v in bits(mask):
                out |= 1 << perm[v]
            return out
        return Separation(img(self.Y), img(self.S), img(self.Z))

    def to_json(self) -> dict:
        y, s, z = self.sets()
        return {"Y": y, "S": s, "Z": z}

    @classmethod
    def from_json(cls, data: dict) -> "Separation":
        return cls.of(data["Y"], data["S"], data["Z"])

    def __repr__(self) -> str:
        y, s, z = self.sets()
        return f"Sep(Y={y}, S={s}, Z={z})"


def validate(g: Graph, s: Separation) -> None:
    if s.Y & s.S or s.Y & s.Z or s.S & s.Z:
        raise TangleForgeError("separation sides are not disjoint")
    if s.Y | s.S | s.Z != g.full:
        raise TangleForgeError("separation does not cover the vertex set")
    if g.neighborhood(s.Y) & s.Z:
        raise TangleForgeError("edge between Y and Z")


def is_valid(g: Graph, s: Separation) -> bool:
    try:
        validate(g, s)
    except TangleForgeError:
        return False
    return True


def _has_full_component(g: Graph, side: int, sep: int) -> bool:
    return any(g.neighborhood(c) == sep for c in components(g, side))


def is_tight(g: Graph, s: Separation) -> bool:
    return _has_full_component(g, s.Y, s.S) and _has_full_component(g, s.Z, s.S)


def is_degenerate(g: Graph, s: Separation) -> bool:
    if s.order != 3 or s.Y.bit_count() != 1:
        return False
    return all(not (g.nbr[v] & s.S) for v in bits(s.S))


def precedes(s1: Separation, s2: Separation) -> bool:
    """s1 <= s2 in the order on separations (comparison of S u Z, then S)."""
    a, b = s1.S | s1.Z, s2.S | s2.Z
    if a == b:
        return s1.S & ~s2.S == 0
    return a & ~b == 0


def compare(s1: Separation, s2: Separation) -> str:
    if s1 == s2:
        return "equal"
    if precedes(s1, s2):
        return "less"
    if precedes(s2, s1):
        return "greater"
    return "incomparable"


def classify_pair(s1: Separation, s2: Separation, g: Graph | None = None):
    """Return ("orthogonal", None), ("crossing", (x1, x2)) or ("neither", None).

    For crossing pairs x1 is the crossedge endpoint in S1 and x2 the one in S2.
    The edge test needs the host graph; without it the crossing pattern is
    reported on vertex sets alone.
    """
    a1, a2 = s1.Y | s1.S, s2.Y | s2.S
    if a1 & a2 & ~(s1.S & s2.S) == 0:
        return ("orthogonal", None)
    if s1.Y & s2.Y == 0 and s1.S & s2.S == 0:
        p, q = s1.S & s2.Y, s2.S & s1.Y
        if p.bit_count() == 1 and q.bit_count() == 1:
            x1, x2 = p.bit_length() - 1, q.bit_length() - 1
            if g is None or g.has_edge(x1, x2):
                return ("crossing", (x1, x2))
    return ("neither", None)


def is_nested(s1: Separation, s2: Separation) -> bool:
    """Nestedness of the underlying unoriented separations: some orientations
    satisfy A1 <= A2 and B1 >= B2 with A = Y u S, B = Z u S."""
    for t1 in (s1, s1.flip()):
        a1, b1 = t1.Y | t1.S, t1.Z | t1.S
        for t2 in (s2, s2.flip()):
            a2, b2 = t2.Y | t2.S, t2.Z | t2.S
            if a1 & ~a2 == 0 and b2 & ~b1 == 0:
                return True
    return False


def separations_at(g: Graph, sep: int) -> list[Separation]:
    """All separations with separator ``sep``, including non-proper ones,
    one per bipartition of the components of G - sep (both orientations)."""
    comps = components(g, g.full & ~sep)
    out = []
    for choice in range(1 << len(comps)):
        y = 0
        for i, c in enumerate(comps):
            if choice >> i & 1:
                y |= c
        out.append(Separation(y, sep, g.full & ~sep & ~y))
    return out


def enumerate_tight_separations(g: Graph, max_order: int) -> list[Separation]:
    """Every proper tight separation of order <= max_order, canonically sorted."""
    if max_order > 3:
        raise TangleForgeError("enumeration supports order <= 3")
    out = []
    for sset in separating_sets(g, max_order):
        sep = to_mask(sset)
        comps = components(g, g.full & ~sep)
        full = [g.neighborhood(c) == sep for c in comps]
        if sum(full) < 2:
            continue
        for choice in range(1, (1 << len(comps)) - 1):
            inside = [i for i in range(len(comps)) if choice >> i & 1]
            outside = [i for i in range(len(comps)) if not choice >> i & 1]
            # tight iff each side owns a component seeing all of S
            if not any(full[i] for i in inside) or not any(full[i] for i in outside):
                continue
            y = 0
            for i in inside:
                y |= comps[i]
            out.append(Separation(y, sep, g.full & ~sep & ~y))
    out.sort(key=Separation.key)
    return out


def all_separations_naive(g: Graph, max_order: int, proper_only: bool = True) -> list[Separation]:
    """Reference enumeration over every assignment of vertices to Y, S, Z."""
    out = []
    n = g.n
    for k in range(max_order + 1):
        for sset in combinations(range(n), k):
            sep = to_mask(sset)
            rest = [v for v in range(n) if not sep >> v & 1]
            for choice in range(1 << len(rest)):
                y = to_mask(v for i, v in enumerate(rest) if choice >> i & 1)
                z = g.full & ~sep & ~y
                if proper_only and (not y or not z):
                    continue
                if g.neighborhood(y) & z:
                    continue
                out.append(Separation(y, sep, z))
    out.sort(key=Separation.key)
    return out
