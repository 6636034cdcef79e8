"""Tangles of order at most 4.

A tangle of order k orients every separation of order < k.  For a fixed
separator S the members of a tangle with separator S are exactly the
separations whose Z side contains one distinguished component C_S of G - S
(any consistent orientation of the bipartitions of the components of G - S
is of this form, by the three-set axiom applied to separations sharing S).
So a tangle is stored as the map S -> C_S over the separators S that actually
disconnect G; for every other S of size < k the component is V - S.

The three-set axiom is checked in its covering form: it fails for three
members iff the small sides Y u S of the three members together contain
every vertex and every edge inside one of them.  Enlarging a side only helps
to cover, so only the largest side V - C_S of each separator matters, and
every vertex set of size < k is (contained in) a small side.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from itertools import combinations

from .errors import PropertyViolation, ResourceError, TangleForgeError
from .graph import Graph, bits, components, from_mask, lowest, separating_sets, to_graph6, to_mask, to_edge_list
from .separations import Separation, classify_pair, is_degenerate, precedes

DEFAULT_BUDGET = 10_000_000


def host_hash(g: Graph) -> str:
    return hashlib.sha256(f"{g.n}:{to_edge_list(g)}".encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Tangle:
    host: Graph = field(repr=False)
    order: int
    choice: tuple  # sorted tuple of (separator mask, component mask)

    @property
    def choice_map(self) -> dict[int, int]:
        return dict(self.choice)

    def component(self, sep: int) -> int:
        """The component C_S of G - S that the tangle points to."""
        for s, c in self.choice:
            if s == sep:
                return c
        rest = self.host.full & ~sep
        comps = components(self.host, rest)
        if len(comps) != 1:
            raise TangleForgeError("separator outside the tangle's domain")
        return rest

    def contains(self, s: Separation) -> bool:
        if s.order >= self.order:
            raise TangleForgeError("separation order too large for this tangle")
        c = self._lookup().get(s.S)
        if c is None:
            c = self.host.full & ~s.S
        return bool(c) and c & ~s.Z == 0

    def _lookup(self) -> dict[int, int]:
        cache = self.__dict__.get("_cache")
        if cache is None:
            cache = dict(self.choice)
            object.__setattr__(self, "_cache", cache)
        return cache

    def sort_key(self) -> tuple:
        return tuple((from_mask(s), from_mask(c)) for s, c in self.choice)

    def __eq__(self, other) -> bool:
        return isinstance(other, Tangle) and self.order == other.order and self.host == other.host \
            and self.choice == other.choice

    def __hash__(self) -> int:
        return hash((self.order, self.choice))

    def to_json(self) -> dict:
        return {
            "schema": "tangleforge/1",
            "order": self.order,
            "host_hash": host_hash(self.host),
            "minimal": [s.to_json() for s in minimal_separations(self)],
            "choices": [{"S": from_mask(s), "C": from_mask(c)} for s, c in self.choice],
        }

    @classmethod
    def from_json(cls, g: Graph, data: dict) -> "Tangle":
        if data.get("host_hash") not in (None, host_hash(g)):
            raise TangleForgeError("tangle belongs to a different host graph")
        ch = tuple(sorted((to_mask(d["S"]), to_mask(d["C"])) for d in data["choices"]))
        return cls(g, int(data["order"]), ch)


# ---------------------------------------------------------------------------
# covering test


class _Cover:
    """Decides whether a residual (vertices + edges) is covered by a bounded
    number of small sides drawn from a pool of explicit sides and from all
    vertex sets of size <= free."""

    def __init__(self, g: Graph, free: int):
        self.g = g
        self.free = free

    def residual(self, sides: list[int]) -> tuple[int, list[tuple[int, int]]]:
        g = self.g
        covered = 0
        for a in sides:
            covered |= a
        need_v = g.full & ~covered
        # an uncovered edge has an endpoint outside every side
        outs = [g.full & ~a for a in sides]
        base = min(outs, key=int.bit_count) if outs else g.full
        need_e = []
        for u in bits(base):
            for v in g.adj[u]:
                if base >> v & 1 and v < u:
                    continue
                if all(not (a >> u & 1 and a >> v & 1) for a in sides):
                    need_e.append((u, v) if u < v else (v, u))
        return need_v, need_e

    def coverable(self, need_v: int, need_e: list, pool: list[int], budget: int) -> bool:
        if not need_v and not need_e:
            return True
        if budget == 0:
            return False
        struct = need_v
        for u, v in need_e:
            struct |= 1 << u | 1 << v
        if budget == 1:
            return struct.bit_count() <= self.free or any(struct & ~a == 0 for a in pool)
        if budget == 2:
            return self._two_sets(need_v, need_e, struct, pool)
        biggest = self.free
        for a in pool:
            if a & struct:
                biggest = max(biggest, (a & struct).bit_count())
        if struct.bit_count() > budget * biggest:
            return False
        if need_v:
            x = lowest(need_v)
            item = 1 << x
        else:
            u, v = need_e[0]
            item = 1 << u | 1 << v
        for a in pool:
            if a & item == item:
                if self.coverable(need_v & ~a, [e for e in need_e if not (a >> e[0] & 1 and a >> e[1] & 1)],
                                  pool, budget - 1):
                    return True
        others = from_mask(struct & ~item)
        room = self.free - item.bit_count()
        if room < 0:
            return False
        size = min(room, len(others))
        for extra in combinations(others, size):
            f = item | to_mask(extra)
            if self.coverable(need_v & ~f, [e for e in need_e if not (f >> e[0] & 1 and f >> e[1] & 1)],
                              pool, budget - 1):
                return True
        return False

    def _two_sets(self, need_v: int, need_e: list, struct: int, pool: list[int]) -> bool:
        # one set is a pool side a: the other must hold what a misses
        for a in pool:
            req = need_v & ~a
            for u, v in need_e:
                if not (a >> u & 1 and a >> v & 1):
                    req |= 1 << u | 1 << v
            if req.bit_count() <= self.free or any(req & ~b == 0 for b in pool):
                return True
        # both sets free
        if struct.bit_count() > 2 * self.free:
            return False
        if struct.bit_count() <= self.free:
            return True
        first = lowest(struct)
        others = from_mask(struct & ~(1 << first))
        for extra in combinations(others, self.free - 1):
            f = 1 << first | to_mask(extra)
            rest = need_v & ~f
            for u, v in need_e:
                if not (f >> u & 1 and f >> v & 1):
                    rest |= 1 << u | 1 << v
            if rest.bit_count() <= self.free:
                return True
        return False

    def sides_cover(self, sides: list[int], pool: list[int], budget: int) -> bool:
        need_v, need_e = self.residual(sides)
        return self.coverable(need_v, need_e, pool, budget)

    def free_triple_covers(self) -> bool:
        """Do three vertex sets of size <= free cover G on their own?"""
        g = self.g
        if g.n > 3 * self.free:
            return False
        return self.coverable(g.full, list(g.edges()), [], 3)


# ---------------------------------------------------------------------------
# enumeration


class _Search:
    def __init__(self, g: Graph, k: int, budget: int):
        self.g = g
        self.k = k
        self.budget = budget
        self.nodes = 0
        self.cover = _Cover(g, k - 1)
        self.seps = [to_mask(s) for s in separating_sets(g, k - 1)] if k >= 2 else []
        self.comps = [components(g, g.full & ~s) for s in self.seps]
        self.results: list[tuple] = []

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceError(f"tangle enumeration exceeded {self.budget} search nodes")

    def initial_domains(self) -> list[list[int]]:
        g = self.g
        doms = []
        for s, comps in zip(self.seps, self.comps):
            keep = []
            for c in comps:
                side = g.full & ~c
                if not self.cover.sides_cover([side], [], 2):
                    keep.append(c)
            doms.append(keep)
        return doms

    def conflicts(self, cand_side: int, new_side: int, pool: list[int], biggest: int) -> bool:
        loose = self.g.full & ~(cand_side | new_side)
        if loose.bit_count() > biggest:
            return False
        return self.cover.sides_cover([cand_side, new_side], pool, 1)

    def run(self):
        if self.g.n < self.k:
            return
        if self.k >= 2 and self.cover.free_triple_covers():
            return
        doms = self.initial_domains()
        if any(not d for d in doms):
            return
        self.search({}, doms)

    def search(self, assigned: dict[int, int], doms: list[list[int]]):
        self.tick()
        g = self.g
        assigned = dict(assigned)
        doms = [list(d) for d in doms]
        queue = [i for i, d in enumerate(doms) if len(d) == 1 and i not in assigned]
        while True:
            while queue:
                i = queue.pop()
                if i in assigned:
                    continue
                if not self.assign(i, doms[i][0], assigned, doms, queue):
                    return
            open_vars = [i for i in range(len(doms)) if i not in assigned]
            if not open_vars:
                break
            i = min(open_vars, key=lambda j: (len(doms[j]), j))
            for c in list(doms[i]):
                sub = [list(d) for d in doms]
                sub[i] = [c]
                self.search(assigned, sub)
            return
        self.finish(assigned)

    def assign(self, i: int, c: int, assigned: dict[int, int], doms: list[list[int]], queue: list[int]) -> bool:
        self.tick()
        g = self.g
        side = g.full & ~c
        pool = [g.full & ~assigned[j] for j in assigned]
        # the new side together with an earlier one and anything else
        if self.cover.sides_cover([side], pool, 2):
            return False
        assigned[i] = c
        pool.append(side)
        biggest = max([self.k - 1] + [a.bit_count() for a in pool])
        for j in range(len(doms)):
            if j in assigned:
                continue
            keep = [c2 for c2 in doms[j] if not self.conflicts(g.full & ~c2, side, pool, biggest)]
            if not keep:
                return False
            if len(keep) != len(doms[j]):
                doms[j] = keep
                if len(keep) == 1:
                    queue.append(j)
        return True

    def finish(self, assigned: dict[int, int]):
        choice = tuple(sorted((self.seps[i], c) for i, c in assigned.items()))
        t = Tangle(self.g, self.k, choice)
        if not satisfies_axioms(t):
            raise PropertyViolation("enumerated orientation fails the tangle axioms", t)
        self.results.append(choice)


def enumerate_tangles(g: Graph, k: int, budget: int = DEFAULT_BUDGET) -> list[Tangle]:
    """All tangles of order k (1 <= k <= 4) of a connected graph."""
    if not 1 <= k <= 4:
        raise TangleForgeError("tangle order must lie in 1..4")
    if g.n == 0:
        return []
    if len(components(g)) > 1:
        raise TangleForgeError("enumerate_tangles expects a connected graph")
    search = _Search(g, k, budget)
    search.run()
    uniq = sorted(set(search.results), key=lambda ch: tuple((from_mask(s), from_mask(c)) for s, c in ch))
    return [Tangle(g, k, ch) for ch in uniq]


def satisfies_axioms(t: Tangle) -> bool:
    """Exact check of the three-set axiom in covering form."""
    g = t.host
    cover = _Cover(g, t.order - 1)
    if any(not c for _, c in t.choice):
        return False
    if g.n < t.order:
        return False
    if t.order >= 2 and cover.free_triple_covers():
        return False
    sides = [g.full & ~c for _, c in t.choice]
    for a in sides:
        if cover.sides_cover([a], sides, 2):
            return False
    return True


def tangle_members(t: Tangle, proper_only: bool = False) -> list[Separation]:
    """Explicit member list (small graphs only)."""
    g = t.host
    out = []
    for k in range(t.order):
        for sset in combinations(range(g.n), k):
            sep = to_mask(sset)
            comps = components(g, g.full & ~sep)
            for choice in range(1 << len(comps)):
                z = 0
                for i, c in enumerate(comps):
                    if choice >> i & 1:
                        z |= c
                s = Separation(g.full & ~sep & ~z, sep, z)
                if proper_only and not s.is_proper:
                    continue
                if t.contains(s):
                    out.append(s)
    return out


def check_axioms_explicit(t: Tangle) -> bool:
    """T1/T2 over the explicit member set, all triples (reduced to
    inclusion-minimal Z sides).  Meant for n <= 12."""
    g = t.host
    members = tangle_members(t)
    universe = 0
    for k in range(t.order):
        for sset in combinations(range(g.n), k):
            universe += 1 << len(components(g, g.full & ~to_mask(sset)))
    if len(members) * 2 != universe:
        return False
    inc = [0] * g.n
    for idx, (u, v) in enumerate(g.edges()):
        inc[u] |= 1 << idx
        inc[v] |= 1 << idx
    zs = sorted({m.Z for m in members}, key=int.bit_count)
    minimal = []
    for z in zs:
        if not any(w & ~z == 0 for w in minimal):
            minimal.append(z)
    ez = []
    for z in minimal:
        e = 0
        for v in bits(z):
            e |= inc[v]
        ez.append(e)
    r = len(minimal)
    for a in range(r):
        for b in range(a, r):
            for c in range(b, r):
                if not (minimal[a] & minimal[b] & minimal[c]) and not (ez[a] & ez[b] & ez[c]):
                    return False
    return True


# ---------------------------------------------------------------------------
# brute-force reference enumeration


def enumerate_tangles_bruteforce(g: Graph, k: int, budget: int = DEFAULT_BUDGET) -> list[frozenset]:
    """Orient every pair {(Y,S,Z), (Z,S,Y)} of order < k by plain
    backtracking, checking the three-set axiom on every new triple.

    Returns each tangle as a frozenset of member separations.  Independent of
    the separator-choice representation used by enumerate_tangles.
    """
    n = g.n
    full = g.full
    inc = [0] * n
    for idx, (u, v) in enumerate(g.edges()):
        inc[u] |= 1 << idx
        inc[v] |= 1 << idx

    def emask(z):
        e = 0
        for v in range(n):
            if z >> v & 1:
                e |= inc[v]
        return e

    pairs = []
    seen = set()
    for size in range(k):
        for sset in combinations(range(n), size):
            sep = 0
            for v in sset:
                sep |= 1 << v
            rest = [v for v in range(n) if not sep >> v & 1]
            for bitsel in range(1 << len(rest)):
                y = 0
                for i, v in enumerate(rest):
                    if bitsel >> i & 1:
                        y |= 1 << v
                z = full & ~sep & ~y
                ok = True
                for v in range(n):
                    if y >> v & 1:
                        for w in g.adj[v]:
                            if z >> w & 1:
                                ok = False
                if not ok:
                    continue
                key = (min(y, z), sep, max(y, z))
                if key in seen:
                    continue
                seen.add(key)
                pairs.append(((y, sep, z), (z, sep, y)))
    # try separations with the emptier Z later
    pairs.sort(key=lambda p: (bin(p[0][1]).count("1"), p[0][1], p[0][0]))
    results = []
    count = [0]

    def ok_triple(z1, e1, z2, e2, z3, e3):
        return bool(z1 & z2 & z3) or bool(e1 & e2 & e3)

    def rec(i, chosen, anti):
        count[0] += 1
        if count[0] > budget:
            raise ResourceError("brute-force tangle search exceeded its budget")
        if i == len(pairs):
            results.append(frozenset(Separation(*m) for m in chosen))
            return
        for member in pairs[i]:
            z = member[2]
            if z == 0:
                continue
            e = emask(z)
            redundant = any(w & ~z == 0 for w, _ in anti)
            if not redundant:
                good = ok_triple(z, e, z, e, z, e)
                cand = anti + [(z, e)]
                for a in range(len(cand)):
                    if not good:
                        break
                    za, ea = cand[a]
                    for b in range(a, len(cand)):
                        zb, eb = cand[b]
                        if not ok_triple(z, e, za, ea, zb, eb):
                            good = False
                            break
                if not good:
                    continue
                new_anti = [(w, f) for w, f in anti if z & ~w != 0] + [(z, e)]
            else:
                new_anti = anti
            rec(i + 1, chosen + [member], new_anti)

    rec(0, [], [])
    return results


def choice_from_members(g: Graph, k: int, members: frozenset) -> tuple:
    """Recover the separator -> component map from an explicit member set."""
    out = []
    for sset in separating_sets(g, k - 1):
        sep = to_mask(sset)
        zs = [m.Z for m in members if m.S == sep]
        small = min(zs, key=int.bit_count)
        out.append((sep, small))
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# derived sets


def minimal_separations(t: Tangle) -> list[Separation]:
    g = t.host
    cands = [Separation(g.full & ~s & ~c, s, c) for s, c in t.choice]
    keys = [(s.S | s.Z, s.S) for s in cands]
    out = []
    for i, (ai, si) in enumerate(keys):
        below = False
        for j, (aj, sj) in enumerate(keys):
            if j == i:
                continue
            if (aj != ai and aj & ~ai == 0) or (aj == ai and sj & ~si == 0):
                below = True
                break
        if not below:
            out.append(cands[i])
    if not out:
        out = [Separation(0, 0, g.full)]
    out.sort(key=Separation.key)
    return out


def nondegenerate_minimal(t: Tangle) -> list[Separation]:
    if t.order != 4:
        raise TangleForgeError("non-degenerate minimal separations need a tangle of order 4")
    return [s for s in minimal_separations(t) if not is_degenerate(t.host, s)]


def _require_3_connected(t: Tangle):
    from .graph import is_k_connected
    if t.order != 4:
        raise TangleForgeError("expected a tangle of order 4")
    if not is_k_connected(t.host, 3):
        raise TangleForgeError("host graph must be 3-connected")


def core_X(t: Tangle, check: bool = True) -> list[int]:
    if check:
        _require_3_connected(t)
    x = t.host.full
    for s in nondegenerate_minimal(t):
        x &= s.Z | s.S
    return from_mask(x)


def region_R(t: Tangle, check: bool = True) -> list[int]:
    if check:
        _require_3_connected(t)
    nd = nondegenerate_minimal(t)
    inter = t.host.full
    union = 0
    for s in nd:
        union |= s.S
        inter &= s.Z
    return from_mask(union | inter)


def crossedges(t: Tangle, check: bool = True) -> list[tuple[int, int]]:
    """Crossedges among pairs of non-degenerate minimal separations; raises
    if they fail to form a matching."""
    if check:
        _require_3_connected(t)
    nd = nondegenerate_minimal(t)
    found = set()
    for a, b in combinations(nd, 2):
        kind, edge = classify_pair(a, b, t.host)
        if kind == "crossing":
            found.add((min(edge), max(edge)))
    out = sorted(found)
    used = set()
    for u, v in out:
        if u in used or v in used:
            raise PropertyViolation("crossedges do not form a matching", out)
        used.update((u, v))
    return out


def fence(t: Tangle, s: Separation, edges: list[tuple[int, int]] | None = None) -> list[int]:
    if s not in nondegenerate_minimal(t):
        raise TangleForgeError("fence is defined for non-degenerate minimal separations only")
    if edges is None:
        edges = crossedges(t, check=False)
    partner = {}
    for u, v in edges:
        partner[u] = v
        partner[v] = u
    out = set()
    for x in bits(s.S):
        out.add(partner.get(x, x))
    return sorted(out)


# ---------------------------------------------------------------------------
# lifting and distinguishing


def project_along_model(g: Graph, branch_sets: dict[int, frozenset] | list, s: Separation, pattern_n: int) -> Separation:
    y = sep = z = 0
    items = branch_sets.items() if isinstance(branch_sets, dict) else enumerate(branch_sets)
    for v, bset in items:
        m = to_mask(bset)
        if m & s.S:
            sep |= 1 << v
        elif m & ~s.Y == 0:
            y |= 1 << v
        elif m & ~s.Z == 0:
            z |= 1 << v
        else:
            raise TangleForgeError("branch set meets both sides of a separation")
    return Separation(y, sep, z)


def lift_tangle(model, t_h: Tangle) -> Tangle:
    """Lifting of a pattern tangle to the host along a minor model."""
    from .minors import validate_model
    validate_model(model)
    g = model.host
    k = t_h.order
    choice = []
    for sset in separating_sets(g, k - 1):
        sep = to_mask(sset)
        hits = []
        for c in components(g, g.full & ~sep):
            s = Separation(g.full & ~sep & ~c, sep, c)
            if t_h.contains(project_along_model(g, model.branch_sets, s, model.pattern.n)):
                hits.append(c)
        if len(hits) != 1:
            raise PropertyViolation("lifted orientation is not determined by a single component", sset)
        choice.append((sep, hits[0]))
    lifted = Tangle(g, k, tuple(sorted(choice)))
    if not satisfies_axioms(lifted):
        raise PropertyViolation("lifted tangle fails the axioms")
    return lifted


def distinguishes(s: Separation, t1: Tangle, t2: Tangle) -> bool:
    return t1.contains(s) and t2.contains(s.flip())


def distinguishing_order(t1: Tangle, t2: Tangle) -> int | None:
    """Least order of a separation distinguishing the two tangles."""
    a, b = t1.choice_map, t2.choice_map
    best = None
    for sep in set(a) | set(b):
        if a.get(sep) != b.get(sep):
            o = sep.bit_count()
            best = o if best is None else min(best, o)
    return best


def efficiently_distinguishes(s: Separation, t1: Tangle, t2: Tangle) -> bool:
    return distinguishes(s, t1, t2) and distinguishing_order(t1, t2) == s.order
