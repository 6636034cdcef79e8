"""Tangle-distinguishing decompositions, region stars and the two
decomposition pipelines built on top of the Tutte decomposition."""
from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Sequence

from .errors import PropertyViolation, ResourceError, TangleForgeError
from .graph import (Graph, bits, components, from_mask, is_connected, is_k_connected,
                    is_quasi_4_connected, to_mask)
from .separations import Separation, is_degenerate, is_nested, is_tight
from .symmetry import GroupAction, compose, invariant_family, tree_automorphism_for, vertex_orbits
from .tangles import (Tangle, crossedges, distinguishing_order, efficiently_distinguishes,
                      enumerate_tangles, fence, nondegenerate_minimal, region_R)
from .td import TreeDecomposition, refine_td, require_valid, td_from_nested, torso_class, tutte_decomposition

EXHAUSTIVE_ORBITS = 20


def _norm(s: Separation) -> Separation:
    """Orientation with the smaller side mask first, used as the unoriented key."""
    return s if s.Y <= s.Z else s.flip()


def _degenerate_either(g: Graph, s: Separation) -> bool:
    return is_degenerate(g, s) or is_degenerate(g, s.flip())


def _pairs_distinguished(s: Separation, tangles: Sequence[Tangle]) -> list[tuple[int, int]]:
    out = []
    for i, j in combinations(range(len(tangles)), 2):
        a, b = tangles[i], tangles[j]
        if efficiently_distinguishes(s, a, b) or efficiently_distinguishes(s, b, a):
            out.append((i, j))
    return out


# ---------------------------------------------------------------------------
# distinguishing tangles

def efficient_distinguishers(g: Graph, tangles: Sequence[Tangle]) -> list[Separation]:
    """For every pair of tangles and every separator of least distinguishing
    order on which they disagree: the two "component against the rest"
    separations.  Degenerate ones are discarded."""
    out = set()
    for a, b in combinations(tangles, 2):
        k = distinguishing_order(a, b)
        if k is None:
            continue
        ma, mb = a.choice_map, b.choice_map
        for sep in set(ma) | set(mb):
            if sep.bit_count() != k or ma.get(sep) == mb.get(sep):
                continue
            for c in (ma[sep], mb[sep]):
                s = _norm(Separation(g.full & ~sep & ~c, sep, c))
                if not _degenerate_either(g, s):
                    out.add(s)
    return sorted(out, key=Separation.key)


def _orbits(action: GroupAction, seps: list[Separation]) -> list[list[Separation]]:
    seen: set[Separation] = set()
    out = []
    for s in seps:
        if s in seen:
            continue
        orb = {s}
        dq = deque([s])
        while dq:
            t = dq.popleft()
            for p in action.generators:
                u = _norm(t.permute(p))
                if u not in orb:
                    orb.add(u)
                    dq.append(u)
        seen |= orb
        out.append(sorted(orb, key=Separation.key))
    return out


def _orbit_key(orb: list[Separation]) -> tuple:
    # lower order first, then the smaller small side, then the mask order
    return min((s.order, min(s.Y.bit_count(), s.Z.bit_count()), s.key()) for s in orb)


def _nested_all(xs: list[Separation], ys: list[Separation]) -> bool:
    return all(x == y or is_nested(x, y) for x in xs for y in ys)


def tangle_distinguishing(g: Graph, tangles: Sequence[Tangle], action: GroupAction | None = None,
                          exhaustive_orbits: int = EXHAUSTIVE_ORBITS) -> tuple[TreeDecomposition, dict]:
    """Decomposition whose edge-separations form a nested invariant family of
    efficient distinguishers separating every pair of the given tangles.

    Returns the decomposition and a report with the checked properties and
    a flag saying whether the exhaustive search was needed.
    """
    tangles = list(tangles)
    if len(set(tangles)) != len(tangles):
        raise TangleForgeError("tangles must be pairwise distinct")
    action = action or GroupAction.trivial(g)
    pairs = list(combinations(range(len(tangles)), 2))
    report = {"candidates": 0, "orbits": 0, "fallback": False, "dropped_orbits": 0}
    if len(tangles) < 2:
        td = TreeDecomposition.trivial(g)
        report.update(_distinguishing_checks(td, tangles, action, pairs))
        return td, report
    cands = efficient_distinguishers(g, tangles)
    report["candidates"] = len(cands)
    orbits = []
    for orb in _orbits(action, cands):
        hit = [_pairs_distinguished(s, tangles) for s in orb]
        if all(hit) and all(not _degenerate_either(g, s) for s in orb):
            pset = set()
            for h in hit:
                pset.update(h)
            orbits.append((orb, pset))
        else:
            report["dropped_orbits"] += 1
    orbits.sort(key=lambda o: _orbit_key(o[0]))
    orbits = [o for o in orbits if _nested_all(o[0], o[0])]
    report["orbits"] = len(orbits)

    chosen: list[int] = []
    for i, (orb, _) in enumerate(orbits):
        if all(_nested_all(orb, orbits[j][0]) for j in chosen):
            chosen.append(i)
    covered = set()
    for i in chosen:
        covered |= orbits[i][1]
    if covered != set(pairs):
        if len(orbits) > exhaustive_orbits:
            raise PropertyViolation("greedy nested selection misses a tangle pair and the "
                                    "candidate set is too large for exhaustive search")
        report["fallback"] = True
        chosen = _exhaustive(orbits, set(pairs))
        if chosen is None:
            raise PropertyViolation("no nested invariant family of efficient distinguishers "
                                    "separates every tangle pair")
    fam = [s for i in chosen for s in orbits[i][0]]
    td = td_from_nested(g, fam)
    report.update(_distinguishing_checks(td, tangles, action, pairs))
    if not report["ok"]:
        raise PropertyViolation("distinguishing decomposition fails a post-check", report)
    return td, report


def _exhaustive(orbits, need: set) -> list[int] | None:
    n = len(orbits)
    compat = [[_nested_all(orbits[i][0], orbits[j][0]) for j in range(n)] for i in range(n)]

    def rec(i, chosen, covered):
        if covered >= need:
            return list(chosen)
        if i == n:
            return None
        rest = set()
        for j in range(i, n):
            rest |= orbits[j][1]
        if not need <= covered | rest:
            return None
        if all(compat[i][j] for j in chosen):
            chosen.append(i)
            got = rec(i + 1, chosen, covered | orbits[i][1])
            chosen.pop()
            if got is not None:
                return got
        return rec(i + 1, chosen, covered)

    return rec(0, [], set())


def _distinguishing_checks(td: TreeDecomposition, tangles, action, pairs) -> dict:
    g = td.host
    seps = td.edge_separations()
    keys = [_norm(s) for s in seps]
    hits = [_pairs_distinguished(s, tangles) for s in seps]
    covered = set()
    for h in hits:
        covered.update(h)
    out = {
        "nice": all(hits),
        "distinct": len(set(keys)) == len(keys),
        "nondegenerate": not any(_degenerate_either(g, s) for s in seps),
        "tight": all(is_tight(g, s) for s in seps),
        "invariant": invariant_family(action, keys + [s.flip() for s in keys]),
        "all_pairs": covered == set(pairs),
    }
    out["ok"] = all(out.values())
    return out


def tangle_distinguishing_td(g: Graph, tangles: Sequence[Tangle], action: GroupAction | None = None
                             ) -> TreeDecomposition:
    return tangle_distinguishing(g, tangles, action)[0]


# ---------------------------------------------------------------------------
# region stars

def _star(g: Graph, center: int) -> TreeDecomposition:
    bags = [center]
    for c in components(g, g.full & ~center):
        bags.append(c | g.neighborhood(c))
    return TreeDecomposition.make(g, bags, [(0, i) for i in range(1, len(bags))])


def region_star_td(g: Graph, t: Tangle) -> TreeDecomposition:
    """Star with center R_T and one leaf C + N(C) per component C of G - R_T."""
    r = to_mask(region_R(t))
    td = require_valid(_star(g, r))
    fences = {to_mask(fence(t, s)) for s in nondegenerate_minimal(t)}
    for i in range(1, td.size):
        adh = td.bags[0] & td.bags[i]
        if adh not in fences:
            raise PropertyViolation(f"leaf adhesion {from_mask(adh)} is not a fence", from_mask(adh))
    return td


def reduced_region(t: Tangle) -> list[int]:
    """R_T with the larger endpoint of every crossedge removed."""
    drop = {max(e) for e in crossedges(t)}
    return [v for v in region_R(t) if v not in drop]


# ---------------------------------------------------------------------------
# the non-canonical pipeline

def _cycle_order(h: Graph) -> list[int]:
    order = [0]
    prev, cur = -1, 0
    while len(order) < h.n:
        nxt = min(u for u in h.adj[cur] if u != prev)
        order.append(nxt)
        prev, cur = cur, nxt
    return order


def fan_td(h: Graph) -> TreeDecomposition:
    """Path of triangles {c0, ci, ci+1} triangulating a cycle."""
    c = _cycle_order(h)
    bags = [to_mask((c[0], c[i], c[i + 1])) for i in range(1, h.n - 1)]
    return require_valid(TreeDecomposition.make(h, bags, [(i, i + 1) for i in range(len(bags) - 1)]))


def _small_width_td(h: Graph) -> TreeDecomposition:
    from .treewidth import _min_fill_order, td_from_order, treewidth_exact
    width, order = _min_fill_order({v: h.nbr[v] for v in range(h.n)})
    if width > 3:
        width, order = treewidth_exact(h)
    if width > 3:
        raise PropertyViolation(f"graph without an order-4 tangle has treewidth {width}")
    return td_from_order(h, order)


def _recurse(td: TreeDecomposition, depth: int) -> TreeDecomposition:
    per = {}
    for t in range(td.size):
        h, _ = td.torso(t)
        if h.n >= td.host.n:
            raise PropertyViolation("decomposition step made no progress")
        if h.n > 4:
            per[t] = _grohe(h, depth + 1)
    return refine_td(td, per)


def _grohe_3conn(h: Graph, depth: int) -> TreeDecomposition:
    if h.n <= 4 or is_quasi_4_connected(h):
        return TreeDecomposition.trivial(h)
    ts = enumerate_tangles(h, 4)
    if len(ts) >= 2:
        return _recurse(tangle_distinguishing_td(h, ts), depth)
    if not ts:
        return _small_width_td(h)
    t = ts[0]
    star = region_star_td(h, t)
    keep = from_mask(star.bags[0])
    pos = {v: i for i, v in enumerate(keep)}
    center_torso, _ = star.torso(0)
    inner = _star(center_torso, to_mask(pos[v] for v in reduced_region(t)))
    per = {0: require_valid(inner)} if inner.size > 1 else {}
    for i in range(1, star.size):
        leaf, _ = star.torso(i)
        if leaf.n > 4:
            if leaf.n >= h.n:
                raise PropertyViolation("region star leaf is as large as the graph")
            per[i] = _grohe(leaf, depth + 1)
    out = refine_td(star, per)
    for i in range(out.size):
        tor, _ = out.torso(i)
        if tor.n > 4 and not is_quasi_4_connected(tor):
            if tor.n >= h.n:
                raise PropertyViolation("reduced region torso is not quasi-4-connected")
            return refine_td(out, {i: _grohe(tor, depth + 1)})
    return out


def _grohe(g: Graph, depth: int = 0) -> TreeDecomposition:
    if depth > 4 * max(g.n, 1):
        raise ResourceError("decomposition recursion too deep")
    base = tutte_decomposition(g)
    per = {}
    for t in range(base.size):
        h, _ = base.torso(t)
        if h.n <= 4:
            continue
        kind = torso_class(h)
        if kind == "cycle":
            per[t] = fan_td(h)
        elif kind == "3-connected":
            per[t] = _grohe_3conn(h, depth)
        else:
            raise PropertyViolation(f"Tutte torso of class {kind}")
    return refine_td(base, per)


def grohe_decomposition(g: Graph) -> TreeDecomposition:
    """Decomposition of adhesion at most 3 whose torsos are quasi-4-connected
    or have at most 4 vertices.  Not canonical: one endpoint of every
    crossedge is dropped from its region, the one with the larger index."""
    if g.n == 0 or not is_connected(g):
        raise TangleForgeError("grohe_decomposition expects a connected graph")
    return _grohe(g)


def grohe_errors(g: Graph, td: TreeDecomposition, minor_limit: int = 8) -> list[str]:
    """Postcondition check; torsos with at most ``minor_limit`` vertices are
    certified minors of g by an explicit model."""
    from .minors import find_minor_model
    require_valid(td)
    errs = []
    if td.adhesion > 3:
        errs.append(f"adhesion {td.adhesion}")
    for t in range(td.size):
        h, _ = td.torso(t)
        if h.n > 4 and not is_quasi_4_connected(h):
            errs.append(f"torso {t} is neither small nor quasi-4-connected")
        if h.n <= minor_limit and find_minor_model(g, h) is None:
            errs.append(f"torso {t} is not a minor")
    return errs


# ---------------------------------------------------------------------------
# canonical pipeline

def _transversal(td: TreeDecomposition, action: GroupAction):
    """Bag orbits with, for every bag, a group element carrying its orbit
    representative onto it."""
    index = {b: i for i, b in enumerate(td.bags)}
    if len(index) != td.size:
        raise PropertyViolation("bags are not pairwise distinct")
    ident = tuple(range(td.host.n))
    rep_of = {}
    elem = {}
    reps = []
    for start in range(td.size):
        if start in rep_of:
            continue
        reps.append(start)
        rep_of[start] = start
        elem[start] = ident
        dq = deque([start])
        while dq:
            t = dq.popleft()
            for p in action.generators:
                img = 0
                for v in bits(td.bags[t]):
                    img |= 1 << p[v]
                u = index.get(img)
                if u is None:
                    raise PropertyViolation("action does not map bags to bags", list(p))
                if u not in rep_of:
                    rep_of[u] = start
                    elem[u] = compose(elem[t], p)
                    dq.append(u)
    return reps, rep_of, elem


def _inverse(p: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def stabilizer_action(td: TreeDecomposition, action: GroupAction, t: int, transversal=None) -> GroupAction:
    """Action of the stabiliser of node t on its torso (Schreier generators)."""
    reps, rep_of, elem = transversal or _transversal(td, action)
    r = rep_of[t]
    keep = td.bag(t)
    pos = {v: i for i, v in enumerate(keep)}
    members = [u for u in rep_of if rep_of[u] == r]
    index = {td.bags[u]: u for u in members}
    base = elem[t]
    gens = set()
    for u in members:
        for p in action.generators:
            gp = compose(elem[u], p)
            img = 0
            for v in bits(td.bags[r]):
                img |= 1 << gp[v]
            w = index[img]
            # r -> u -> w, back to r
            s = compose(gp, _inverse(elem[w]))
            # conjugate into the stabiliser of t
            s = compose(compose(_inverse(base), s), base)
            local = tuple(pos[s[v]] for v in keep)
            if local != tuple(range(len(keep))):
                gens.add(local)
    h, _ = td.torso(t)
    return GroupAction.of(h, sorted(gens))


def _transport(sub: TreeDecomposition, keep_r: list[int], keep_t: list[int], gamma, host: Graph
               ) -> TreeDecomposition:
    pos = {v: i for i, v in enumerate(keep_t)}
    bags = []
    for b in sub.bags:
        bags.append(to_mask(pos[gamma[keep_r[i]]] for i in bits(b)))
    return TreeDecomposition.make(host, bags, sub.tree_edges)


def _refine_canonical(td: TreeDecomposition, action: GroupAction, local, depth: int) -> TreeDecomposition:
    """Refine every node by ``local(torso, stabiliser action)``, computed on
    one node per orbit and carried to the others by a group element."""
    trans = _transversal(td, action)
    reps, rep_of, elem = trans
    per = {}
    for r in reps:
        h, keep_r = td.torso(r)
        if h.n >= td.host.n and td.size > 1:
            raise PropertyViolation("decomposition step made no progress")
        sub = local(h, stabilizer_action(td, action, r, trans), depth + 1)
        if sub.size == 1:
            continue
        for t in rep_of:
            if rep_of[t] != r:
                continue
            ht, keep_t = td.torso(t)
            per[t] = sub if t == r else _transport(sub, keep_r, keep_t, elem[t], ht)
    return refine_td(td, per) if per else td


def _structure_3conn(h: Graph, action: GroupAction, depth: int) -> TreeDecomposition:
    if h.n <= 4 or is_quasi_4_connected(h):
        return TreeDecomposition.trivial(h)
    ts = enumerate_tangles(h, 4)
    if len(ts) >= 2:
        td = tangle_distinguishing_td(h, ts, action)
        return _refine_canonical(td, action, _structure, depth)
    if len(ts) == 1:
        star = region_star_td(h, ts[0])
        if star.size == 1:
            return star
        return _refine_canonical(star, action, _structure, depth)
    return TreeDecomposition.trivial(h)


def _structure(g: Graph, action: GroupAction, depth: int = 0) -> TreeDecomposition:
    if depth > 4 * max(g.n, 1):
        raise ResourceError("decomposition recursion too deep")
    base = tutte_decomposition(g)

    def local(h, act, d):
        if is_k_connected(h, 3):
            return _structure_3conn(h, act, d)
        return TreeDecomposition.trivial(h)

    if base.size == 1:
        return local(g, action, depth)
    return _refine_canonical(base, action, local, depth)


def torso_report(h: Graph, tw_limit: int = 25) -> dict:
    from .contraction import contract_matching
    from .planarity import is_planar
    from .treewidth import treewidth_exact
    out = {"n": h.n, "m": h.m, "class": torso_class(h), "quasi_4_connected": is_quasi_4_connected(h),
           "planar": is_planar(h), "crossedges": [], "contracted_quasi_4_connected": None, "treewidth": None}
    if out["class"] == "3-connected" and not out["quasi_4_connected"]:
        ts = enumerate_tangles(h, 4)
        out["tangles"] = len(ts)
        if len(ts) == 1:
            ex = crossedges(ts[0])
            out["crossedges"] = [list(e) for e in ex]
            out["contracted_quasi_4_connected"] = is_quasi_4_connected(contract_matching(h, ex).target)
    if h.n <= tw_limit:
        try:
            out["treewidth"] = treewidth_exact(h)[0]
        except ResourceError:
            out["treewidth"] = None
    return out


def structure_decomposition(g: Graph, action: GroupAction | None = None, tw_bound: int = 25
                            ) -> tuple[TreeDecomposition, dict]:
    """Canonical decomposition under ``action``: the Tutte decomposition,
    refined at 3-connected torsos by tangle distinguishers and region
    stars (both crossedge endpoints kept).  Returns the decomposition and a
    report on every torso."""
    if g.n == 0 or not is_connected(g):
        raise TangleForgeError("structure_decomposition expects a connected graph")
    action = action or GroupAction.trivial(g)
    td = require_valid(_structure(g, action))
    ok, wit = _canonical_check(td, action)
    rep = {"canonical": ok, "torsos": [torso_report(td.torso(t)[0], tw_bound) for t in range(td.size)]}
    seps = td.edge_separations()
    rep["tight"] = all(is_tight(g, s) for s in seps)
    rep["nondegenerate"] = not any(_degenerate_either(g, s) for s in seps)
    rep["adhesion"] = td.adhesion
    if not ok:
        raise PropertyViolation("structure decomposition is not canonical", wit)
    return td, rep


def _canonical_check(td: TreeDecomposition, action: GroupAction):
    for p in action.generators:
        if tree_automorphism_for(td, p) is None:
            return False, list(p)
    return True, None


def orbit_bound_check(td: TreeDecomposition, action: GroupAction) -> list[dict]:
    """Per node: orbits of the node stabiliser on the bag against
    2 * adhesion * (tree-edge orbits) + (vertex orbits)."""
    from .symmetry import tree_edge_orbits
    edge_orbits = len(tree_edge_orbits(td, action)) if td.size > 1 else 0
    host_orbits = len(vertex_orbits(action))
    bound = 2 * td.adhesion * edge_orbits + host_orbits
    trans = _transversal(td, action)
    out = []
    for t in range(td.size):
        act = stabilizer_action(td, action, t, trans)
        count = len(vertex_orbits(act))
        out.append({"node": t, "orbits": count, "bound": bound, "ok": count <= bound})
    return out
