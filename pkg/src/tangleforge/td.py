"""Tree-decompositions: the type, validation, and the generic constructions
(nested separations to a tree, refinement, block-cut tree, Tutte)."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PropertyViolation, TangleForgeError
from .graph import (Graph, articulation_points, bits, components, from_mask, is_connected, separating_sets,
                    to_mask, torso)
from .separations import Separation, is_degenerate, is_tight


@dataclass(frozen=True)
class TreeDecomposition:
    host: Graph
    bags: tuple  # bag masks, indexed by node
    tree_edges: tuple  # pairs of node indices

    @classmethod
    def make(cls, g: Graph, bags: Iterable, edges: Iterable[Sequence[int]]) -> "TreeDecomposition":
        bs = tuple(b if isinstance(b, int) else to_mask(b) for b in bags)
        es = tuple(sorted(tuple(sorted(e)) for e in edges))
        return cls(g, bs, es)

    @classmethod
    def trivial(cls, g: Graph) -> "TreeDecomposition":
        return cls(g, (g.full,), ())

    @property
    def size(self) -> int:
        return len(self.bags)

    def bag(self, t: int) -> list[int]:
        return from_mask(self.bags[t])

    def tree_adjacency(self) -> list[set[int]]:
        nb = [set() for _ in self.bags]
        for a, b in self.tree_edges:
            nb[a].add(b)
            nb[b].add(a)
        return nb

    def adhesion_sets(self) -> list[int]:
        return [self.bags[a] & self.bags[b] for a, b in self.tree_edges]

    @property
    def adhesion(self) -> int:
        return max((s.bit_count() for s in self.adhesion_sets()), default=0)

    @property
    def width(self) -> int:
        return max((b.bit_count() for b in self.bags), default=0) - 1

    def side_of(self, a: int, b: int) -> int:
        """Nodes on a's side of the tree edge ab, as a mask over nodes."""
        nb = self.tree_adjacency()
        seen = {a}
        dq = deque([a])
        while dq:
            t = dq.popleft()
            for u in nb[t]:
                if u not in seen and not (t == a and u == b):
                    seen.add(u)
                    dq.append(u)
        return to_mask(seen)

    def edge_separation(self, a: int, b: int) -> Separation:
        """(Y, S, Z) with Y u S the union of bags on a's side."""
        side = self.side_of(a, b)
        left = right = 0
        for t, bag in enumerate(self.bags):
            if side >> t & 1:
                left |= bag
            else:
                right |= bag
        sep = left & right
        return Separation(left & ~sep, sep, right & ~sep)

    def edge_separations(self) -> list[Separation]:
        return [self.edge_separation(a, b) for a, b in self.tree_edges]

    def torso(self, t: int) -> tuple[Graph, list[int]]:
        return torso(self.host, self.bag(t))

    def to_json(self) -> dict:
        return {
            "nodes": [{"id": t, "bag": self.bag(t)} for t in range(self.size)],
            "tree_edges": [list(e) for e in self.tree_edges],
            "adhesion": self.adhesion,
            "width": self.width,
        }

    @classmethod
    def from_json(cls, g: Graph, data: dict) -> "TreeDecomposition":
        try:
            nodes = sorted(data["nodes"], key=lambda x: x["id"])
            edges = [tuple(e) for e in data["tree_edges"]]
            bags = [to_mask(x["bag"]) for x in nodes]
        except (KeyError, TypeError) as e:
            raise TangleForgeError(f"malformed tree-decomposition document: missing or bad {e}") from None
        if [x["id"] for x in nodes] != list(range(len(nodes))):
            raise TangleForgeError("node ids must be 0..N-1")
        return cls.make(g, bags, edges)

    def to_dot(self) -> str:
        lines = ["graph td {"]
        for t in range(self.size):
            lines.append(f'  n{t} [label="{" ".join(map(str, self.bag(t)))}"];')
        for a, b in self.tree_edges:
            lines.append(f"  n{a} -- n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def canonical_form(self) -> tuple:
        """Bags and edges with node names dropped (for comparisons)."""
        return (tuple(sorted(self.bags)),
                tuple(sorted(tuple(sorted((self.bags[a], self.bags[b]))) for a, b in self.tree_edges)))


def td_errors(td: TreeDecomposition) -> list[str]:
    g = td.host
    errs = []
    n = td.size
    if n == 0:
        return ["no nodes"]
    for a, b in td.tree_edges:
        if not (0 <= a < n and 0 <= b < n) or a == b:
            errs.append(f"bad tree edge {a}-{b}")
    if errs:
        return errs
    if len(set(td.tree_edges)) != n - 1:
        errs.append("tree has the wrong number of edges")
    nb = td.tree_adjacency()
    seen = {0}
    dq = deque([0])
    while dq:
        t = dq.popleft()
        for u in nb[t]:
            if u not in seen:
                seen.add(u)
                dq.append(u)
    if len(seen) != n:
        errs.append("tree is not connected")
    if errs:
        return errs
    cover = 0
    for bag in td.bags:
        if bag >> g.n:
            errs.append("bag leaves the vertex set")
        cover |= bag
    if cover != g.full:
        errs.append(f"vertices {from_mask(g.full & ~cover)} are in no bag")
    for u, v in g.edges():
        pair = 1 << u | 1 << v
        if not any(bag & pair == pair for bag in td.bags):
            errs.append(f"edge {u}-{v} is in no bag")
    # connectivity: the nodes containing v induce a subtree
    for v in range(g.n):
        hold = [t for t in range(n) if td.bags[t] >> v & 1]
        if not hold:
            continue
        hs = set(hold)
        seen = {hold[0]}
        dq = deque([hold[0]])
        while dq:
            t = dq.popleft()
            for u in nb[t]:
                if u in hs and u not in seen:
                    seen.add(u)
                    dq.append(u)
        if len(seen) != len(hs):
            errs.append(f"nodes containing vertex {v} are not connected")
    return errs


def validate_td(td: TreeDecomposition) -> dict:
    errs = td_errors(td)
    report = {"ok": not errs, "errors": errs}
    if errs:
        return report
    seps = td.edge_separations()
    report["adhesion"] = td.adhesion
    report["width"] = td.width
    report["edge_separations_tight"] = all(is_tight(td.host, s) for s in seps)
    report["edge_separations_nondegenerate"] = all(
        not is_degenerate(td.host, s) and not is_degenerate(td.host, s.flip()) for s in seps)
    report["edge_separations_distinct"] = len({_unoriented(s) for s in seps}) == len(seps)
    return report


def require_valid(td: TreeDecomposition) -> TreeDecomposition:
    errs = td_errors(td)
    if errs:
        raise PropertyViolation("invalid tree-decomposition: " + "; ".join(errs), errs)
    return td


def _unoriented(s: Separation) -> tuple:
    return (s.S, min(s.Y, s.Z), max(s.Y, s.Z))


# ---------------------------------------------------------------------------
# nested separations -> tree

def td_from_nested(g: Graph, seps: Iterable[Separation]) -> TreeDecomposition:
    """Tree-decomposition whose edge-separations are the given pairwise
    nested proper separations.

    Oriented separations (A, B) with A = Y u S and B = Z u S are ordered by
    A <= C and B >= D.  Two orientations point at the same node when one is
    an immediate predecessor of the inverse of the other; the classes of
    that relation are the nodes, the bag of a node is the intersection of
    the B sides pointing at it, and every separation joins the classes of
    its two orientations.
    """
    fam = []
    seen = set()
    for s in seps:
        if not s.is_proper:
            raise TangleForgeError("nested family must consist of proper separations")
        key = _unoriented(s)
        if key not in seen:
            seen.add(key)
            fam.append(s)
    if not fam:
        return TreeDecomposition.trivial(g)
    ori = []
    for s in fam:
        a, b = s.Y | s.S, s.Z | s.S
        ori.append((a, b))
        ori.append((b, a))
    m = len(ori)

    def less(x, y):
        return x != y and ori[x][0] & ~ori[y][0] == 0 and ori[y][1] & ~ori[x][1] == 0

    below = [[y for y in range(m) if less(x, y)] for x in range(m)]
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in range(m):
        ups = below[x]
        upset = set(ups)
        for y in ups:
            # y is an immediate successor of x when nothing lies strictly between
            if any(z in upset and less(z, y) for z in ups if z != y):
                continue
            # x precedes y = inverse of w: x and w point at the same node
            w = y ^ 1
            parent[find(x)] = find(w)
    classes = {}
    for x in range(m):
        classes.setdefault(find(x), []).append(x)
    roots = sorted(classes, key=lambda r: min(classes[r]))
    node_of = {}
    bags = []
    for i, r in enumerate(roots):
        bag = g.full
        for x in classes[r]:
            node_of[x] = i
            bag &= ori[x][1]
        bags.append(bag)
    edges = [(node_of[2 * i], node_of[2 * i + 1]) for i in range(len(fam))]
    td = TreeDecomposition.make(g, bags, edges)
    errs = td_errors(td)
    if errs:
        raise PropertyViolation("nested family did not yield a tree-decomposition: " + "; ".join(errs), errs)
    got = {_unoriented(s) for s in td.edge_separations()}
    if got != seen:
        raise PropertyViolation("tree-decomposition does not realise the nested family")
    return td


# ---------------------------------------------------------------------------
# refinement

def _center(nodes: list[int], nb: list[set[int]]) -> tuple[int, ...]:
    """Center (one node or an edge) of the subtree induced by ``nodes``."""
    alive = set(nodes)
    while len(alive) > 2:
        leaves = [t for t in alive if len(nb[t] & alive) <= 1]
        alive -= set(leaves)
    return tuple(sorted(alive))


def refine_td(td: TreeDecomposition, per_node: dict) -> TreeDecomposition:
    """Replace node t by the decomposition per_node[t] of its torso.

    per_node[t] is a TreeDecomposition whose host is torso(G, bag(t)) (vertex
    i of the torso being the i-th smallest vertex of the bag).  Each tree
    edge of td is reattached at the center of the subtree of torso nodes
    containing the adhesion set; a bicentral subtree gets its central edge
    subdivided by the intersection of the two central bags.
    """
    g = td.host
    bags = []
    edges = []
    offset = {}
    local_nb = {}
    for t in range(td.size):
        sub = per_node.get(t)
        keep = td.bag(t)
        if sub is None:
            sub = TreeDecomposition(torso(g, keep)[0], (((1 << len(keep)) - 1),), ())
        if sub.host.n != len(keep):
            raise TangleForgeError(f"decomposition for node {t} is not over its torso")
        require_valid(sub)
        offset[t] = len(bags)
        for bag in sub.bags:
            bags.append(to_mask(keep[i] for i in bits(bag)))
        for a, b in sub.tree_edges:
            edges.append((offset[t] + a, offset[t] + b))
        local_nb[t] = (sub, sub.tree_adjacency())

    def attach(t: int, adh: int) -> int:
        sub, nb = local_nb[t]
        base = offset[t]
        holders = [i for i in range(sub.size) if bags[base + i] & adh == adh]
        if not holders:
            raise PropertyViolation(f"adhesion set {from_mask(adh)} lies in no bag of node {t}'s decomposition")
        c = _center(holders, nb)
        if len(c) == 1:
            return base + c[0]
        key = (t, c)
        if key not in split:
            a, b = base + c[0], base + c[1]
            bags.append(bags[a] & bags[b])
            mid = len(bags) - 1
            edges.remove((a, b) if (a, b) in edges else (b, a))
            edges.extend([(a, mid), (mid, b)])
            split[key] = mid
        return split[key]

    split: dict = {}
    for a, b in td.tree_edges:
        adh = td.bags[a] & td.bags[b]
        edges.append((attach(a, adh), attach(b, adh)))
    out = TreeDecomposition.make(g, bags, edges)
    return require_valid(out)


# ---------------------------------------------------------------------------
# block-cut tree and Tutte decomposition

def block_cut_tree(g: Graph) -> TreeDecomposition:
    """Blocks as bags; a cut vertex lying in three or more blocks gets a
    bag of its own joining them."""
    if g.n == 0 or not is_connected(g):
        raise TangleForgeError("block_cut_tree expects a connected graph")
    seps = []
    for c in sorted(articulation_points(g)):
        cm = 1 << c
        for comp in components(g, g.full & ~cm):
            seps.append(Separation(comp, cm, g.full & ~cm & ~comp))
    return td_from_nested(g, seps)


def _totally_nested_2seps(g: Graph) -> list[Separation]:
    pairs = [to_mask(p) for p in separating_sets(g, 2) if len(p) == 2]
    comps = {p: components(g, g.full & ~p) for p in pairs}
    out = []
    for p in pairs:
        ok = True
        for q in pairs:
            if q == p or q & p:
                continue
            # q crosses p when its two vertices sit in different components
            if len([c for c in comps[p] if c & q]) == 2:
                ok = False
                break
        if not ok:
            continue
        cs = comps[p]
        if len(cs) == 2:
            out.append(Separation(cs[0], p, cs[1]))
        else:
            for c in cs:
                out.append(Separation(c, p, g.full & ~p & ~c))
    return out


def tutte_block(g: Graph) -> TreeDecomposition:
    """Tutte decomposition of a 2-connected graph (or K2)."""
    return td_from_nested(g, _totally_nested_2seps(g))


def tutte_decomposition(g: Graph) -> TreeDecomposition:
    """Canonical decomposition of adhesion <= 2 whose torsos are cycles,
    3-connected graphs or complete graphs on at most two vertices."""
    bct = block_cut_tree(g)
    per_node = {}
    for t in range(bct.size):
        h, _ = bct.torso(t)
        if h.n >= 4:
            per_node[t] = tutte_block(h)
    return refine_td(bct, per_node)


def torso_class(h: Graph) -> str:
    """'small' (complete, <= 2 vertices), 'cycle', '3-connected' or 'other'."""
    from .graph import is_k_connected
    if h.n <= 2 and h.m == h.n * (h.n - 1) // 2:
        return "small"
    if h.n >= 3 and all(h.degree(v) == 2 for v in range(h.n)) and is_connected(h):
        return "cycle"
    if is_k_connected(h, 3):
        return "3-connected"
    return "other"

