"""Planarity: path-addition test, Kuratowski witnesses, a minor-search
oracle, and the uncontraction harness for crossedge contractions."""
from __future__ import annotations

import random
from collections import deque

from .errors import PropertyViolation, ResourceError
from .graph import Graph, complete_bipartite, complete_graph
from .minors import MinorModel, find_minor_model, validate_model

K5 = complete_graph(5)
K33 = complete_bipartite(3, 3)


# ---------------------------------------------------------------------------
# blocks

def biconnected_blocks(g: Graph) -> list[list[tuple[int, int]]]:
    """Edge lists of the blocks (Hopcroft-Tarjan with an edge stack)."""
    disc = [-1] * g.n
    low = [0] * g.n
    blocks = []
    counter = 0
    for root in range(g.n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = counter
        counter += 1
        stack = [(root, -1, iter(g.adj[root]))]
        estack: list[tuple[int, int]] = []
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if disc[w] == -1:
                    estack.append((v, w))
                    disc[w] = low[w] = counter
                    counter += 1
                    stack.append((w, v, iter(g.adj[w])))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    estack.append((v, w))
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[v])
                if low[v] >= disc[parent]:
                    block = []
                    while True:
                        e = estack.pop()
                        block.append((min(e), max(e)))
                        if e == (parent, v):
                            break
                    blocks.append(sorted(set(block)))
    return blocks


def _block_graph(edges):
    verts = sorted({x for e in edges for x in e})
    pos = {v: i for i, v in enumerate(verts)}
    return Graph(len(verts), [(pos[u], pos[v]) for u, v in edges]), verts


# ---------------------------------------------------------------------------
# path addition on a 2-connected graph

def _find_cycle(g: Graph) -> list[int]:
    parent = {0: None}
    depth = {0: 0}
    stack = [0]
    order = []
    while stack:
        v = stack.pop()
        order.append(v)
        for w in g.adj[v]:
            if w not in parent:
                parent[w] = v
                depth[w] = depth[v] + 1
                stack.append(w)
    for v in order:
        for w in g.adj[v]:
            if parent.get(v) != w and parent.get(w) != v:
                # tree paths from v and w up to their meeting point
                a, b = [v], [w]
                x, y = v, w
                while x != y:
                    if depth[x] >= depth[y]:
                        x = parent[x]
                        a.append(x)
                    else:
                        y = parent[y]
                        b.append(y)
                return a + b[-2::-1]
    raise ValueError("graph has no cycle")


def _planar_2connected(g: Graph) -> bool:
    if g.n <= 4:
        return True
    if g.m > 3 * g.n - 6:
        return False
    cyc = _find_cycle(g)
    placed_v = set(cyc)
    placed_e = set()
    for i in range(len(cyc)):
        a, b = cyc[i], cyc[(i + 1) % len(cyc)]
        placed_e.add((min(a, b), max(a, b)))
    faces = [list(cyc), list(reversed(cyc))]
    while True:
        frags = _fragments(g, placed_v, placed_e)
        if not frags:
            return True
        best = None
        for frag in frags:
            att = frag[0]
            ok = [i for i, f in enumerate(faces) if att <= set(f)]
            if not ok:
                return False
            if best is None or len(ok) < len(best[1]):
                best = (frag, ok)
            if len(ok) == 1:
                break
        frag, ok = best
        face = faces[ok[0]]
        path = _fragment_path(g, frag, placed_v)
        a, b = path[0], path[-1]
        i, j = face.index(a), face.index(b)
        k = len(face)
        arc_ab = [face[(i + t) % k] for t in range((j - i) % k + 1)]
        arc_ba = [face[(j + t) % k] for t in range((i - j) % k + 1)]
        inner = path[1:-1]
        faces[ok[0]] = arc_ab + inner[::-1]
        faces.append(arc_ba + inner)
        placed_v.update(path)
        for x, y in zip(path, path[1:]):
            placed_e.add((min(x, y), max(x, y)))


def _fragments(g: Graph, placed_v: set, placed_e: set):
    """Each fragment is (attachment set, interior vertex set, edge or None)."""
    frags = []
    for u, v in g.edges():
        if u in placed_v and v in placed_v and (u, v) not in placed_e:
            frags.append(({u, v}, set(), (u, v)))
    rest = [v for v in range(g.n) if v not in placed_v]
    seen = set()
    for s in rest:
        if s in seen:
            continue
        comp = {s}
        dq = deque([s])
        att = set()
        while dq:
            x = dq.popleft()
            for y in g.adj[x]:
                if y in placed_v:
                    att.add(y)
                elif y not in comp:
                    comp.add(y)
                    dq.append(y)
        seen |= comp
        frags.append((att, comp, None))
    return frags


def _fragment_path(g: Graph, frag, placed_v: set) -> list[int]:
    att, comp, edge = frag
    if edge is not None:
        return list(edge)
    a = min(att)
    starts = [x for x in sorted(comp) if a in g.adj[x]]
    prev = {x: None for x in starts}
    dq = deque(starts)
    while dq:
        x = dq.popleft()
        for y in g.adj[x]:
            if y in placed_v and y != a:
                path = [y, x]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                path.append(a)
                return path[::-1]
            if y in comp and y not in prev:
                prev[y] = x
                dq.append(y)
    raise ValueError("fragment has a single attachment")


def is_planar(g: Graph) -> bool:
    if g.n >= 3 and g.m > 3 * g.n - 6:
        return False
    for edges in biconnected_blocks(g):
        if len(edges) < 9:
            continue
        h, _ = _block_graph(edges)
        if not _planar_2connected(h):
            return False
    return True


# ---------------------------------------------------------------------------
# witnesses

def kuratowski_witness(g: Graph) -> tuple[str, MinorModel] | None:
    """A validated K5 or K3,3 model when g is not planar."""
    if is_planar(g):
        return None
    edges = list(g.edges())
    # shrink to a nonplanar block first
    for block in biconnected_blocks(g):
        if not is_planar(Graph(g.n, block)):
            edges = block
            break
    keep = list(edges)
    for e in list(edges):
        trial = [f for f in keep if f != e]
        if not is_planar(Graph(g.n, trial)):
            keep = trial
    sub = Graph(g.n, keep)
    deg = [sub.degree(v) for v in range(g.n)]
    branch = [v for v in range(g.n) if deg[v] >= 3]
    # follow the subdivided paths between branch vertices; interiors join
    # the branch set of the smaller end
    is_branch = [d >= 3 for d in deg]
    owner = {v: v for v in branch}
    links = set()
    for b in branch:
        for first in sub.adj[b]:
            prev, cur = b, first
            inner = []
            while not is_branch[cur]:
                inner.append(cur)
                prev, cur = cur, [x for x in sub.adj[cur] if x != prev][0]
            if b < cur:
                links.add((b, cur))
                for x in inner:
                    owner[x] = b
    if len(branch) == 5 and all(deg[v] == 4 for v in branch) and len(links) == 10:
        name, pattern = "K5", K5
        order = branch
    elif len(branch) == 6 and all(deg[v] == 3 for v in branch) and len(links) == 9:
        name, pattern = "K33", K33
        side = {branch[0]: 0}
        dq = deque([branch[0]])
        while dq:
            x = dq.popleft()
            for u, v in links:
                y = v if u == x else u if v == x else None
                if y is not None and y not in side:
                    side[y] = 1 - side[x]
                    dq.append(y)
        order = sorted(branch, key=lambda v: (side[v], v))
    else:
        raise PropertyViolation("edge-minimal nonplanar subgraph is not a Kuratowski subdivision", keep)
    sets = []
    for b in order:
        sets.append(frozenset(v for v, o in owner.items() if o == b))
    model = MinorModel(g, pattern, tuple(sets), None)
    validate_model(model)
    return name, model


def witness_json(found) -> dict | None:
    if found is None:
        return None
    name, model = found
    return {"pattern": name, "branch_sets": [sorted(b) for b in model.branch_sets]}


# ---------------------------------------------------------------------------
# independent oracle

def _random_contraction_search(g: Graph, rng: random.Random, target: int, budget: int) -> MinorModel | None:
    """Contract random edges down to ``target`` vertices and search the
    small graph exhaustively; lift any model found."""
    groups = {v: {v} for v in range(g.n)}
    adj = {v: set(g.adj[v]) for v in range(g.n)}
    while len(adj) > target:
        u = rng.choice(sorted(adj))
        if not adj[u]:
            break
        w = rng.choice(sorted(adj[u]))
        for x in adj.pop(w):
            if x != u:
                adj[x].discard(w)
                adj[x].add(u)
                adj[u].add(x)
        adj[u].discard(w)
        groups[u] |= groups.pop(w)
    names = sorted(adj)
    pos = {v: i for i, v in enumerate(names)}
    small = Graph(len(names), [(pos[u], pos[x]) for u in names for x in adj[u] if u < x])
    for pattern in (K33, K5):
        try:
            found = find_minor_model(small, pattern, budget=budget)
        except ResourceError:
            continue
        if found is not None:
            sets = tuple(frozenset(v for i in b for v in groups[names[i]]) for b in found.branch_sets)
            model = MinorModel(g, pattern, sets, None)
            validate_model(model)
            return model
    return None


def minor_oracle(g: Graph, budget: int = 300_000, seed: int = 0, tries: int = 40) -> tuple[bool | None, MinorModel | None]:
    """Planarity by K5/K3,3 minor search.

    Returns (True, None) when both searches fail in every block (planar),
    (False, model) when a model is found, and (None, None) when the budget
    runs out without a decision.
    """
    undecided = False
    for edges in biconnected_blocks(g):
        if len(edges) < 9:
            continue
        h, verts = _block_graph(edges)
        lift = None
        if h.n > 16:
            # large blocks: cheap randomised contractions before the full search
            rng = random.Random(seed)
            for _ in range(tries):
                lift = _random_contraction_search(h, rng, 12, min(budget, 20_000))
                if lift is not None:
                    break
        if lift is None:
            for pattern in (K33, K5):
                try:
                    found = find_minor_model(h, pattern, budget=budget)
                except ResourceError:
                    undecided = True
                    continue
                if found is not None:
                    lift = found
                    break
        if lift is not None:
            sets = tuple(frozenset(verts[v] for v in b) for b in lift.branch_sets)
            model = MinorModel(g, lift.pattern, sets, None)
            validate_model(model)
            return False, model
    if undecided:
        return None, None
    return True, None


# ---------------------------------------------------------------------------
# uncontraction harness

def check_planarity_preservation(g: Graph, t, oracle_budget: int = 200_000, fallback=None,
                                 oracle_tries: int = 40) -> dict:
    """Contract the crossedges of t one at a time and check, at every step,
    that planarity of the later torso of the region implies planarity of the
    earlier one; also check the neighbourhood claim on every crossedge.

    Every planarity decision is repeated by the minor oracle; where that
    search is inconclusive, ``fallback(graph)`` (if given) decides instead."""
    from .contraction import compose_maps, image_edge, induced_tangle
    from .graph import torso
    from .tangles import crossedges, fence, nondegenerate_minimal, region_R
    from .separations import classify_pair

    ex = crossedges(t)
    region = region_R(t)
    h, keep = torso(g, region)
    pos = {v: i for i, v in enumerate(keep)}
    report = {"crossedges": [list(e) for e in ex], "steps": [], "neighbourhood_claims": 0,
              "neighbourhood_failures": [], "oracle_disagreements": 0, "oracle_inconclusive": 0, "fallback_used": 0}

    # neighbourhood claim in the torso of the region
    nd = nondegenerate_minimal(t)
    for a in nd:
        for b in nd:
            if a == b:
                continue
            kind, edge = classify_pair(a, b, g)
            if kind != "crossing":
                continue
            s1, s2 = edge  # s1 in S_a, s2 in S_b
            fc = fence(t, b, ex)
            want = ({s2} | set(fc)) - {s1}
            got = {keep[w] for w in h.adj[pos[s1]]} if s1 in pos else set()
            tri = all(h.has_edge(pos[x], pos[y]) for x in fc for y in fc if x < y) if all(x in pos for x in fc) else False
            report["neighbourhood_claims"] += 1
            if got != want or not tri or s1 not in fc:
                report["neighbourhood_failures"].append({"s1": s1, "s2": s2, "fence": fc, "neighbours": sorted(got)})

    def decide(graph: Graph) -> bool:
        p = is_planar(graph)
        o, _ = minor_oracle(graph, budget=oracle_budget, tries=oracle_tries)
        if o is None and fallback is not None:
            report["fallback_used"] += 1
            o = bool(fallback(graph))
        if o is None:
            report["oracle_inconclusive"] += 1
        elif o != p:
            report["oracle_disagreements"] += 1
        return p

    cur_g, cur_t, cm = g, t, None
    planar = [decide(h)]
    sizes = [h.n]
    for e in ex:
        e2 = image_edge(cm, e) if cm is not None else e
        step_cm, cur_t = induced_tangle(cur_g, cur_t, [e2])
        cm = step_cm if cm is None else compose_maps(cm, step_cm)
        cur_g = step_cm.target
        th, _ = torso(cur_g, region_R(cur_t))
        planar.append(decide(th))
        sizes.append(th.n)
    for i in range(len(ex)):
        report["steps"].append({"edge": list(ex[i]), "before_planar": planar[i], "after_planar": planar[i + 1],
                                "holds": (not planar[i + 1]) or planar[i]})
    report["torso_sizes"] = sizes
    report["stepwise_ok"] = all(s["holds"] for s in report["steps"])
    report["end_to_end_ok"] = (not planar[-1]) or planar[0]
    report["source_planar"] = planar[0]
    report["target_planar"] = planar[-1]
    report["ok"] = (report["stepwise_ok"] and report["end_to_end_ok"] and not report["neighbourhood_failures"]
                    and report["oracle_disagreements"] == 0)
    return report

