"""Command-line interface.

Graphs travel between commands as JSON documents
``{"schema": "tangleforge/1", "kind": "graph", "n", "edges", "action"?}``;
graph6 and edge-list input are accepted as well.  Exit codes: 0 success,
1 property violation, 2 resource limit, 3 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import ParseError, PropertyViolation, ResourceError, TangleForgeError
from .graph import Graph, load_graph, to_graph6

SCHEMA = "tangleforge/1"


# ---------------------------------------------------------------------------
# input / output

def graph_doc(g: Graph, action=None) -> dict:
    doc = {"schema": SCHEMA, "kind": "graph", "n": g.n, "edges": [list(e) for e in g.edges()]}
    if g.labels:
        doc["labels"] = list(g.labels)
    if action is not None:
        doc["action"] = action.to_json()
    return doc


def read_graph(text: str, fmt: str | None = None):
    """(graph, action or None) from JSON, graph6 or an edge list."""
    from .symmetry import GroupAction
    body = text.strip()
    if not body:
        raise ParseError("empty input", 0)
    if fmt in (None, "json") and body[0] == "{":
        try:
            data = json.loads(body)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.pos) from None
        if "graph" in data:
            data = data["graph"]
        g = Graph.from_json(data)
        action = GroupAction.from_json(g, data["action"]) if data.get("action") else None
        return g, action
    if fmt in (None, "graph6") and "\n" not in body and " " not in body:
        return load_graph("graph6", body), None
    return load_graph("edge-list", text), None


def emit(obj, args, out) -> None:
    if isinstance(obj, str):
        out.write(obj if obj.endswith("\n") else obj + "\n")
        return
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def _input_text(args, stdin) -> str:
    if args.input and args.input != "-":
        with open(args.input) as fh:
            return fh.read()
    return stdin.read()


def _load(args, stdin):
    return read_graph(_input_text(args, stdin), args.input_format)


def _td_doc(td, g, action=None, extra=None) -> dict:
    doc = {"schema": SCHEMA, "kind": "td"}
    doc.update(td.to_json())
    doc["graph"] = graph_doc(g, action)
    if extra:
        doc.update(extra)
    return doc


def _emit_td(td, g, args, out, action=None, extra=None):
    if args.format == "dot":
        emit(td.to_dot(), args, out)
    else:
        emit(_td_doc(td, g, action, extra), args, out)


def _read_json_file(path: str) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}: invalid JSON: {e.msg}", e.pos) from None


def _load_td(args, stdin):
    from .td import TreeDecomposition
    data = _read_json_file(args.td)
    if "graph" in data:
        g, action = read_graph(json.dumps(data["graph"]), "json")
    else:
        g, action = _load(args, stdin)
    return g, action, TreeDecomposition.from_json(g, data)


# ---------------------------------------------------------------------------
# commands

def cmd_gen(args, stdin, out) -> int:
    from .families import generate
    g, action = generate(args.family, args.params)
    if args.format == "graph6":
        emit(to_graph6(g), args, out)
    else:
        emit(graph_doc(g, action), args, out)
    return 0


def cmd_tangles(args, stdin, out) -> int:
    from .graph import is_k_connected
    from .tangles import core_X, crossedges, enumerate_tangles, nondegenerate_minimal, region_R
    g, _ = _load(args, stdin)
    ts = enumerate_tangles(g, args.order, budget=args.budget) if args.budget else enumerate_tangles(g, args.order)
    docs = []
    for t in ts:
        d = t.to_json()
        if args.order == 4 and is_k_connected(g, 3):
            d["nondegenerate"] = [s.to_json() for s in nondegenerate_minimal(t)]
            d["crossedges"] = [list(e) for e in crossedges(t)]
            d["X"] = core_X(t)
            d["R"] = region_R(t)
        docs.append(d)
    emit({"schema": SCHEMA, "kind": "tangles", "order": args.order, "count": len(ts), "tangles": docs}, args, out)
    return 0


def cmd_decompose(args, stdin, out) -> int:
    from . import decomposition as dec
    from .symmetry import GroupAction, automorphisms
    from .td import block_cut_tree, tutte_decomposition
    from .tangles import enumerate_tangles
    g, action = _load(args, stdin)
    extra = {"mode": args.mode}
    if args.mode == "blocks":
        td = block_cut_tree(g)
    elif args.mode == "tutte":
        td = tutte_decomposition(g)
    elif args.mode == "grohe":
        td = dec.grohe_decomposition(g)
    else:
        if action is None:
            action = automorphisms(g) if args.auto_action else GroupAction.trivial(g)
        if args.mode == "distinguish":
            td, rep = dec.tangle_distinguishing(g, enumerate_tangles(g, args.order), action)
        else:
            td, rep = dec.structure_decomposition(g, action)
        extra["report"] = rep
    _emit_td(td, g, args, out, action, extra)
    return 0


def cmd_contract(args, stdin, out) -> int:
    from .contraction import contract_matching, induced_tangle
    from .tangles import crossedges, enumerate_tangles
    g, _ = _load(args, stdin)
    doc = {"schema": SCHEMA, "kind": "contraction"}
    if args.edges == "all-crossedges":
        ts = enumerate_tangles(g, 4)
        if len(ts) != 1:
            raise TangleForgeError(f"all-crossedges needs a unique order-4 tangle, found {len(ts)}")
        edges = crossedges(ts[0])
        cm, t2 = induced_tangle(g, ts[0], edges)
        doc["induced_tangle"] = t2.to_json()
    else:
        edges = _parse_edges(args.edges)
        cm = contract_matching(g, edges)
    doc.update(cm.to_json())
    doc["graph"] = graph_doc(cm.target)
    emit(doc, args, out)
    return 0


def _parse_edges(text: str) -> list[tuple[int, int]]:
    out = []
    for tok in text.replace(";", ",").split(","):
        tok = tok.strip()
        if not tok:
            continue
        parts = tok.replace(":", "-").split("-")
        if len(parts) != 2:
            raise ParseError(f"bad edge {tok!r}; expected u-v", 0)
        try:
            out.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ParseError(f"bad edge {tok!r}; expected u-v", 0) from None
    return out


def cmd_check(args, stdin, out) -> int:
    from .symmetry import GroupAction, is_canonical_td
    from .td import validate_td
    g, action, td = _load_td(args, stdin)
    if args.action:
        action = GroupAction.from_json(g, _read_json_file(args.action))
    rep = {"schema": SCHEMA, "kind": "check"}
    rep.update(validate_td(td))
    if action is not None:
        ok, wit = is_canonical_td(td, action)
        rep["canonical"] = ok
        if not ok:
            rep["failing_generator"] = wit
    emit(rep, args, out)
    good = rep["ok"] and rep.get("canonical", True)
    return 0 if good else 1


def cmd_planar(args, stdin, out) -> int:
    from .planarity import is_planar, kuratowski_witness, witness_json
    g, _ = _load(args, stdin)
    doc = {"schema": SCHEMA, "kind": "planarity", "planar": is_planar(g)}
    if args.witness and not doc["planar"]:
        doc["witness"] = witness_json(kuratowski_witness(g))
    emit(doc, args, out)
    return 0


def cmd_walks(args, stdin, out) -> int:
    from .walks import closed_walk_generators, generates_all
    g, _, td = _load_td(args, stdin)
    gens = closed_walk_generators(g, td)
    doc = {"schema": SCHEMA, "kind": "walks", "walks": [list(w) for w in gens]}
    if args.verify:
        doc["generates"] = generates_all(g, gens)
    emit(doc, args, out)
    return 0 if doc.get("generates", True) is not False else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "dot", "graph6"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS)
    common.add_argument("--input", default=argparse.SUPPRESS, help="input file (default stdin)")
    common.add_argument("--input-format", choices=("json", "graph6", "edge-list"), default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="tangleforge", description="Tangles and canonical decompositions of small graphs.")
    p.add_argument("--format", choices=("json", "dot", "graph6"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--input", default=None)
    p.add_argument("--input-format", choices=("json", "graph6", "edge-list"), default=None)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", parents=[common], help="generate a family member")
    s.add_argument("--family", required=True)
    s.add_argument("--params", type=int, nargs="+", required=True)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("tangles", parents=[common], help="enumerate tangles")
    s.add_argument("--order", type=int, default=4)
    s.set_defaults(func=cmd_tangles)

    s = sub.add_parser("decompose", parents=[common], help="tree-decompositions")
    s.add_argument("--mode", choices=("blocks", "tutte", "distinguish", "grohe", "structure"), default="tutte")
    s.add_argument("--order", type=int, default=4)
    s.add_argument("--auto-action", action="store_true",
                   help="use the full automorphism group when the input carries no action")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("contract", parents=[common], help="contract a matching")
    s.add_argument("--edges", required=True, help="u-v,u-v,... or all-crossedges")
    s.set_defaults(func=cmd_contract)

    s = sub.add_parser("check", parents=[common], help="validate a tree-decomposition")
    s.add_argument("--td", required=True)
    s.add_argument("--action")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("planar", parents=[common], help="planarity test")
    s.add_argument("--witness", action="store_true")
    s.set_defaults(func=cmd_planar)

    s = sub.add_parser("walks", parents=[common], help="closed-walk generators of a decomposition")
    s.add_argument("--td", required=True)
    s.add_argument("--verify", action="store_true")
    s.set_defaults(func=cmd_walks)
    return p


def main(argv=None, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, stdin, stdout)
    except PropertyViolation as e:
        print(f"property violation: {e}", file=sys.stderr)
        return 1
    except ResourceError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return 2
    except (TangleForgeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
