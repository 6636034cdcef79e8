import io
import json
import subprocess
import sys

import pytest

from tangleforge.cli import main, read_graph
from tangleforge.errors import ParseError
from tangleforge.graph import complete_graph, cycle_graph, to_graph6


def run(argv, stdin_text=""):
    out = io.StringIO()
    code = main(argv, stdin=io.StringIO(stdin_text), stdout=out)
    return code, out.getvalue()


def gen(family, *params):
    code, text = run(["gen", "--family", family, "--params", *map(str, params)])
    assert code == 0
    return text


def test_gen_json_and_graph6():
    doc = json.loads(gen("cycle", 5))
    assert doc["kind"] == "graph" and doc["n"] == 5 and len(doc["edges"]) == 5 and "action" in doc
    code, text = run(["gen", "--family", "complete", "--params", "4", "--format", "graph6"])
    assert code == 0 and text.strip() == to_graph6(complete_graph(4))


def test_output_is_deterministic():
    g = gen("hex-tri-torus", 3, 3)
    a = run(["tangles"], g)
    b = run(["tangles"], g)
    assert a == b and a[0] == 0


def test_tangles_of_hex_triangle_torus():
    code, text = run(["tangles"], gen("hex-tri-torus", 3, 3))
    doc = json.loads(text)
    assert code == 0 and doc["count"] == 1
    (t,) = doc["tangles"]
    assert len(t["crossedges"]) == 27 and len(t["R"]) == 54


@pytest.mark.parametrize("mode", ["blocks", "tutte", "distinguish", "grohe", "structure"])
def test_decompose_then_check(mode, tmp_path):
    code, text = run(["decompose", "--mode", mode], gen("cycle-tree", 5, 1, 1))
    assert code == 0
    f = tmp_path / "td.json"
    f.write_text(text)
    code, rep = run(["check", "--td", str(f)])
    assert code == 0 and json.loads(rep)["ok"]


def test_structure_on_tri_gadget_uses_supplied_action():
    code, text = run(["decompose", "--mode", "structure"], gen("tri-gadget-torus", 3, 3))
    doc = json.loads(text)
    assert code == 0 and doc["report"]["canonical"]


def test_check_flags_a_non_canonical_decomposition(tmp_path):
    doc = json.loads(gen("cycle", 5))
    td = {"schema": "tangleforge/1", "kind": "td", "nodes": [{"id": i, "bag": b} for i, b in enumerate([[0, 1, 2], [0, 2, 3], [0, 3, 4]])],
          "tree_edges": [[0, 1], [1, 2]], "graph": doc}
    f = tmp_path / "td.json"
    f.write_text(json.dumps(td))
    code, text = run(["check", "--td", str(f)])
    rep = json.loads(text)
    assert code == 1 and rep["ok"] and rep["canonical"] is False


def test_contract_all_crossedges():
    code, text = run(["contract", "--edges", "all-crossedges"], gen("hex-tri-torus", 3, 3))
    doc = json.loads(text)
    assert code == 0 and doc["graph"]["n"] == 27


def test_contract_explicit_edges():
    code, text = run(["contract", "--edges", "0-1"], gen("cycle", 5))
    assert code == 0 and json.loads(text)["graph"]["n"] == 4


def test_planar_witness():
    code, text = run(["planar", "--witness", "--input-format", "graph6"], to_graph6(complete_graph(5)))
    doc = json.loads(text)
    assert code == 0 and doc["planar"] is False and "witness" in doc
    code, text = run(["planar"], "0 1\n1 2\n2 0\n")
    assert json.loads(text)["planar"] is True


def test_walks(tmp_path):
    _, text = run(["decompose", "--mode", "tutte"], gen("cycle", 6))
    f = tmp_path / "td.json"
    f.write_text(text)
    code, out = run(["walks", "--td", str(f), "--verify"])
    doc = json.loads(out)
    assert code == 0 and doc["generates"] is True and len(doc["walks"]) == 1


def test_dot_output():
    code, text = run(["decompose", "--format", "dot"], gen("cycle", 4))
    assert code == 0 and text.lstrip().startswith(("graph", "strict"))


@pytest.mark.parametrize("argv,stdin,code", [
    (["tangles"], "{not json", 3),
    (["tangles"], "", 3),
    (["gen", "--family", "cycle", "--params", "2"], "", 3),
    (["check", "--td", "/nonexistent/td.json"], "", 3),
    (["contract", "--edges", "0-x"], "0 1\n", 3),
])
def test_error_exit_codes(argv, stdin, code):
    assert run(argv, stdin)[0] == code


def test_malformed_td_document(tmp_path):
    f = tmp_path / "td.json"
    f.write_text(json.dumps({"bags": [[0]], "graph": json.loads(gen("cycle", 3))}))
    assert run(["check", "--td", str(f)])[0] == 3


def test_read_graph_formats():
    g, _ = read_graph(to_graph6(cycle_graph(5)))
    assert g.m == 5
    g, _ = read_graph("0 1\n1 2\n")
    assert g.m == 2
    with pytest.raises(ParseError):
        read_graph("   ")


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "tangleforge.cli", "gen", "--family", "cycle", "--params", "3"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["n"] == 3
