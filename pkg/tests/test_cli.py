import json
import subprocess
import sys

from acy.cells import CellSystem, cells_to_doc
from acy.quiver import build_family


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "acy.cli", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_graphs_list():
    code, out, _ = run_cli("graphs", "list")
    assert code == 0
    assert "A4: h=4, |V|=3" in out
    assert "D9: h=9" in out and "P=identity" in out
    assert "E4(12)" in out


def test_compute_json_deterministic():
    code1, out1, _ = run_cli("compute", "--graph", "A4", "--cells", "builtin",
                             "--format", "json", "--seed", "5")
    code2, out2, _ = run_cli("compute", "--graph", "A4", "--cells", "builtin",
                             "--format", "json", "--seed", "5")
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["tables"]["hh"]["2"] == {"3": 1}
    assert all(doc["checks"].values())
    assert doc["tool"]["seed"] == 5


def test_compute_solve_a4():
    code, out, _ = run_cli("compute", "--graph", "A4", "--cells", "solve",
                           "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["tables"]["hh"]["2"] == {"3": 1}


def test_compute_zero_cells_fails(tmp_path):
    g = build_family("A", 4)
    zero = CellSystem(g, g.tower, {t: g.tower.zero() for t in g.triangles()})
    path = tmp_path / "zero_cells.json"
    path.write_text(json.dumps(cells_to_doc(zero)))
    code, out, _ = run_cli("compute", "--graph", "A4", "--cells", f"file:{path}",
                           "--format", "json")
    assert code == 3
    assert json.loads(out)["failed_gate"] == "cells"


def test_bad_inputs():
    code, _, err = run_cli("compute", "--graph", "Z9")
    assert code == 2 and "error" in err
    code, _, err = run_cli("compute", "--graph", "A4", "--cells", "file:/nonexistent.json")
    assert code == 2
    code, _, err = run_cli("compute", "--graph", "A4", "--cutoff-degree", "5")
    assert code == 2 and "3h" in err


def test_verify_commands():
    code, out, _ = run_cli("verify", "--graph", "A5", "--check", "duality")
    assert code == 0 and "duality: pass" in out
    code, out, _ = run_cli("verify", "--graph", "E8*", "--check", "hilbert")
    assert code == 0 and "hilbert: pass" in out
    code, out, _ = run_cli("verify", "--graph", "D9", "--check", "euler")
    assert code == 0 and "euler: pass" in out
    code, out, _ = run_cli("verify", "--graph", "A4", "--check", "cells",
                           "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["checks"]["cells_type_I"] and doc["checks"]["cells_type_II"]


def test_out_file(tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run_cli("compute", "--graph", "A4", "--format", "json",
                           "--out", str(target))
    assert code == 0 and out == ""
    doc = json.loads(target.read_text())
    assert doc["graph"] == "A4"


def test_compute_from_graph_file(tmp_path):
    import json as _json

    from acy.quiver import save_graph

    path = tmp_path / "d9.json"
    path.write_text(_json.dumps(save_graph(build_family("D", 9))))
    code, out, _ = run_cli("compute", "--graph", f"file:{path}", "--format", "json")
    assert code == 0
    doc = _json.loads(out)
    assert doc["graph"] == "D9" and all(doc["checks"].values())


def test_verify_all_a4():
    code, out, _ = run_cli("verify", "--graph", "A4", "--check", "all")
    assert code == 0
    for line in ("cells_type_I: pass", "hilbert: pass", "duality: pass",
                 "resolution: pass", "euler: pass", "hh0_cross: pass"):
        assert line in out, line
