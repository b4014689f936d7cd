import io
import json
import subprocess
import sys

import pytest

from spiraltower import cli, config, formats, tower
from spiraltower.representation import represent_relation


@pytest.fixture(autouse=True)
def restore_config():
    yield
    config.set_defaults(config.DEFAULTS)


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_spiral_table():
    code, text = run("spiral", "--level", "1")
    assert code == 0
    assert text.startswith("level 1: 3 points, 4 edges")


def test_spiral_zero_is_a_loop():
    code, text = run("spiral", "--level", "0", "--format", "graph-text")
    nodes, edges = formats.read_dot(text)
    assert nodes == ["O"] and edges == [("O", "O")]


def test_graph_text_parses():
    code, text = run("spiral", "--level", "2", "--format", "graph-text")
    nodes, edges = formats.read_dot(text)
    assert code == 0 and len(nodes) == 7 and len(edges) == 8


def test_output_is_byte_identical_across_runs():
    a = run("level", "--level", "2", "--format", "structured-text")[1]
    b = run("level", "--level", "2", "--format", "structured-text")[1]
    assert a == b
    doc = json.loads(a)
    assert len(doc["vertices"]) == 252 and doc["classification"]["L1.L1:W(0)"] == "wandering"


def test_level_word_slice():
    code, text = run("level", "--level", "1", "--word", "R2", "--format", "graph-text")
    nodes, _ = formats.read_dot(text)
    assert code == 0 and nodes == ["R2:P(+,0)", "R2:P(-,0)", "R2:W(0)"]
    assert run("level", "--level", "2", "--word", "R2")[0] == 2


def test_counts():
    code, text = run("counts", "--n", "1", "--k", "2")
    assert code == 0
    assert "S[L1]" in text and "2*6^(k-1) = 12" in text
    assert run("counts", "--n", "1", "--k", "0")[0] == 2


def test_verify_passes_and_fails():
    code, text = run("verify", "tower-exactness")
    assert code == 0 and "5/5 checks passed" in text
    code, text = run("verify", "piece-counts")
    assert code == 1 and "FAIL" in text
    assert run("verify", "no-such-suite")[0] == 2


def test_represent_and_lift_pipeline(tmp_path):
    rel = tmp_path / "r.json"
    rel.write_text(json.dumps({"vertices": ["a", "b"], "edges": [["a", "b"], ["b", "a"], ["b", "b"]]}))
    model = tmp_path / "m.json"
    code, text = run("represent", "--input", str(rel), "--output", str(model))
    assert code == 0 and "image equals input: yes" in text
    assert formats.model_from_dict(formats.load_json(model)).is_exact()

    level_model = tmp_path / "w1.json"
    level_model.write_text(formats.dumps(formats.model_to_dict(
        represent_relation(tower.build_level(1).relation))))
    out = tmp_path / "lift.json"
    code, text = run("lift", "--n", "1", "--k", "1", "--model", str(level_model), "--out", str(out))
    assert code == 0 and "verify_lift: PASS" in text
    doc = formats.load_json(out)
    assert doc["n"] == 1 and doc["k"] == 1 and doc["rho"]

    code, _ = run("lift", "--n", "1", "--k", "2", "--model", str(level_model), "--out", str(out),
                  "--no-deepen")
    assert code == 2


def test_bad_inputs(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("represent", "--input", str(bad), "--output", str(tmp_path / "o"))[0] == 2
    dup = tmp_path / "dup.json"
    dup.write_text(json.dumps({"vertices": ["a", "a"], "edges": [["a", "a"]]}))
    assert run("represent", "--input", str(dup), "--output", str(tmp_path / "o"))[0] == 2
    assert run("represent", "--input", str(tmp_path / "missing"), "--output", "x")[0] == 2
    assert run("spiral", "--level", "9")[0] == 2
    assert run("--level-cap", "8", "spiral", "--level", "7")[0] == 0


def test_rohlin_commands():
    code, text = run("rohlin", "witness", "--n", "1", "--pi1", "", "--pi2", "")
    assert code == 0 and "verified" in text
    code, text = run("rohlin", "witness", "--n", "2", "--pi1", "(1 2 3)", "--pi2", "(4 5)")
    assert code == 0 and "verified" in text
    assert run("rohlin", "witness", "--n", "2", "--pi1", "(1 9)", "--pi2", "")[0] == 2
    code, text = run("rohlin", "candidate", "--check-upto", "2")
    assert code == 0 and "5040/5040" in text
    assert run("rohlin", "candidate", "--check-upto", "3")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "spiraltower", "spiral", "--level", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "3 points" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "spiraltower", "verify", "piece-counts"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
