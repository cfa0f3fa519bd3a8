import json
import shutil
import subprocess

import pytest

from gulf.cli import main
from gulf.graph import complete_graph, cycle_graph, path_graph, to_graph6


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture
def k7(tmp_path):
    p = tmp_path / "k7.g6"
    p.write_text(to_graph6(complete_graph(7)) + "\n")
    return str(p)


@pytest.fixture
def c5(tmp_path):
    p = tmp_path / "c5.txt"
    p.write_text("n 5\n0 1\n1 2\n2 3\n3 4\n4 0\n")
    return str(p)


def test_compute_prints_value_and_certificate(capsys, k7):
    code, doc = run(capsys, "compute", k7, "--class", "k3-only", "--variant", "global")
    assert code == 0 and doc["value"] == 7
    assert list(doc["certificate"]) == ["host", "class", "guests", "claims"]


def test_compute_reads_edge_lists(capsys, c5):
    code, doc = run(capsys, "compute", c5, "--class", "linear-forests", "--variant", "local")
    assert code == 0 and doc["value"] == 2


def test_compute_undecided_exit_code(capsys, k7):
    code, doc = run(capsys, "compute", k7, "--class", "forests", "--variant", "local", "--budget-nodes", "3")
    assert code == 2 and doc["value"] == "undecided" and doc["binding_budget"] == "node_limit"


def test_compute_infeasible_exit_code(capsys, tmp_path):
    p = tmp_path / "p3.g6"
    p.write_text(to_graph6(path_graph(3)))
    code, doc = run(capsys, "compute", str(p), "--class", "k3-only", "--variant", "local")
    assert code == 1 and doc["binding_budget"] == "infeasible"


def test_environment_supplies_defaults_and_flags_win(capsys, k7, c5, monkeypatch):
    monkeypatch.setenv("GULF_CLASS", "k3-only")
    monkeypatch.setenv("GULF_VARIANT", "local")
    code, doc = run(capsys, "compute", k7)
    assert code == 0 and doc["value"] == 3 and doc["variant"] == "local"
    code, doc = run(capsys, "compute", k7, "--variant", "union")
    assert doc["value"] == 5
    monkeypatch.setenv("GULF_BUDGET_NODES", "2")
    code, doc = run(capsys, "compute", k7, "--class", "forests")
    assert code == 2
    code, doc = run(capsys, "compute", c5, "--class", "forests", "--budget-nodes", "100000")
    assert code == 0 and doc["value"] == 2


@pytest.mark.parametrize("argv", [
    ["compute", "x.g6"],
    ["bogus"],
    [],
    ["compute", "missing-file.g6", "--class", "forests", "--variant", "local"],
    ["compute", "{k7}", "--class", "no-such-class", "--variant", "local"],
    ["compute", "{k7}", "--class", "forests", "--variant", "sideways"],
    ["construct", "tw-sep"],
    ["compute", "{k7}", "--class", "forests", "--variant", "local", "--budget-nodes", "0"],
])
def test_usage_errors_exit_3(capsys, k7, argv):
    argv = [a.replace("{k7}", k7) for a in argv]
    code, doc = run(capsys, *argv)
    assert code == 3 and "error" in doc


def test_bad_environment_value_is_a_usage_error(capsys, k7, monkeypatch):
    monkeypatch.setenv("GULF_BUDGET_NODES", "lots")
    code, _ = run(capsys, "compute", k7, "--class", "forests", "--variant", "local")
    assert code == 3


def test_chain(capsys, k7):
    code, doc = run(capsys, "chain", k7, "--class", "k3-only")
    assert code == 0 and doc["chain_holds"]
    assert doc["values"] == {"global": 7, "union": 5, "local": 3, "folded": 3}


def test_construct_then_verify_then_tamper(capsys, tmp_path):
    out = tmp_path / "grid"
    code, doc = run(capsys, "construct", "grid-sep", "--param", "4", "--out", str(out))
    assert code == 0 and doc["valid"] and doc["locality"] == 2
    assert sorted(p.name for p in out.iterdir()) == ["H_4.g6", "cover.json", "guests.g6"]
    code, doc = run(capsys, "verify", str(out / "cover.json"))
    assert code == 0 and doc["valid"]
    cert = json.loads((out / "cover.json").read_text())
    cert["guests"][0]["map"][0], cert["guests"][0]["map"][1] = cert["guests"][0]["map"][1], cert["guests"][0]["map"][0]
    cert["claims"]["locality"] = 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cert))
    code, doc = run(capsys, "verify", str(bad))
    assert code == 1 and not doc["valid"] and doc["first_violation"]


def test_verify_malformed_certificate(capsys, tmp_path):
    p = tmp_path / "junk.json"
    p.write_text("{not json")
    code, _ = run(capsys, "verify", str(p))
    assert code == 1


def test_construct_shift_from_digraph_file(capsys, tmp_path):
    d = tmp_path / "d.txt"
    d.write_text("n 3\n0 1\n1 2\n2 0\n")
    code, doc = run(capsys, "construct", "shift", "--param", "3", "--digraph", str(d))
    assert code == 0 and doc["valid"]


def test_transform_pipeline(capsys, tmp_path):
    host = tmp_path / "c6.g6"
    host.write_text(to_graph6(cycle_graph(6)))
    code, doc = run(capsys, "compute", str(host), "--class", "forests", "--variant", "folded")
    cert = tmp_path / "folded.json"
    cert.write_text(json.dumps(doc["certificate"]))
    dest = tmp_path / "union.json"
    code, doc = run(capsys, "transform", "folded-to-union-bipartite", "--in", str(cert), "--out", str(dest))
    assert code == 0 and dest.exists()
    code, doc = run(capsys, "verify", str(dest))
    assert code == 0 and doc["valid"]


def test_transform_with_tree_decomposition_file(capsys, tmp_path):
    host = tmp_path / "p5.g6"
    host.write_text(to_graph6(path_graph(5)))
    code, doc = run(capsys, "compute", str(host), "--class", "stars", "--variant", "local")
    cert = tmp_path / "local.json"
    cert.write_text(json.dumps(doc["certificate"]))
    code, params = run(capsys, "params", str(host), "--tw")
    td = tmp_path / "td.json"
    td.write_text(json.dumps(params["tree_decomposition"]))
    code, doc = run(capsys, "transform", "local-to-union-tw", "--in", str(cert), "--aux", str(td))
    assert code == 0 and doc["claims"]["layers"] is not None


def test_transform_refusal_exits_1(capsys, tmp_path):
    host = tmp_path / "c5.g6"
    host.write_text(to_graph6(cycle_graph(5)))
    code, doc = run(capsys, "compute", str(host), "--class", "forests", "--variant", "folded")
    cert = tmp_path / "f.json"
    cert.write_text(json.dumps(doc["certificate"]))
    code, doc = run(capsys, "transform", "folded-to-union-bipartite", "--in", str(cert))
    assert code == 1


def test_params(capsys, k7):
    code, doc = run(capsys, "params", k7)
    assert code == 0
    assert (doc["chi"], doc["mad"], doc["tw"], doc["arboricity"], doc["planar"]) == (7, "6", 6, 4, False)
    code, doc = run(capsys, "params", k7, "--mad")
    assert set(doc) == {"host", "n", "m", "mad"}


@pytest.mark.skipif(shutil.which("gulf") is None, reason="console script not installed")
def test_console_script(k7):
    p = subprocess.run(["gulf", "compute", k7, "--class", "k3-only", "--variant", "local"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["value"] == 3
