"""Exit codes, file round trips, and determinism of the command line."""

import json

import pytest

from evcyc import graph_to_json
from evcyc.cli import main
from conftest import complete_bipartite_graph, complete_graph


def _write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def k24_recipe(tmp_path):
    return _write(tmp_path, "recipe.json", {"node": "CompleteBipartite", "n": 2, "m": 4})


def test_decompose_writes_valid_certificate(tmp_path, k24_recipe, capsys):
    out = tmp_path / "cert.json"
    rc = main(["decompose", "--recipe", k24_recipe, "--seed", "3", "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["odd_cycle_index"] is None
    assert sum(len(c) for c in data["cycles"]) == 8
    err = capsys.readouterr().err
    assert "cycles" in err


def test_decompose_explicit_signature(tmp_path, k24_recipe):
    sig = _write(tmp_path, "sig.json", {"odd_edges": ["a0:b0", "a0:b1"]})
    out = tmp_path / "cert.json"
    assert main(["decompose", "--recipe", k24_recipe, "--sig", sig, "--out", str(out)]) == 0


def test_decompose_rejects_odd_signature(tmp_path, k24_recipe):
    sig = _write(tmp_path, "sig.json", ["a0:b0"])
    assert main(["decompose", "--recipe", k24_recipe, "--sig", sig]) == 2


def test_decompose_k5_recipe_exits_2(tmp_path, capsys):
    recipe = _write(tmp_path, "k5.json", {"node": "CompleteMultipartite", "parts": [1, 1, 1, 1, 1]})
    assert main(["decompose", "--recipe", recipe]) == 2
    assert "five-clique-excluded" in capsys.readouterr().err


def test_parse_errors_exit_3(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["decompose", "--recipe", str(bad)]) == 3
    assert main(["decompose", "--recipe", str(tmp_path / "missing.json")]) == 3
    not_a_recipe = _write(tmp_path, "n.json", {"nonsense": 1})
    assert main(["decompose", "--recipe", not_a_recipe]) == 3


def test_verify_round_trip(tmp_path, k24_recipe):
    cert_path = tmp_path / "cert.json"
    sig = _write(tmp_path, "sig.json", [])
    assert main(["decompose", "--recipe", k24_recipe, "--sig", sig, "--out", str(cert_path)]) == 0
    g = complete_bipartite_graph(2, 4)
    graph = _write(tmp_path, "graph.json", graph_to_json(g))
    assert main(["verify", "--graph", graph, "--cert", str(cert_path)]) == 0
    cert = json.loads(cert_path.read_text())
    cert["cycles"] = cert["cycles"][1:]
    broken = _write(tmp_path, "broken.json", cert)
    assert main(["verify", "--graph", graph, "--cert", broken]) == 1


def test_oracle_and_classify_on_k5(tmp_path):
    k5 = complete_graph(5, odd_all=True)
    graph = _write(tmp_path, "k5.json", graph_to_json(k5))
    out = tmp_path / "res.json"
    assert main(["oracle", "--graph", graph, "--out", str(out)]) == 1
    assert json.loads(out.read_text()) == {"decomposable": False}
    assert main(["classify", "--graph", graph, "--out", str(out)]) == 1
    report = json.loads(out.read_text())
    assert report["verdict"] == "not"
    assert report["classes_total"] == 64 and report["classes_even"] == 32


def test_classify_k22_strongly(tmp_path):
    graph = _write(tmp_path, "k22.json", graph_to_json(complete_bipartite_graph(2, 2)))
    assert main(["classify", "--graph", graph]) == 0


def test_classify_non_eulerian_exits_2(tmp_path):
    graph = _write(tmp_path, "k4.json", graph_to_json(complete_graph(4)))
    assert main(["classify", "--graph", graph]) == 2


def test_classify_bounds_exit_5(tmp_path):
    graph = _write(tmp_path, "k7.json", graph_to_json(complete_graph(7)))
    assert main(["classify", "--graph", graph, "--max-edges", "10"]) == 5


def test_env_var_overrides_edge_bound(tmp_path, monkeypatch):
    graph = _write(tmp_path, "k7.json", graph_to_json(complete_graph(7)))
    monkeypatch.setenv("EVCYC_MAX_EDGES", "10")
    assert main(["oracle", "--graph", graph]) == 5
    monkeypatch.setenv("EVCYC_MAX_EDGES", "22")
    assert main(["oracle", "--graph", graph]) == 0


def test_fuzz_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    args = ["fuzz", "--seed", "0", "--count", "8", "--budget", "12"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    summary = json.loads(out1.read_text())
    assert summary["failures"] == 0 and len(summary["cases"]) == 8
    assert all(case["status"] == "ok" for case in summary["cases"])


def test_fuzz_rejects_bad_count():
    assert main(["fuzz", "--count", "0"]) == 2


def test_fuzz_tiny_budget_exits_2():
    assert main(["fuzz", "--count", "1", "--budget", "2"]) == 2


def test_subdivide(tmp_path):
    g = complete_graph(3)
    graph = _write(tmp_path, "k3.json", graph_to_json(g))
    profile = _write(
        tmp_path, "prof.json", {"v0:v1": 1, "v1:v2": 1, "v0:v2": 2}
    )
    out = tmp_path / "sub.json"
    assert main(["subdivide", "--graph", graph, "--profile", profile, "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data["graph"]["edges"]) == 4
    assert data["induced_signature"]["odd_edges"] == ["v0:v1", "v1:v2"]


def test_outputs_reparse(tmp_path, k24_recipe):
    # everything the CLI writes must parse back into an equal value
    cert_path = tmp_path / "cert.json"
    main(["decompose", "--recipe", k24_recipe, "--seed", "5", "--out", str(cert_path)])
    from evcyc import CycleDecomposition

    cert = CycleDecomposition.from_json(json.loads(cert_path.read_text()))
    assert json.loads(cert_path.read_text()) == cert.to_json()
