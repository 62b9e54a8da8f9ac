import json

import pytest

from gluenerve.cli import run


def out_json(capsys):
    return json.loads(capsys.readouterr().out)


def test_gen_cpt_dot(capsys):
    assert run(["gen", "cpt", "--n", "2", "--format", "dot"]) == 0
    dot = capsys.readouterr().out
    assert dot.count("->") == 6 and '"a00"' in dot


def test_gen_cart_interchange(capsys):
    assert run(["gen", "cart", "--n", "1"]) == 0
    doc = out_json(capsys)
    assert doc["type"] == "poset" and len(doc["elements"]) == 5


def test_gen_boxplus_at(capsys):
    assert run(["gen", "boxplus", "--n", "1", "--at", "0,1"]) == 0
    assert out_json(capsys)["type"] == "subnerve"
    assert run(["gen", "boxplus", "--n", "1", "--at", "0,1", "--cart"]) == 2
    assert run(["gen", "boxplus", "--n", "1", "--at", "zero"]) == 2


def test_certify_then_verify(tmp_path, capsys):
    path = tmp_path / "cert.json"
    assert run(["certify", "box-in-cpt", "--n", "1", "--emit-certificate", str(path)]) == 0
    out = capsys.readouterr().out
    assert "1 moves" in out and "[a00,a01,a11] k=1" in out
    assert run(["verify", str(path)]) == 0
    assert "accepted: 1 moves" in capsys.readouterr().out


def test_verify_rejects_tampered_certificate(tmp_path, capsys):
    path = tmp_path / "cert.json"
    assert run(["certify", "box-in-cpt", "--n", "2", "--emit-certificate", str(path)]) == 0
    doc = json.loads(path.read_text())
    doc["moves"] = doc["moves"][1:]
    path.write_text(json.dumps(doc))
    assert run(["verify", str(path)]) == 1
    assert "error:" in capsys.readouterr().err


def test_certify_boxplus_search_is_usage_error():
    assert run(["certify", "boxplus-in-cart", "--n", "1", "--method", "search"]) == 2


@pytest.mark.parametrize("suite", ["cartesianization", "structure"])
def test_laws_pass(suite, capsys):
    assert run(["laws", "--suite", suite, "--n", "1"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "pass" in out


def test_factorization_laws(capsys):
    assert run(["laws", "--suite", "factorization", "--count", "5"]) == 0
    assert "0 violations" in capsys.readouterr().out


def test_kpt_enumerate(capsys):
    assert run(["kpt", "enumerate", "--instance", "grid21-all", "--tau", "00,21"]) == 0
    doc = out_json(capsys)
    assert doc["cofiltered"] and doc["objects"] == 6


def test_kpt_without_factorization_fails(capsys):
    assert run(["kpt", "enumerate", "--instance", "no-factorization", "--tau", "00,01"]) == 1
    assert out_json(capsys)["reason"] == "empty"


def test_kart_extend(capsys):
    assert run(["kart", "extend", "--instance", "square11", "--tau", "00,01;10,11"]) == 0
    doc = out_json(capsys)
    assert doc["values"]["U[01,10]"] == "00" and doc["exact-squares-to-pullbacks"]


@pytest.mark.parametrize("mode", ["comm", "cart", "full"])
def test_glue_instance(mode, capsys):
    assert run(["glue", mode, "--instance", "square11"]) == 0
    assert out_json(capsys)["ok"]


def test_glue_broken_instance_prints_witness(capsys):
    assert run(["glue", "full", "--instance", "too-truncated"]) == 1
    err = capsys.readouterr().err
    assert "HypothesisFailed" in err and "witness:" in err


def test_glue_from_files(tmp_path, capsys):
    cat = tmp_path / "cat.json"
    cat.write_text(json.dumps({"type": "category", "kind": "poset",
                               "elements": ["b", "l", "r", "t"],
                               "covers": [["b", "l"], ["b", "r"], ["l", "t"], ["r", "t"]]}))
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"target": {"type": "category", "kind": "poset", "elements": ["0", "1"], "covers": [["0", "1"]]},
                             "objects": {"b": "0", "l": "0", "r": "1", "t": "1"}}))
    args = ["glue", "full", "--category", str(cat), "--g", str(g), "--i-max", "-1"]
    assert run(args) == 0
    assert out_json(capsys)["ok"]
    assert run(["glue", "full", "--category", str(cat), "--g", str(g)]) == 2


def test_export_roundtrip(tmp_path, capsys):
    path = tmp_path / "cpt.json"
    assert run(["gen", "cpt", "--n", "1", "--out", str(path)]) == 0
    assert run(["export", str(path), "--format", "dot"]) == 0
    assert capsys.readouterr().out.count("->") == 2


@pytest.mark.parametrize("argv", [
    [],
    ["gen"],
    ["gen", "cpt"],
    ["certify", "box-in-cpt"],
    ["glue", "full", "--instance", "nope"],
    ["verify", "/nonexistent.json"],
    ["kpt", "enumerate", "--instance", "square11"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err
