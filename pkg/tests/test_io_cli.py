import json

import pytest

from gorcontract.cli import main
from gorcontract.cover import MalformedInput
from gorcontract.io import (
    cover_to_dict, dumps, fixture_names, function_to_dict, load_document, load_fixture,
)
from importlib import resources

DATA = resources.files("gorcontract") / "data"


def path(name):
    return str(DATA / f"{name}.json")


def test_fixture_names():
    names = fixture_names()
    assert {"ex2_9", "ex2_10", "ex2_11", "ex2_12", "ex5_5", "fig1_case1"} <= set(names)


@pytest.mark.parametrize("name", ["ex2_10", "ex2_12", "ex5_4_g2", "fig1_case3"])
def test_round_trip(name):
    T, f, lam = load_fixture(name)
    doc = cover_to_dict(T)
    if f is not None:
        doc["datum"] = function_to_dict(T, f)
    T2, f2, _ = load_document(json.loads(dumps(doc)))
    assert T2 == T
    if f is not None:
        assert f2.values == f.values and f2.edge_slopes == f.edge_slopes


def test_values_integrated_from_slopes():
    T, f, _ = load_fixture("ex2_10")
    doc = cover_to_dict(T)
    doc["datum"] = {"edge_slopes": {"e1": "0", "e2": "1", "e3": "-3/2"}}
    _, g, _ = load_document(doc)
    assert g.values == f.values


@pytest.mark.parametrize("patch", [
    {"colour": "red"},
    {"genus": "two"},
    {"edges": [{"id": "e", "ends": ["v1"]}]},
    {"edges": [{"id": "e", "ends": ["v1", "v2"], "ramified": True, "length": 0.5}]},
    {"datum": {"edge_slopes": {"e": "1/3"}}},
    {"datum": {"values": {}, "extra": 1}},
])
def test_malformed_documents(patch):
    T, _, _ = load_fixture("fig1_case1")
    doc = {**cover_to_dict(T), **patch}
    with pytest.raises(MalformedInput):
        load_document(doc)


def test_bad_json_text():
    with pytest.raises(MalformedInput):
        load_document("{not json")


def test_cli_contract_text(capsys):
    assert main(["contract", path("ex2_10")]) == 0
    out = capsys.readouterr().out
    assert "u^2 - s1^2 - s2^3" in out and "s1*s2" in out and "ell: 2" in out


def test_cli_validate_and_solve(capsys):
    assert main(["validate", path("fig1_case4")]) == 0
    assert "ok: yes" in capsys.readouterr().out
    assert main(["solve", "--support", "v1", path("fig1_case1")]) == 0
    assert "slope -3/2" in capsys.readouterr().out


def test_cli_solve_json_round_trips(capsys, tmp_path):
    assert main(["solve", "--support", "v1", "--format", "json", path("fig1_case1")]) == 0
    emitted = capsys.readouterr().out
    doc = tmp_path / "solved.json"
    doc.write_text(emitted)
    assert main(["contract", "--format", "json", str(doc)]) == 0
    first = capsys.readouterr().out
    assert main(["contract", "--format", "json", path("fig1_case1")]) == 0
    assert capsys.readouterr().out == first


def test_cli_exit_codes(capsys, tmp_path):
    assert main(["contract", "--strict", path("ex2_12")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"genus": 2, "foo": 1}')
    assert main(["validate", str(bad)]) == 2
    assert main(["validate", str(tmp_path / "missing.json")]) == 2
    assert main(["contract", path("ex5_5")]) == 2  # no datum block
    assert main(["contract", "--level", "1", path("ex5_5")]) == 2
    assert main(["solve", path("ex2_10")]) == 2
    parity = tmp_path / "parity.json"
    T, _, _ = load_fixture("fig1_case2")
    doc = cover_to_dict(T)
    doc["edges"][0]["ramified"] = True
    parity.write_text(json.dumps(doc))
    assert main(["validate", str(parity)]) == 1
    assert "parity" in capsys.readouterr().out


def test_cli_levels(capsys):
    assert main(["levels", "--format", "json", path("ex5_5")]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["depth"] == 1
    last = rep["per_level"][-1]
    assert last["level"] == -1
    assert last["checklist"] == {"reduced": True, "no_ribbons": True, "genus_preserved": True}


def test_cli_singularities_and_dot(capsys, tmp_path):
    assert main(["singularities", "--format", "json", path("ex2_10")]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert list(rep) == ["validation", "charts", "certificates"]
    assert rep["charts"][0]["dualizing_pullback"] == [["q1", 2], ["q1bar", 2], ["q2", 4]]
    assert main(["contract", "--format", "dot", path("ex2_10")]) == 0
    dot = capsys.readouterr().out
    assert dot.startswith("graph Pbar {") and "doublecircle" in dot
    assert main(["validate", "--format", "dot", path("ex2_10")]) == 0
    assert "color=blue" in capsys.readouterr().out
    out = tmp_path / "rep"
    assert main(["report", "--out", str(out), path("ex2_12")]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["cover.dot", "pbar.dot", "report.json", "target.dot"]


def test_report_section_order(capsys):
    assert main(["contract", "--format", "json", path("ex2_10")]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert list(rep) == ["validation", "profile", "contraction", "charts", "certificates", "audit"]
