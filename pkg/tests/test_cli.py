import json
import os

import pytest

from ncpencil.cli import (frac_from_str, frac_to_str, parse_category, run,
                          serialize_category)
from ncpencil.quadric import build_kronecker, f_infty_system, reduce_mod

from conftest import a2_category, dg_category


@pytest.fixture
def outdir(tmp_path, monkeypatch):
    monkeypatch.setenv("NCPENCIL_REPORT_DIR", str(tmp_path))
    monkeypatch.chdir(tmp_path)
    return tmp_path


def write_json(path, data):
    with open(path, "w") as f:
        json.dump(data, f, indent=1)
    return str(path)


def kronecker_file(outdir, name="kron.json", tamper=None):
    data = serialize_category(build_kronecker(3))
    if tamper:
        tamper(data)
    return write_json(outdir / name, data)


def test_rational_strings():
    assert frac_to_str(frac_from_str("-3/4")) == "-3/4"
    assert frac_to_str(frac_from_str("5")) == "5"
    with pytest.raises(Exception):
        frac_from_str("1.5x")


def test_round_trip_is_identity():
    for cat in (build_kronecker(3), dg_category(), a2_category(),
                f_infty_system(3, 2).carrier,
                reduce_mod(build_kronecker(4), 6)):
        data = serialize_category(cat)
        again = parse_category(data)
        assert again.mu == cat.mu
        assert again.homs == cat.homs
        assert again.units == cat.units
        assert again.modulus == cat.modulus
        assert again.variables == cat.variables
        # byte-for-byte stable re-serialization
        assert json.dumps(serialize_category(again), sort_keys=True) == \
            json.dumps(data, sort_keys=True)


def test_unit_products_may_be_omitted():
    data = serialize_category(dg_category())
    full = parse_category(data)
    data["mu"] = [e for e in data["mu"]
                  if not any(k[1].startswith("e") for k in e["inputs"])]
    assert parse_category(data).mu == full.mu


def test_check_ainf_pass_and_reports(outdir):
    f = kronecker_file(outdir)
    assert run(["check-ainf", f]) == 0
    rep = json.loads((outdir / "check_ainf.json").read_text())
    assert rep["ok"] and rep["errors"] == []
    assert (outdir / "check_ainf.txt").exists()


def test_check_ainf_exit_codes(outdir):
    bad = outdir / "bad.json"
    bad.write_text("{ not json")
    assert run(["check-ainf", str(bad)]) == 2
    missing = write_json(outdir / "m.json", {"grading": {"type": "Z"}})
    assert run(["check-ainf", missing]) == 2
    data = serialize_category(dg_category())
    # break the Leibniz rule: flip one differential sign
    for e in data["mu"]:
        if e["arity"] == 1 and e["inputs"][0][1] == "c1":
            e["coeff"] = "-1"
    f = write_json(outdir / "broken.json", data)
    assert run(["check-ainf", f]) == 1
    rep = json.loads((outdir / "check_ainf.json").read_text())
    assert not rep["ok"] and rep["errors"]


def test_cohomology_of_twisted_block(outdir):
    data = serialize_category(reduce_mod(build_kronecker(3), 4))
    data["twisted"] = {"T": {
        "summands": [["X", 1], ["X", -1], ["Y", 0], ["Y", -2]],
        "delta": [{"i": 2, "j": 0, "key": ["X,Y", "a"], "coeff": "1"},
                  {"i": 3, "j": 1, "key": ["X,Y", "a"], "coeff": "1"},
                  {"i": 3, "j": 0, "key": ["X,Y", "b"], "coeff": "1"},
                  {"i": 2, "j": 1, "key": ["X,Y", "b"], "coeff": "1"}]}}
    f = write_json(outdir / "tw.json", data)
    assert run(["cohomology", f, "--source", "X", "--target", "T"]) == 0
    rep = json.loads((outdir / "cohomology.json").read_text())
    assert rep["dims"] == {"0": 1, "2": 1}
    assert run(["cohomology", f, "--source", "T", "--target", "X"]) == 0
    rep = json.loads((outdir / "cohomology.json").read_text())
    assert rep["dims"] == {"1": 1, "3": 1}
    assert run(["cohomology", f, "--source", "nope", "--target", "X"]) == 2


def test_fibre_command(outdir):
    f = write_json(outdir / "sys.json",
                   serialize_category(f_infty_system(3, 1).carrier))
    assert run(["fibre", f, "--at", "1"]) == 0
    rep = json.loads((outdir / "fibre.json").read_text())
    assert rep["ok"] and rep["at"] == {"v": "1"}
    assert rep["hom_dims"]["X,X"] == {"0": 1, "2": 1}
    assert run(["fibre", f, "--at", "1,2"]) == 2
    plain = kronecker_file(outdir)
    assert run(["fibre", plain, "--at", "1"]) == 2


def test_transfer_command(outdir):
    f = write_json(outdir / "dg.json", serialize_category(dg_category()))
    # identity datum: the whole category, zero homotopy
    datum = {"sub": {p: [b["name"] for b in basis] for p, basis in
                     json.loads(open(f).read())["homs"].items()}, "h": []}
    d = write_json(outdir / "datum.json", datum)
    assert run(["transfer", f, d]) == 0
    rep = json.loads((outdir / "transfer.json").read_text())
    assert rep["ok"]
    got = parse_category(rep["transferred"])
    assert got.mu == dg_category().mu
    # invalid datum: drop a unit from the subspace
    datum["sub"]["0,0"] = []
    d2 = write_json(outdir / "datum2.json", datum)
    assert run(["transfer", f, d2]) == 1


def test_localise_command(outdir):
    f = write_json(outdir / "a2.json", serialize_category(a2_category()))
    assert run(["localise", f, "--invert", "b", "--lmax", "2"]) == 0
    rep = json.loads((outdir / "localise.json").read_text())
    # inverting 1 -> 2 creates a morphism back from 2 to 1 in cohomology
    # (H^0 is what stabilises; tail degrees depend on the length budget)
    assert rep["hom_dims"]["2,1"]["0"] == 1
    assert run(["localise", f, "--invert", "nope", "--lmax", "2"]) == 2


def test_popsicle_commands(outdir):
    assert run(["popsicle", "enumerate", "--dmax", "3"]) == 0
    rep = json.loads((outdir / "popsicle_enumerate.json").read_text())
    assert rep["types"] > 0 and rep["codim1_strata"] > 0
    assert run(["popsicle", "classify", "--dmax", "3"]) == 0
    lines = (outdir / "popsicle_classify.csv").read_text().splitlines()
    assert lines[0] == "type,stratum,classification,dagger,diamond,partner"
    assert len(lines) > 1
    assert run(["popsicle", "verify-cancellation", "--dmax", "3"]) == 0
    rep = json.loads((outdir / "popsicle_cancellation.json").read_text())
    assert rep["ok"] and rep["pairs"] and not rep["failures"]
    assert run(["popsicle", "classify", "--dmax", "2", "--flavoured"]) == 0
    assert run(["popsicle", "verify-cancellation", "--dmax", "3",
                "--flavoured"]) == 0


def test_case_study_command(outdir):
    assert run(["case-study", "kronecker", "--n", "3"]) == 0
    rep = json.loads((outdir / "case_study.json").read_text())
    assert rep["ok"] and all(rep["checks"].values())
    assert rep["tmu_hom_table"]["T,T"] == {"0": 1, "1": 1, "2": 1, "3": 1}
    assert run(["case-study", "kronecker", "--n", "7"]) == 2


def test_reports_are_deterministic(outdir):
    f = kronecker_file(outdir)
    assert run(["check-ainf", f]) == 0
    first = (outdir / "check_ainf.json").read_bytes()
    assert run(["check-ainf", f]) == 0
    assert (outdir / "check_ainf.json").read_bytes() == first
