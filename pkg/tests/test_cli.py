import io
import json

import pydot
import pytest

from stacked_codes.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from stacked_codes.export import read_code_file


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_build(tmp_path):
    path = tmp_path / "c.json"
    code, text = run("build", "--d", "3", "--out", str(path))
    assert code == EXIT_OK and "n=7" in text and "stacked n=15" in text
    loaded = read_code_file(path)
    assert loaded.code.n == 7 and loaded.stacked.n == 15
    code, _ = run("build", "--d", "5", "--out", str(path))
    assert read_code_file(path).stacked.n == 77


def test_verify_d3_json():
    code, text = run("verify", "--d", "3", "--report", "json")
    assert code == EXIT_OK
    rep = json.loads(text)
    assert rep["ok"] and rep["config"]["d"] == 3 and rep["config"]["seed"] == 0
    assert all(c["status"] == "pass" for c in rep["checks"])
    assert all(c["anchor"] for c in rep["checks"])


@pytest.mark.parametrize("argv", [("verify", "--d", "4"), ("verify",), ("bogus",), ("distance", "--d", "3", "--wmax", "0")])
def test_usage_errors(argv):
    assert run(*argv)[0] == EXIT_USAGE


def test_distance_report():
    code, text = run("distance", "--d", "5", "--wmax", "4", "--report", "json")
    assert code == EXIT_OK
    rep = json.loads(text)
    assert rep["distance_claim"] == "none below 5" and rep["complete"]
    assert rep["config"]["strategy"] == "pruned"


def test_distance_budget_exit():
    assert run("distance", "--d", "5", "--strategy", "exhaustive", "--budget", "1000")[0] == EXIT_BUDGET


def test_protocol_d3_with_error():
    code, text = run("protocol", "--d", "3", "--seed", "7", "--error", "Z@3", "--report", "json")
    assert code == EXIT_OK
    rep = json.loads(text)
    (r,) = rep["runs"]
    assert r["corrected"] and r["fidelity"] >= 1 - 1e-10
    assert rep["config"]["error"] == "Z@3"


def test_protocol_is_deterministic():
    a = run("protocol", "--d", "3", "--seed", "2", "--runs", "2")
    b = run("protocol", "--d", "3", "--seed", "2", "--runs", "2")
    assert a == b and a[0] == EXIT_OK


def test_protocol_bad_error_spec():
    assert run("protocol", "--d", "3", "--error", "Z@99")[0] == EXIT_USAGE


def test_protocol_uncorrectable_error_fails():
    # Weight-2 error at d=3 is beyond the decoder.
    code, _ = run("protocol", "--d", "3", "--error", "Z@0,Z@1")
    assert code == EXIT_FAIL


def test_export_dot_parses():
    code, text = run("export", "--d", "3", "--format", "dot")
    assert code == EXIT_OK
    assert pydot.graph_from_dot_data(text)


@pytest.mark.parametrize("fmt,target", [("svg", "layout"), ("dot", "dual"), ("ascii", "lattice"), ("json", "lattice")])
def test_export_formats(tmp_path, fmt, target):
    out = tmp_path / f"x.{fmt}"
    code, _ = run("export", "--d", "5", "--format", fmt, "--target", target, "--out", str(out))
    assert code == EXIT_OK and out.read_text()


def test_export_bad_combination():
    assert run("export", "--d", "3", "--format", "ascii", "--target", "dual")[0] == EXIT_USAGE
