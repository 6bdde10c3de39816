from __future__ import annotations

import json
import subprocess
import sys

import pytest

from tconvex.cli import exit_code, main
from tconvex.corpus import corpus_candidates
from tconvex.report import dump_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _write_candidate(tmp_path, name):
    path = tmp_path / f"{name}.json"
    path.write_text(dump_json(corpus_candidates()[name].to_json()))
    return str(path)


def test_cells(capsys):
    code, out, err = run(capsys, "cells", "x^2 < t")
    assert code == 0
    rep = json.loads(out)
    assert rep["count"] == 1
    assert rep["cells"][0]["kind"] == "interval"
    assert rep["cells"][0]["data"]["a"] == "-t^(1/2)"
    assert "cells: ok" in err


def test_quiet_suppresses_summary(capsys):
    code, out, err = run(capsys, "normal-form", "x = 2", "--quiet")
    assert code == 0 and err == ""
    assert json.loads(out)["normal_form"]["centers"] == ["0", "2"]


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "x*y", "--at", "x=1+t; y=1-t")
    assert code == 0
    assert json.loads(out)["value"] == "1 - t^2"


def test_jp_check_json(tmp_path, capsys):
    f = tmp_path / "f.json"
    f.write_text(json.dumps({"f": "x*y", "domain": "rv(x) = 1 & rv(y) = 1"}))
    code, out, _ = run(capsys, "jp-check", str(f), "--pairs", "10000")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "holds"
    assert rep["pairs"] == 10000
    num, _, den = rep["min_margin"].partition("/")
    assert float(num) / float(den or 1) > 0


def test_risometry_violation(capsys):
    code, out, _ = run(capsys, "risometry", "2*x", "O")
    assert code == 1
    assert "violating_pair" in json.loads(out)


def test_tstrat_verify_exit_codes(tmp_path, capsys):
    code, out, _ = run(capsys, "tstrat-verify", _write_candidate(tmp_path, "cross"), "--balls", "8")
    assert code == 0
    code, out, _ = run(capsys, "tstrat-verify", _write_candidate(tmp_path, "cross-no-origin"),
                       "--balls", "8")
    assert code == 1 and json.loads(out)["verdict"] == "fail"


def test_tangent_cone_direction(capsys):
    code, out, _ = run(capsys, "tangent-cone", "y^2 - x^3", "0,0", "--direction=-1,0")
    assert code == 1
    code, out, _ = run(capsys, "tangent-cone", "y^2 - x^3", "0,0", "--direction=1,0")
    rep = json.loads(out)
    assert code == 0 and rep["lowest_form"] == "y^2"
    assert rep["membership"]["status"] == "found"


def test_whitney_cusp(tmp_path, capsys):
    path = _write_candidate(tmp_path, "whitney-cusp")
    code, out, _ = run(capsys, "whitney", path, "--upper", "2", "--lower", "1", "--point", "0,0,0")
    rep = json.loads(out)
    assert code == 1 and rep["reports"][0]["b"] == "fails"


def test_bad_json_diagnostic(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vars": ["x"],\n "strata": [}')
    code, out, err = run(capsys, "tstrat-verify", str(bad))
    assert code == 2 and out == ""
    assert f"{bad}:2:" in err


def test_bad_formula_in_candidate(tmp_path, capsys):
    obj = corpus_candidates()["axis"].to_json()
    obj["strata"][2]["pieces"][0] = "y != 0 & x^"
    path = tmp_path / "cand.json"
    path.write_text(json.dumps(obj))
    code, _, err = run(capsys, "tstrat-verify", str(path))
    assert code == 2
    assert "$.strata[2].pieces[0]" in err and "position" in err


def test_bad_argument(capsys):
    code, _, err = run(capsys, "cells", "x^2 <")
    assert code == 2 and "error:" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "tstrat-verify", "/nonexistent/cand.json")
    assert code == 2


def test_exit_code_table():
    assert exit_code("holds") == exit_code("necessary-conditions-pass") == exit_code("found") == 0
    assert exit_code("violated") == exit_code("fail") == exit_code("not-found-within-budget") == 1
    assert exit_code("inconsistent") == 1
    assert exit_code("precondition-error") == 2


def test_output_is_deterministic(capsys):
    argv = ["risometry", "x + t*x^2", "O", "--pairs", "200", "--seed", "4"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tconvex", "cells", "0 < x & x < 1", "--quiet"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["cells"][0]["kind"] == "interval"
