import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from owdvv.cli import main

PASS_SPEC = 'variables = ["t1", "t2"]\nlambda = "p^3 + t2*p + t1"\n'
FAIL_SPEC = 'variables = ["t1", "t2"]\nlambda = "p^3 + t2*p + t1"\n[weights]\nq = ["0", "2/3"]\nd = "2/3"\n'
PARSE_ERROR_SPEC = 'variables = ["t1", "t2"]\nlambda = "p^3 + (t2*p"\n'
VERIFY_SPEC = 'variables = ["t1"]\nF = "t1^3"\nOmega = "p^2"\n'
VERIFY_OK = 'variables = ["t1"]\nF = "t1^3/6"\nOmega = "p^3/3 + t1*p"\n'
NUMERIC_SPEC = 'variables = ["t1", "t2"]\nlambda = "p^3 + t2*p + t1"\nmode = "numeric"\n[numeric]\nsamples = 2\nseed = 3\n'


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def write(tmp_path):
    def _write(text, name="spec.toml"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


def test_derive_h0_2(capsys):
    code, out, _ = run(["derive", "h0_2"], capsys)
    report = json.loads(out)
    assert code == 0 and report["status"] == "pass"
    assert report["frobenius"]["F"] == "-1/216*t2^4 + 1/6*t1^2*t2"
    assert report["printed_comparison"]["match"]
    assert report["input"]["sha256"]


def test_derive_is_byte_identical(capsys):
    first = run(["derive", "trig2"], capsys)[1]
    second = run(["derive", "trig2"], capsys)[1]
    assert first == second


def test_timings_only_on_request(capsys):
    assert "seconds" not in run(["derive", "h0_1"], capsys)[1]
    assert "seconds" in run(["derive", "h0_1", "--timings"], capsys)[1]


def test_summary_to_stderr(capsys):
    code, out, err = run(["derive", "h0_1", "--summary"], capsys)
    assert code == 0 and "main_identity" in err and json.loads(out)


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(["derive", "h0_1", "--out", str(target)], capsys)
    assert code == 0 and out == "" and json.loads(target.read_text())["status"] == "pass"


def test_spec_file_exit_codes(write, capsys):
    assert run(["derive", write(PASS_SPEC)], capsys)[0] == 0
    assert run(["derive", write(FAIL_SPEC)], capsys)[0] == 1
    code, out, err = run(["derive", write(PARSE_ERROR_SPEC)], capsys)
    assert code == 2 and "line 2" in err
    assert json.loads(out)["error"]["line"] == 2


def test_verify(write, capsys):
    code, out, _ = run(["verify", write(VERIFY_SPEC)], capsys)
    report = json.loads(out)
    assert code == 1
    statuses = {c["name"]: c["status"] for c in report["checks"]}
    assert statuses["unit_conditions"] == "fail"
    assert run(["verify", write(VERIFY_OK)], capsys)[0] == 0


def test_numeric_spec(write, capsys):
    code, out, _ = run(["derive", write(NUMERIC_SPEC)], capsys)
    report = json.loads(out)
    assert code == 0 and report["mode"] == "numeric"
    assert report["settings"]["seed"] == 3


def test_catalog_commands(capsys):
    code, out, _ = run(["catalog", "list"], capsys)
    assert code == 0 and len(json.loads(out)["entries"]) >= 7
    code, out, _ = run(["catalog", "show", "h0_n", "--n", "3"], capsys)
    assert code == 0 and json.loads(out)["params"]["n"] == 3
    assert run(["catalog", "show"], capsys)[0] == 2


def test_elliptic_check(capsys):
    code, out, _ = run(["elliptic-check", "--samples", "5", "--seed", "11"], capsys)
    report = json.loads(out)
    assert code == 0 and report["settings"]["samples"] == 5
    assert not report["printed_literal_variant"]["passed"]
    assert run(["elliptic-check", "--tol", "1e-30", "--samples", "3"], capsys)[0] == 1
    assert run(["elliptic-check", "--q-terms", "0"], capsys)[0] == 2


def test_input_errors(capsys):
    assert run(["derive", "no_such_family"], capsys)[0] == 2
    assert run(["derive", "missing.toml"], capsys)[0] == 2
    assert run(["derive", "h0_n"], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "owdvv", "catalog", "list"], capture_output=True, text=True)
    assert out.returncode == 0 and "h1_1" in out.stdout


@settings(max_examples=25)
@given(st.sampled_from(["pass", "fail", "parse"]), st.integers(0, 3))
def test_exit_code_contract(tmp_path_factory, kind, pad):
    text = {"pass": PASS_SPEC, "fail": FAIL_SPEC, "parse": PARSE_ERROR_SPEC}[kind]
    path = tmp_path_factory.mktemp("spec") / "s.toml"
    path.write_text("\n" * pad + text)
    code = _quiet_main(str(path))
    assert code == {"pass": 0, "fail": 1, "parse": 2}[kind]


def _quiet_main(path):
    import contextlib
    import io

    with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
        return main(["derive", path])


SPECS = Path(__file__).resolve().parent.parent / "specs"


@pytest.mark.parametrize("name", ["cubic.toml", "trig1.json", "quartic_numeric.toml"])
def test_shipped_specs_derive(name, capsys):
    assert run(["derive", str(SPECS / name)], capsys)[0] == 0


def test_shipped_pair_verifies(capsys):
    assert run(["verify", str(SPECS / "trig2_pair.toml")], capsys)[0] == 0
