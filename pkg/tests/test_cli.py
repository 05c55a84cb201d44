import contextlib
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from adicert.cli import COMMANDS, main
from adicert.corpus import bundled_names

GOLDEN = Path(__file__).parent / "golden"
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "scripts"))
from regen_golden import golden_cases  # noqa: E402

CASES = list(golden_cases())


def run(args):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(args)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("fname,args", CASES, ids=[c[0] for c in CASES])
def test_golden(fname, args):
    code, out, _ = run(args)
    assert code == 0
    assert out == (GOLDEN / fname).read_text()


def test_certify_z_mod8():
    report = json.loads(run(["certify", "-i", "z-mod8-at-2"])[1])
    assert report["verdicts"]["complete"] and report["verdicts"]["consistent"]
    assert report["status"] == "pass" and report["timing"] is None
    assert set(report) >= {"command", "instance_digest", "verdicts", "certificates", "truncation_depth",
                           "version", "timing"}


def test_snf_report(tmp_path):
    inst = tmp_path / "a.toml"
    inst.write_text('ring = "Z"\n[modules]\nA = [["2", "0"], ["0", "3"]]\n')
    report = json.loads(run(["snf", "-i", str(inst)])[1])
    assert report["verdicts"]["diagonal"] == ["1", "6"]
    assert report["certificates"]["U_times_A_times_V_equals_S"]


def test_unknown_command():
    code, out, err = run(["frobnicate", "-i", "z-mod8-at-2"])
    assert code == 1 and "unknown command" in json.loads(out)["error"]["message"]


def test_input_errors(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text('ring = "Z"\n[modules]\nM = [["t"]]\n')
    assert run(["invariants", "-i", str(bad)])[0] == 1
    assert run(["invariants", "-i", "no-such-instance"])[0] == 1
    assert run(["invariants", "-i", "z-mod8-at-2", "--module", "Q"])[0] == 1
    assert run(["ext", "-i", "z-mod8-at-2"])[0] == 1
    assert run(["invariants"])[0] == 1
    assert run(["certify", "-i", "z-mod8-at-2", "--depth", "x"])[0] == 1


def test_precondition_is_structured(tmp_path):
    inst = tmp_path / "p.toml"
    inst.write_text('ring = "Z"\n[modules]\nM = [["4"]]\n[ideals]\nI = ["2"]\n[systems]\nx = ["3"]\n')
    code, out, _ = run(["verify-3-1", "-i", str(inst)])
    assert code == 1
    assert json.loads(out)["error"]["kind"] == "PreconditionError"


def test_inconsistency_exit_code(monkeypatch):
    from adicert import cli
    monkeypatch.setitem(cli.COMMANDS, "invariants", lambda inst, opts: ({}, {}, False))
    assert run(["invariants", "-i", "z-mod8-at-2"])[0] == 2


@pytest.mark.parametrize("name", bundled_names())
def test_every_bundled_instance_runs_every_command(name):
    for cmd in COMMANDS:
        args = [cmd, "-i", name]
        if cmd in ("ext", "tensor", "verify-3-3"):
            args += ["--module", "X", "--module", "M"]
        code, out, _ = run(args)
        assert code == 0, (cmd, out[-300:])


def test_text_format_and_out_file(tmp_path):
    target = tmp_path / "r.txt"
    assert run(["certify", "-i", "z-at-2", "--format", "text", "--out", str(target)])[0] == 0
    text = target.read_text()
    assert "verdicts.complete: false" in text and "status: \"pass\"" in text


def test_console_script_determinism():
    args = [sys.executable, "-m", "adicert.cli", "certify", "-i", "f5-t2-at-t"]
    a = subprocess.run(args, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(args, capture_output=True, text=True, check=True).stdout
    assert a == b and a == (GOLDEN / "f5-t2-at-t__certify.json").read_text()


def test_options_reach_the_certifier():
    report = json.loads(run(["certify", "-i", "z-at-2", "--samples", "2", "--seed", "7"])[1])
    assert len(report["certificates"]["cond_iii"]) == 4 and report["certificates"]["seed"] == 7
