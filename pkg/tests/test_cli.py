import json

import pytest

from chowfilt.cli import main
from chowfilt.scenario import bundled_path


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


@pytest.mark.parametrize("name", ["psi2_one_curve", "genus2", "elliptic_vanishing", "empty_checks"])
def test_bundled_scenarios_pass(capsys, name):
    code, out = run(capsys, "run", name)
    assert code == 0, out.out


def test_validation_error_exit_code(capsys):
    code, out = run(capsys, "validate", str(bundled_path("bad_trace_table")))
    assert code == 2
    assert "tr-res" in out.err


def test_parse_error_exit_code(capsys, tmp_path):
    p = tmp_path / "x.json"
    p.write_text("[1, 2")
    code, out = run(capsys, "run", str(p))
    assert code == 2 and "x.json:1:" in out.err


def test_failing_check_exit_code(capsys, tmp_path):
    data = json.loads(bundled_path("genus2").read_text())
    data["checks"] = [{"check": "certify", "input": "generator", "r": 4, "expect": "Certified"}]
    p = tmp_path / "g.json"
    p.write_text(json.dumps(data))
    code, out = run(capsys, "run", str(p))
    assert code == 1 and "[fail] certify" in out.out


def test_unknown_is_not_a_failure(capsys, tmp_path):
    data = json.loads(bundled_path("genus2").read_text())
    data["checks"] = [{"check": "certify", "input": "generator", "r": 4}]
    p = tmp_path / "g.json"
    p.write_text(json.dumps(data))
    code, out = run(capsys, "run", str(p))
    assert code == 0 and "[unknown] certify" in out.out


def test_report_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "run", "psi2_one_curve", "--report", str(a), "--quiet")
    run(capsys, "run", "psi2_one_curve", "--report", str(b), "--quiet")
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["status"] == "pass" and rep["seed"] == 43


def test_quiet(capsys):
    code, out = run(capsys, "genus2", "--quiet")
    assert code == 0 and out.out == ""


def test_normalize(capsys):
    code, out = run(capsys, "normalize", "{(-y1, 0), (0, -y1), (0, y3)}@1", "--scenario", "genus2")
    assert code == 0 and out.out.strip() == "{y1_J1, y1_A, y3_A}@1"


def test_normalize_parse_error(capsys):
    code, out = run(capsys, "normalize", "{(y9, 0)}@1", "--scenario", "genus2")
    assert code == 2


@pytest.mark.parametrize("cmd", ["phi", "psi", "roundtrip"])
def test_random_commands(capsys, cmd):
    code, out = run(capsys, cmd, "--r", "2", "--d", "2", "--cases", "5", "--seed", "3")
    assert code == 0


def test_vanish(capsys):
    assert run(capsys, "vanish", "--r", "3", "--g", "1", "--cases", "10")[0] == 0
    code, out = run(capsys, "vanish", "--r", "4", "--g", "2", "--cases", "10")
    assert code == 0 and "axiom-cited" in out.out
    assert run(capsys, "vanish", "--r", "2", "--g", "1")[0] == 2


def test_timing_flag_adds_seconds(capsys, tmp_path):
    p = tmp_path / "t.json"
    run(capsys, "run", "empty_checks", "--timing", "--report", str(p))
    assert "seconds" in json.loads(p.read_text())
