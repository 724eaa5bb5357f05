import json
import subprocess
import sys
from pathlib import Path

import pytest

from toric_endo.cli import main

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"


def run_cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "toric_endo", *argv], capture_output=True, text=True, cwd=ROOT)
    return proc.returncode, proc.stdout, proc.stderr


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_walls_json(capsys):
    code, out, _ = call(capsys, "walls", "--fan", "builtin:p2")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1 and doc["command"] == "walls"
    assert doc["exit"] == 0


def test_text_format(capsys):
    code, out, _ = call(capsys, "certify", "--fan", "builtin:p2", "--bundle", "tangent", "--degree", "2", "--format", "text")
    assert code == 0 and out.strip()
    assert not out.lstrip().startswith("{")


def test_missing_file_is_input_error(capsys, tmp_path):
    code, _, err = call(capsys, "classify-split", "--spec", str(tmp_path / "nope.json"))
    assert code == 2 and "nope.json" in err


def test_bad_json_is_input_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"bundle": ')
    code, out, err = call(capsys, "classify-split", "--spec", str(bad))
    assert code == 2
    assert json.loads(out)["result"]["error"] == "InputError"


def test_degree_one_certificate_is_input_error(capsys):
    code, out, _ = call(capsys, "certify", "--fan", "builtin:p2", "--bundle", "tangent", "--degree", "1")
    assert code == 2
    assert json.loads(out)["result"]["error"] == "DegreeTooSmall"


def test_unknown_flag_exits_2():
    code, _, err = run_cli("walls", "--fan", "builtin:p2", "--bogus")
    assert code == 2 and "--bogus" in err


def test_failed_check_exits_1(capsys):
    code, out, _ = call(capsys, "classify-split", "--spec", str(CONFIGS / "data" / "f1_out_of_space.json"))
    assert code == 1
    assert json.loads(out)["result"]["passed"] is False


def test_no_applicable_wall_reports_verdict(capsys):
    code, out, _ = call(capsys, "certify", "--fan", "builtin:p1xp1", "--bundle", "tangent", "--degree", "2")
    assert json.loads(out)["result"]["verdict"] == "no_applicable_wall"
    assert code == 1


def test_output_is_deterministic(tmp_path):
    argv = ["hirzebruch", "--n", "2", "--degree", "2", "--instances", "5", "--seed", "3"]
    first = run_cli(*argv)
    second = run_cli(*argv)
    assert first[0] == 0 and first[1] == second[1]
    out = tmp_path / "report.json"
    assert run_cli(*argv, "--out", str(out))[0] == 0
    assert out.read_text() == first[1]


def test_seed_changes_random_instances(capsys):
    argv = ["hirzebruch", "--n", "1", "--degree", "2", "--instances", "3"]
    _, a, _ = call(capsys, *argv, "--seed", "0")
    _, b, _ = call(capsys, *argv, "--seed", "1")
    assert a != b


@pytest.mark.parametrize("argv", [
    ["fan", "check", "--fan", "builtin:f2"],
    ["sections", "--fan", "builtin:p2", "--divisor", "2,0,0"],
    ["p1n-classify", "--degrees", "2,2"],
    ["chern", "verify", "--rank", "3", "--dim", "2", "--d", "2", "--q", "1"],
    ["chern", "pn-obstruction", "--n", "3"],
    ["frobenius-analyze", "--matrix", "2,0;0,2", "--fan", "builtin:p2"],
])
def test_commands_report_schema(capsys, argv):
    code, out, _ = call(capsys, *argv)
    doc = json.loads(out)
    assert doc["schema"] == 1 and doc["exit"] == code
    assert "result" in doc


def test_reproduce_configs(capsys):
    code, out, _ = call(capsys, "reproduce", "--configs", str(CONFIGS))
    doc = json.loads(out)
    assert code == 0 and doc["result"]["passed"]
    assert len(doc["result"]["runs"]) == len(list(CONFIGS.glob("*.json")))
    assert all(r["ok"] for r in doc["result"]["runs"])


def test_reproduce_empty_dir(capsys, tmp_path):
    code, _, _ = call(capsys, "reproduce", "--configs", str(tmp_path))
    assert code == 2
