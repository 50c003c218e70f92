import io
import json
import subprocess
import sys

import pytest

from asymclone.cli import fmt_float, run


def call(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        old, sys.stdin = sys.stdin, io.StringIO(stdin)
    try:
        code = run(list(argv), out, err)
    finally:
        if stdin is not None:
            sys.stdin = old
    return code, out.getvalue(), err.getvalue()


def test_solve_json():
    code, out, _ = call("solve", "--task", "universal", "--n", "2", "--alpha", "0.8,0.2")
    assert code == 0
    doc = json.loads(out)
    assert doc["fidelity"] == 0.907036751698
    assert doc["per_clone"] == [0.990241781131, 0.574216633962]
    assert doc["degeneracy"] == 2
    assert doc["task"]["alpha"] == [0.8, 0.2]


def test_solve_csv():
    code, out, _ = call("solve", "--task", "chsh", "--alpha", "0.5,0.5", "--out", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("alpha_1,alpha_2,F_1,F_2,fidelity")
    assert len(lines) == 2


def test_round_trip_is_exact(tmp_path):
    _, first, _ = call("solve", "--task", "state-dependent", "--gamma", "0.1", "--n", "3",
                       "--alpha", "0.5,0.3,0.2")
    path = tmp_path / "rep.json"
    path.write_text(first)
    _, again, _ = call("solve", "--task-json", str(path))
    assert again == first
    _, piped, _ = call("solve", "--task-json", "-", stdin=first)
    assert piped == first


def test_sweep_csv_rows():
    code, out, _ = call("sweep", "--task", "universal", "--n", "2", "--grid", "101")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 102
    assert lines[0] == "alpha_1,alpha_2,F_1,F_2,p_1,p_2,slack"
    assert lines[-1] == "1,0,1,0.5,1,0.25,0"


def test_sweep_workers_identical():
    args = ("sweep", "--task", "universal", "--d", "3", "--n", "3", "--grid", "4",
            "--seed", "7", "--out", "json")
    assert call(*args)[1] == call(*args, "--workers", "2")[1]


def test_gamma_and_distributions(tmp_path):
    assert call("gamma", "--dist", "preset:uniform-sphere")[1] == "0.166666666667\n"
    code, out, _ = call("validate-dist", "--dist", "preset:equator")
    assert code == 0 and json.loads(out)["valid"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"knots": [[0, 1.0], [3.14159, 1.0]]}))
    code, out, _ = call("validate-dist", "--dist", str(bad))
    assert code == 1 and not json.loads(out)["normalized"]


def test_economy_command():
    code, out, _ = call("economy", "--task", "universal", "--d", "3", "--n", "2",
                        "--alpha", "0.6,0.4", "--with-state")
    doc = json.loads(out)
    assert code == 0
    assert doc["classification"] == "ancilla" and doc["ancilla_dim"] == 3
    assert len(doc["witness"]["states"]) == 3


def test_verify_command():
    code, out, _ = call("verify", "--suite", "chsh", "--samples", "3")
    assert code == 0 and json.loads(out)["passed"]


def test_verify_failure_exits_2(monkeypatch):
    from asymclone import cli
    from asymclone.verify import Check
    monkeypatch.setattr(cli, "run_suite", lambda *a: [Check("x", False, 1.0, 0.0, 1)])
    code, _, err = call("verify")
    assert code == 2 and "x" in err


@pytest.mark.parametrize("argv", [
    [],
    ["solve"],
    ["solve", "--task", "universal"],
    ["solve", "--task", "universal", "--n", "2", "--alpha", "0.7,0.7"],
    ["solve", "--task", "universal", "--n", "2", "--alpha", "a,b"],
    ["solve", "--task", "state-dependent", "--n", "2"],
    ["solve", "--task", "universal", "--n", "2", "--gamma", "0.1"],
    ["solve", "--task", "many-to-n", "--n", "3"],
    ["solve", "--task", "universal", "--n", "2", "--method", "nope"],
    ["sweep", "--task", "universal", "--n", "2", "--grid", "0"],
    ["gamma", "--dist", "preset:unknown"],
    ["--precision", "40", "gamma", "--dist", "preset:equator"],
])
def test_usage_errors_exit_1(argv):
    code, out, err = call(*argv)
    assert code == 1 and err.startswith("error:") and err.count("\n") == 1


def test_fmt_float():
    assert fmt_float(1e-13) == 0.0
    assert fmt_float(0.1234567890123456) == 0.123456789012


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "asymclone", "gamma", "--dist",
                          "preset:equator"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "0.25"
