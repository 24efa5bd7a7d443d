"""Command-line interface: outputs, formats, exit codes and determinism."""
import json
import re
import subprocess
import sys

import pytest

from rmt_lab import cli
from rmt_lab._util import NumericalError


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_exact_perm_lis_text(capsys):
    rc, out, _ = run(capsys, "exact", "perm-lis", "--n", "3", "--k", "2")
    assert rc == 0
    assert out.strip() == "5/6"


def test_exact_perm_lis_json(capsys):
    rc, out, _ = run(capsys, "exact", "perm-lis", "--n", "3", "--k", "2", "--format", "json")
    assert rc == 0
    assert json.loads(out) == {"k": 2, "n": 3, "quantity": "P(L<=k)", "value": "5/6"}


def test_exact_perm_lis_csv_full_cdf(capsys):
    rc, out, _ = run(capsys, "exact", "perm-lis", "--n", "3", "--format", "csv")
    assert rc == 0
    rows = out.strip().splitlines()
    assert rows[0] == "k,cdf"
    # P(L <= k) for n = 3: 0, 1/6, 5/6, 1
    vals = dict(r.split(",") for r in rows[1:])
    assert vals["1"] == "1/6" and vals["2"] == "5/6" and vals["3"] == "1/1"


def test_config_echo_on_stderr(capsys):
    _, _, err = run(capsys, "exact", "perm-lis", "--n", "3", "--k", "2")
    cfg = json.loads(err.strip().splitlines()[-1])
    assert cfg["n"] == 3 and cfg["k"] == 2


def test_tw_both_methods_agree(capsys):
    rc, out, _ = run(capsys, "tw", "--x", "-2", "--method", "both", "--format", "json")
    assert rc == 0
    rec = json.loads(out)
    if isinstance(rec, list):
        rec = rec[0]
    assert abs(rec["fredholm"] - rec["painleve"]) < 1e-6


def test_out_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    rc, out, _ = run(capsys, "exact", "perm-lis", "--n", "3", "--k", "2", "--format", "json",
                     "--out", str(path))
    assert rc == 0 and out == ""
    assert json.loads(path.read_text())["value"] == "5/6"


def test_missing_required_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["exact", "perm-lis"])
    assert exc.value.code == 2
    assert "--n" in capsys.readouterr().err


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["exact", "perm-lis", "--n", "3", "--bogus"])
    assert exc.value.code == 2


def test_invalid_value_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["exact", "perm-lis", "--n", "-1"])
    assert exc.value.code == 2


def test_numerical_failure_exit_3(capsys):
    # An unreachable tolerance makes the gap quadrature fail to converge.
    rc, out, _ = run(capsys, "gap", "--family", "hermite", "--n", "3", "--x", "0.5", "--tol", "1e-30")
    assert rc == 3
    rec = json.loads(out)
    assert "error" in rec and isinstance(rec["diagnostics"], dict)


def test_numerical_failure_from_patched_routine(capsys, monkeypatch):
    def boom(*a, **k):
        raise NumericalError("forced", {"where": "test"})

    import rmt_lab.tracy_widom as tw

    monkeypatch.setattr(tw, "tw_cdf_fredholm", boom)
    rc, out, _ = run(capsys, "tw", "--x", "0", "--method", "fredholm")
    assert rc == 3
    assert json.loads(out)["error"] == "forced"


def test_check_exact_suite(capsys):
    rc, out, _ = run(capsys, "check", "--suite", "exact")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines and all(l.startswith("PASS") for l in lines)


def test_check_failure_returns_1(capsys, monkeypatch):
    from rmt_lab import checks

    monkeypatch.setitem(checks.SUITES, "exact", lambda: [("always fails", False, "forced")])
    rc, out, _ = run(capsys, "check", "--suite", "exact")
    assert rc == 1
    assert out.startswith("FAIL")


def test_help_has_no_literature_references():
    texts = []
    res = subprocess.run([sys.executable, "-m", "rmt_lab.cli", "--help"], capture_output=True, text=True)
    texts.append(res.stdout)
    for sub in ("exact", "toeplitz", "fredholm", "gap", "tw", "simulate", "residual", "check"):
        res = subprocess.run([sys.executable, "-m", "rmt_lab.cli", sub, "--help"],
                             capture_output=True, text=True)
        assert res.returncode == 0, res.stderr
        texts.append(res.stdout)
    blob = "\n".join(texts)
    assert not re.search(r"(?i)\b(eq\.|equation \(|section \d|theorem \d|\[\d+\])", blob)


def test_simulate_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "rmt_lab.cli", "simulate", "lpp", "--p", "2", "--q", "2",
           "--xi", "0.3", "--samples", "1000", "--seed", "42"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout and len(a.stdout) > 0
    rec = json.loads(a.stdout)
    assert rec["seed"] == 42 and rec["n_samples"] == 1000
