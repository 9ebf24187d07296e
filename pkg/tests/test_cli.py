from __future__ import annotations

import json
import subprocess
import sys

import pytest

from dynstab import suites
from dynstab.cli import main


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_compute_weight_unicode(capsys):
    code, out, _ = run(capsys, "compute", "weight", "--n", "2", "--k", "1", "--sigma", "1,2", "--I", "1", "--format", "unicode")
    assert code == 0
    assert out == "y(λ + t₁ - z₁ + y)(t₁ - z₂)"


def test_compute_weight_k0(capsys):
    assert run(capsys, "compute", "weight", "--n", "1", "--k", "0") == (0, "1", "")


def test_compute_xi(capsys):
    code, out, _ = run(capsys, "compute", "xi", "--n", "3", "--k", "1", "--I", "1")
    assert code == 0 and out == "(lam + y) v{1}"


def test_compute_json_is_valid(capsys):
    code, out, _ = run(capsys, "compute", "wplus", "--n", "2", "--I", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["variant"] == "plus" and "value" in data


def test_compute_kappa_and_operators(capsys):
    code, out, _ = run(capsys, "compute", "kappa", "--n", "2", "--I", "1")
    assert code == 0 and out.startswith("{1}:")
    code, out, _ = run(capsys, "compute", "loperator", "--n", "1", "--trunc", "0")
    assert code == 0 and "L~22" in out
    code, out, _ = run(capsys, "compute", "det", "--n", "2", "--trunc", "1", "--format", "json")
    assert code == 0 and json.loads(out)["n"] == 2
    code, out, _ = run(capsys, "compute", "rmatrix", "--n", "2", "--format", "latex")
    assert code == 0 and "\\lambda" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "rll", "--n", "3"),
        ("compute", "weight", "--n", "9", "--I", "1"),
        ("compute", "weight", "--n", "2", "--sigma", "1,1", "--I", "1"),
        ("compute", "weight", "--n", "2", "--k", "2", "--I", "1"),
        ("compute", "weight", "--n", "2"),
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("dynstab:")


def test_max_n_environment(capsys, monkeypatch):
    monkeypatch.setenv("DYNSTAB_MAX_N", "1")
    code, _, _ = run(capsys, "compute", "weight", "--n", "2", "--I", "1")
    assert code == 2
    code, _, _ = run(capsys, "compute", "weight", "--n", "2", "--I", "1", "--unsafe")
    assert code == 0


def test_verify_pass_exit_0(capsys):
    code, out, _ = run(capsys, "verify", "inversion", "--n", "2")
    assert code == 0
    assert out.splitlines()[-1] == "inversion n=2: 1/1 checks pass"


def test_verify_failure_exit_1(capsys, monkeypatch):
    monkeypatch.setattr(suites, "checks", lambda suite, n: [("always fails", lambda: False), ("crashes", lambda: 1 / 0)])
    code, out, _ = run(capsys, "verify", "ybe", "--n", "2")
    assert code == 1
    assert "FAIL" in out and out.splitlines()[-1].endswith("0/2 checks pass")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dynstab", "verify", "recursion", "--n", "2"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0
    assert "checks pass" in res.stdout
