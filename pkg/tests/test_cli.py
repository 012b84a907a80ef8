import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from abelchain.cli import main
from abelchain.suites import SuiteUsageError, run_suite


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hierarchy_text(capsys):
    code, out, _ = run(capsys, "hierarchy", "--family", "abel", "--order", "2", "--format", "text")
    assert code == 0
    assert out.splitlines()[0] == "x3 + 4*k*x1^2*x2 + k^2*x1^5"
    code, out, _ = run(capsys, "hierarchy", "--order", "0")
    assert out.splitlines()[0] == "x1"


def test_hierarchy_riccati_third_order(capsys):
    from abelchain.listings import published

    _, out, _ = run(capsys, "hierarchy", "--family", "riccati", "--order", "3")
    from abelchain.polycore import parse_polynomial

    assert parse_polynomial(out.splitlines()[0]) == published("riccati", 3)


def test_hierarchy_json_and_latex(capsys):
    _, out, _ = run(capsys, "hierarchy", "--order", "1", "--format", "json")
    assert json.loads(out) == {
        "schema_version": 1,
        "kind": "abel",
        "order": 1,
        "expression": "x2 + k*x1^3",
        "force": "-k*x1^3",
    }
    _, out, _ = run(capsys, "hierarchy", "--order", "1", "--format", "latex")
    assert out.startswith("x_{2} + k x_{1}^{3}")


def test_verify_darboux_order_four(capsys):
    code, out, _ = run(capsys, "verify", "--family", "abel", "--order", "4", "--suite", "darboux")
    assert code == 0
    report = json.loads(out)
    statuses = {c["name"]: c["status"] for c in report["checks"]}
    assert statuses["listing[4]"] == "documented-discrepancy"
    assert statuses["chain[4]"] == "pass"


def test_verify_lagrangian(capsys):
    code, out, _ = run(capsys, "verify", "--order", "2", "--suite", "lagrangian")
    assert code == 0
    checks = json.loads(out)["checks"]
    assert len(checks) == 8 and all(c["status"] == "pass" for c in checks)
    sym = next(c for c in checks if c["name"] == "noncartan_symmetry")
    assert sym["detail"]["energy_action"] == "-1"


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--order", "1", "--suite", "lagrangian"],
        ["verify", "--family", "riccati", "--order", "2", "--suite", "lagrangian"],
        ["verify", "--order", "1", "--suite", "integrals"],
        ["verify", "--suite", "nonsense"],
        ["verify", "--max-order", "40"],
        ["hierarchy", "--order", "-1"],
        ["hierarchy", "--order", "16"],
        ["hierarchy", "--family", "bernoulli", "--order", "1"],
        ["hierarchy"],
        ["integrate", "--order", "2", "--k", "1", "--x0", "1"],
        ["integrate", "--order", "2", "--k", "one", "--x0", "1,1"],
        ["integrate", "--order", "2", "--k", "1", "--x0", "1,nan"],
        ["integrate", "--order", "2", "--k", "1", "--x0", "1,1", "--tol", "-1"],
        ["integrate", "--order", "2", "--k", "1", "--x0", "1,1", "--method", "euler"],
        [],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "manifest:" in err


def test_integrate_writes_files(capsys, tmp_path):
    out = tmp_path / "run.csv"
    code, stdout, _ = run(
        capsys, "integrate", "--order", "3", "--k", "1", "--x0", "1,0.5,-0.5", "--t1", "1",
        "--method", "rkf45", "--tol", "1e-10", "--out", str(out),
    )
    assert code == 0
    report = json.loads(stdout)
    drifts = {i["name"]: i["max_deviation"] for i in report["drift"]["integrals"]}
    assert drifts["J_t1"] < 1e-6 and drifts["J_t2"] < 1e-6
    assert out.exists() and out.with_suffix(".drift.json").exists()
    assert out.read_text().splitlines()[0] == "t,x1,x2,x3"


def test_integrate_free_motion(capsys, tmp_path):
    out = tmp_path / "free.csv"
    code, stdout, _ = run(capsys, "integrate", "--order", "2", "--k", "0", "--x0", "1,1", "--out", str(out))
    assert code == 0
    last = out.read_text().splitlines()[-1].split(",")
    assert float(last[0]) == 1.0
    assert float(last[1]) == pytest.approx(2.0, abs=1e-12)


def test_integrate_singular_start(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, stdout, _ = run(capsys, "integrate", "--order", "2", "--k", "1", "--x0", "1,-1", "--out", str(out))
    assert code == 3
    assert json.loads(stdout)["outcome"] == "immediate-singularity"
    assert not out.exists()


def test_integrate_truncated_run_exit_3(capsys, tmp_path):
    out = tmp_path / "b.csv"
    code, stdout, _ = run(capsys, "integrate", "--order", "1", "--k", "-1", "--x0", "1", "--out", str(out))
    assert code == 3
    assert out.exists() and out.with_suffix(".drift.json").exists()
    assert json.loads(stdout)["outcome"] == "truncated"


def test_rational_k(capsys, tmp_path):
    code, stdout, _ = run(capsys, "integrate", "--order", "2", "--k", "1/2", "--x0", "1,1", "--out", str(tmp_path / "h.csv"))
    assert code == 0 and json.loads(stdout)["k"] == "1/2"


def test_determinism(capsys):
    argv = ["verify", "--order", "3", "--suite", "all", "--seed", "7"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == second[0] == 0
    assert first[1] == second[1]
    assert "wall_time_s" not in first[1]


def test_manifest_file(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("ABELCHAIN_OUT_DIR", str(tmp_path))
    code, _, err = run(capsys, "hierarchy", "--order", "2")
    manifest = json.loads((tmp_path / "manifest-hierarchy.json").read_text())
    assert manifest["schema_version"] == 1
    assert manifest["exit_code"] == code == 0
    assert manifest["version"] and "wall_time_s" in manifest
    assert manifest["args"]["order"] == 2


def test_integrate_default_output_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("ABELCHAIN_OUT_DIR", str(tmp_path))
    code, _, _ = run(capsys, "integrate", "--order", "2", "--k", "1", "--x0", "1,1")
    assert code == 0
    assert (tmp_path / "abel-n2.csv").exists()


def test_failure_exit_1(capsys, monkeypatch):
    from abelchain import cli
    from abelchain.suites import CheckResult

    monkeypatch.setattr(cli, "run_suite", lambda *a, **k: [CheckResult("darboux", "x", "fail")])
    code, out, _ = run(capsys, "verify", "--order", "2", "--suite", "darboux")
    assert code == 1 and json.loads(out)["outcome"] == "fail"


def test_suite_runner_usage():
    with pytest.raises(SuiteUsageError):
        run_suite("lagrangian", "abel", 3)
    skipped = run_suite("all", "abel", 1)
    assert {r.status for r in skipped} <= {"pass", "skipped"}
    assert any(r.status == "skipped" for r in skipped)


words = st.sampled_from(
    ["hierarchy", "verify", "integrate", "--family", "--order", "--suite", "--k", "--x0", "--format",
     "--method", "--tol", "abel", "riccati", "-3", "0", "2", "x", "1,2", "1/0", "nan", "--bogus", "all"]
)


@settings(max_examples=40, deadline=None)
@given(st.lists(words, max_size=6))
def test_exit_codes_are_in_contract(argv):
    code = main(argv)
    assert code in (0, 1, 2, 3)


@settings(max_examples=30, deadline=None)
@given(st.text(alphabet="abc,;-/.x", min_size=1, max_size=8))
def test_malformed_x0_is_usage(garbage):
    argv = ["integrate", "--order", "2", "--k", "1", "--x0", garbage]
    try:
        values = [float(p) for p in garbage.split(",")]
        ok = len(values) == 2
    except ValueError:
        ok = False
    if not ok:
        assert main(argv) == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "abelchain.cli", "hierarchy", "--order", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "x2 + k*x1^3"
