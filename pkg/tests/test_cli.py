import json
import subprocess
import sys

import pytest

from padicvoa.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, *argv):
    code, out, err = call(capsys, *argv)
    return code, (json.loads(out) if out else None), (json.loads(err) if err else None)


def test_zexp_vacuum(capsys):
    code, out, _ = call_json(capsys, "zexp", "--state", "vac", "--qmax", "10")
    assert code == 0
    assert out["schema"] == "padicvoa.zexp/1"
    assert out["series"]["coeffs"] == ["1/1"] + ["0/1"] * 10


def test_zexp_fit(capsys):
    code, out, _ = call_json(capsys, "zexp", "--state", "h(-2)^2 vac", "--lift", "--fit", "4")
    assert code == 0 and out["residual_zero"]
    assert out["fit"]["coeffs"] == ["0/1", "-1/120"]
    # a fit at the wrong weight is a verified failure
    code, out, _ = call_json(capsys, "zexp", "--state", "h(-2)^2 vac", "--fit", "4")
    assert code == 1 and not out["residual_zero"]


def test_zexp_csv(capsys):
    code, out, _ = call(capsys, "zexp", "--state", "h(-1)^2 vac", "--qmax", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["n,coeff", "0,0/1", "1,2/1", "2,6/1", "3,8/1"]
    code, out, _ = call(capsys, "--format", "csv", "eisenstein", "--k", "4", "--qmax", "2")
    assert out.splitlines() == ["n,coeff", "0,1/1", "1,240/1", "2,2160/1"]


def test_axioms_virasoro(capsys):
    code, out, _ = call_json(capsys, "axioms", "--suite", "virasoro", "--degree", "8")
    assert code == 0 and out["verdict"] == "PASS" and out["failures"] == 0


@pytest.mark.parametrize("suite", ["ccr", "grading", "normcompat"])
def test_axiom_suites(capsys, suite):
    code, out, _ = call_json(capsys, "--seed", "3", "axioms", "--suite", suite, "--degree", "4")
    assert code == 0 and out["verdict"] == "PASS" and out["seed"] == 3


def test_kummer(capsys):
    code, out, _ = call_json(capsys, "kummer", "--p", "5", "--start", "6", "--steps", "3", "--qmax", "50")
    assert code == 0 and out["verdict"] == "PASS"
    assert out["chain"] == [6, 26, 126, 626]
    assert [s["gap"]["neg_exponent"] for s in out["steps"]] == ["2/1", "3/1", "4/1"]
    assert out["limit_weight"]["residue"] == 2


def test_eisenstein_star(capsys):
    code, out, _ = call_json(capsys, "eisenstein", "--k", "6", "--p", "5", "--star", "--qmax", "10")
    assert code == 0
    assert [c["residue"] for c in out["coeffs"]] == [1, 21, 18, 24, 22, 21, 17, 18, 0, 3, 18]
    code, out, _ = call_json(capsys, "eisenstein", "--k", "6", "--p", "5", "--star", "--chain", "6",
                             "--precision", "3", "--qmax", "3")
    assert code == 3 and out["shortfalls"] == [1, 2, 3]


def test_jacobi_check(capsys):
    code, out, _ = call_json(capsys, "jacobi-check", "--degree", "4", "--trials", "20", "--seed", "5")
    assert code == 0 and out["verdict"] == "PASS" and out["seed"] == 5


def test_resolvent(capsys):
    code, out, _ = call_json(capsys, "resolvent", "--p", "5", "--lambda", "1/5", "--mmax", "20")
    assert code == 0 and out["constant"]
    assert out["max"] == {"base": 5, "neg_exponent": "1/1"}
    code, out, _ = call_json(capsys, "resolvent", "--p", "5", "--lambda", "...44", "--mmax", "30")
    assert code == 3 and out["shortfalls"] == [24]
    code, _, err = call_json(capsys, "resolvent", "--p", "5", "--lambda", "2")
    assert code == 2 and err["error"] == "invalid"


def test_eigen_family_and_verify(capsys, tmp_path):
    lam = "...10110011101101011"
    code, out, _ = call(capsys, "eigen-family", "--p", "2", "--rho", "5/8", "--lambda", lam, "--steps", "6")
    assert code == 0
    fam = tmp_path / "family.json"
    fam.write_text(out)
    code, rep, _ = call_json(capsys, "eigen-verify", "--p", "2", "--rho", "5/8", "--lambda", lam,
                             "--family", str(fam))
    assert code == 0 and rep["verdict"] == "PASS" and rep["spectral_window"]
    code, rep, _ = call_json(capsys, "eigen-verify", "--p", "2", "--rho", "5/8", "--lambda", "...011",
                             "--family", str(fam))
    assert code == 3 and rep["verdict"] == "PRECISION_SHORT"
    data = json.loads(out)
    data["members"].reverse()
    fam.write_text(json.dumps(data))
    code, rep, _ = call_json(capsys, "eigen-verify", "--p", "2", "--rho", "5/8", "--lambda", lam,
                             "--family", str(fam))
    assert code == 1 and rep["verdict"] == "FAIL"


def test_eisenstein_search(capsys):
    code, out, _ = call_json(capsys, "eisenstein-search", "--p", "5", "--k", "6", "--degree", "6", "--qmax", "12")
    assert code == 0
    states = {m["state"] for m in out["matches"]}
    assert "h[-5] h[-1] vac" in states
    assert all(m["weight"] == 6 for m in out["matches"])


def test_usage_errors(capsys):
    code, _, err = call_json(capsys, "bogus")
    assert code == 2 and err["schema"] == "padicvoa.error/1" and err["error"] == "usage"
    code, _, err = call_json(capsys, "zexp", "--state", "h(-1) vac +")
    assert code == 2 and err["error"] == "parse" and err["position"] == 11
    code, _, err = call_json(capsys, "zexp", "--state", "h(-9)^4 vac")
    assert code == 2 and "degree cap" in err["message"]
    code, _, err = call_json(capsys, "--degree-cap", "40", "zexp", "--state", "h(-9)^4 vac", "--qmax", "2")
    assert code == 0
    code, _, err = call_json(capsys, "axioms", "--suite", "ccr", "--format", "csv")
    assert code == 2


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"qmax": 4, "prime": 7}))
    code, out, _ = call_json(capsys, "--config", str(cfg), "zexp", "--state", "vac")
    assert out["D"] == 4
    code, out, _ = call_json(capsys, "--config", str(cfg), "--qmax", "6", "zexp", "--state", "vac")
    assert out["D"] == 6
    code, out, _ = call_json(capsys, "--config", str(cfg), "zexp", "--state", "vac", "--qmax", "2")
    assert out["D"] == 2
    code, out, _ = call_json(capsys, "--config", str(cfg), "resolvent", "--lambda", "1/7", "--mmax", "3")
    assert out["p"] == 7


def _run_module(*argv):
    return subprocess.run([sys.executable, "-m", "padicvoa", *argv], capture_output=True, check=False)


def test_deterministic_output():
    argv = ("--seed", "7", "jacobi-check", "--degree", "4", "--trials", "15")
    first, second = _run_module(*argv), _run_module(*argv)
    assert first.returncode == 0
    assert first.stdout == second.stdout and first.stdout
    argv = ("zexp", "--state", "1/2 * h(-3) h(-1) vac - h[-2]^2 vac", "--qmax", "8")
    assert _run_module(*argv).stdout == _run_module(*argv).stdout
