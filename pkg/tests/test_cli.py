import io
import json
import subprocess
import sys

import pytest

from longest_ap.cli import main


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_scan_stdin(capsys, monkeypatch):
    code, out, _ = run(["scan", "--input", "-", "--stat", "u"], capsys, "10101\n", monkeypatch)
    assert code == 0
    assert json.loads(out) == {"statistic": "U", "value": 3, "a": 1, "s": 2}


def test_scan_file_both_csv(tmp_path, capsys):
    f = tmp_path / "seq.txt"
    f.write_text("11001")
    code, out, _ = run(["scan", "--input", str(f), "--format", "csv"], capsys)
    assert code == 0
    assert out == "statistic,value,a,s\nU,2,1,1\nW,3,2,4\n"


def test_scan_all_zero_csv(capsys, monkeypatch):
    _, out, _ = run(["scan", "--input", "-", "--stat", "w", "--format", "csv"], capsys, "000", monkeypatch)
    assert out == "statistic,value,a,s\nW,0,,\n"


def test_scan_bad_input(capsys, monkeypatch):
    code, out, err = run(["scan", "--input", "-"], capsys, "10x1", monkeypatch)
    assert code == 2
    assert "position 3" in err and out == ""


def test_theory_table(capsys):
    code, out, _ = run(["theory", "--n", "1024", "--p", "0.5", "--r-min", "12", "--r-max", "20", "--stat", "u"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "statistic,r,intensity,cdf_approx,chen_stein_budget,lower,upper,a2_bound"
    assert len(lines) == 10
    last = lines[-1].split(",")
    assert last[1] == "20"
    assert abs(float(last[3]) - 0.98628) < 5e-6


def test_theory_json_w(capsys):
    code, out, _ = run(["theory", "--n", "10", "--p", "0.5", "--r-min", "3", "--r-max", "3", "--stat", "w", "--format", "json"], capsys)
    row = json.loads(out)["rows"][0]
    assert row["upper"] == 3.125 and row["lower"] == 0.625
    assert abs(row["a2_bound"] - 10 * 0.125 / 1.5) < 1e-11


def test_theory_bad_range(capsys):
    code, _, err = run(["theory", "--n", "10", "--p", "0.5", "--r-min", "1", "--r-max", "3"], capsys)
    assert code == 2 and "r-min" in err


def test_simulate_deterministic_across_threads(tmp_path, capsys):
    outs = []
    for threads in ("1", "3", "auto"):
        path = tmp_path / f"d{threads}.csv"
        code, _, _ = run(
            ["simulate", "--n", "128", "--p", "0.5", "--trials", "150", "--seed", "4", "--threads", threads, "--output", str(path)],
            capsys,
        )
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    assert outs[0].startswith(b"statistic,value,count\n")


def test_compare_roundtrip(tmp_path, capsys):
    dist = tmp_path / "dist.csv"
    base = ["--n", "256", "--p", "0.5", "--stat", "u"]
    run(["simulate", *base, "--trials", "300", "--seed", "9", "--output", str(dist)], capsys)
    _, fused, _ = run(["compare", *base, "--trials", "300", "--seed", "9"], capsys)
    _, reread, _ = run(["compare", *base, "--from-dist", str(dist)], capsys)
    assert fused == reread
    assert fused.splitlines()[0] == "r,empirical_cdf,theory_cdf,abs_diff,dkw_band,chen_stein_budget"


def test_compare_reads_joint_file(tmp_path, capsys):
    dist = tmp_path / "both.csv"
    run(["simulate", "--n", "256", "--p", "0.5", "--trials", "200", "--seed", "1", "--output", str(dist)], capsys)
    _, via_joint, _ = run(["compare", "--n", "256", "--p", "0.5", "--stat", "w", "--from-dist", str(dist)], capsys)
    _, fused, _ = run(["compare", "--n", "256", "--p", "0.5", "--stat", "w", "--trials", "200", "--seed", "1"], capsys)
    assert via_joint == fused


def test_compare_json(capsys):
    code, out, _ = run(["compare", "--n", "256", "--p", "0.5", "--trials", "200", "--format", "json"], capsys)
    payload = json.loads(out)
    assert code == 0
    assert payload["sup_abs_diff"] == max(r["abs_diff"] for r in payload["rows"])


def test_compare_needs_trials(capsys):
    code, _, err = run(["compare", "--n", "256", "--p", "0.5"], capsys)
    assert code == 2 and "trials" in err


def test_verify_bounds_passes(capsys):
    code, out, err = run(["verify-bounds", "--n-max", "30", "--r-max", "5", "--p-list", "0.3,0.5"], capsys)
    assert code == 0
    assert out == "check,statistic,n,r,p,lhs,rhs\n"
    assert "checks hold" in err


def test_verify_bounds_reports_failures(capsys, monkeypatch):
    from longest_ap import theory

    monkeypatch.setattr(theory, "chen_stein_budget", lambda *a: -1.0)
    code, out, _ = run(["verify-bounds", "--n-max", "6", "--r-max", "3", "--p-list", "0.5"], capsys)
    assert code == 1
    assert out.splitlines()[1].startswith("budget,")


def test_sparse_regime_case_iii(capsys):
    code, out, _ = run(["sparse-regime", "--b", "3", "--u", "4", "--n", "20000", "--trials", "50", "--seed", "2"], capsys)
    payload = json.loads(out)
    assert code == 0
    assert payload["prediction"]["candidate_set_u"] == [2, 3]
    assert payload["rows"][0]["limit_low_mass"] == 0.367879441171
    assert sum(payload["counts"]["U"].values()) == 50


def test_sparse_regime_infinite_csv(capsys):
    code, out, _ = run(
        ["sparse-regime", "--b-infinite", "--pn-rule", "inverse-log", "--n", "5000", "--trials", "20", "--format", "csv"],
        capsys,
    )
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "statistic,candidate_set,mass,low_value,empirical_low_mass,limit_low_mass"
    assert lines[2].split(",")[1].count(";") == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["sparse-regime", "--n", "1000", "--trials", "5"],
        ["sparse-regime", "--b", "3", "--b-infinite", "--n", "1000", "--trials", "5"],
        ["sparse-regime", "--b-infinite", "--n", "1000", "--trials", "5"],
        ["sparse-regime", "--b", "3.5", "--u", "1", "--n", "1000", "--trials", "5"],
    ],
)
def test_sparse_regime_usage_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err


def test_resource_guard_exit_code(capsys):
    code, _, err = run(["simulate", "--n", "100000000", "--p", "0.5", "--trials", "100000"], capsys)
    assert code == 3 and "resource guard" in err


def test_argparse_errors_exit_2():
    proc = subprocess.run([sys.executable, "-m", "longest_ap.cli", "theory", "--n", "10"], capture_output=True, text=True)
    assert proc.returncode == 2
    assert "required" in proc.stderr
    proc = subprocess.run([sys.executable, "-m", "longest_ap.cli", "simulate", "--n", "10", "--p", "0.5"], capture_output=True, text=True)
    assert proc.returncode == 2


def test_bad_threads():
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--n", "10", "--p", "0.5", "--trials", "5", "--threads", "0"])
    assert exc.value.code == 2
