"""End-to-end tests for the command line interface."""

import csv
import json
import math
import os
import subprocess
import sys

import numpy as np

from tsallisq import SeededSampler, random_mixed, save_state_file, w

CLI = [sys.executable, "-m", "tsallisq.cli"]


def run_cli(args, env_extra=None):
    env = dict(os.environ)
    env.setdefault("TSALLISQ_THREADS", "1")
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, env=env, timeout=300
    )


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def fmt17(value):
    return format(float(value), ".17g")


def test_critical_report(tmp_path):
    out = tmp_path / "crit.json"
    res = run_cli(["critical", "--out", str(out), "--no-plot"])
    assert res.returncode == 0
    report = json.loads(out.read_text())
    assert abs(report["qc1"]["value"] - (5 - math.sqrt(13)) / 2) < 1e-9
    assert abs(report["qc2"]["value"] - (5 + math.sqrt(13)) / 2) < 1e-9
    assert 0.64 < report["qc3"]["value"] < 0.66
    assert 4.60 < report["qc4"]["value"] < 4.70
    assert abs(report["qc3"]["defining_residual"]) <= 1e-9
    assert abs(report["qc4"]["defining_residual"]) <= 1e-9
    assert 0.626 < report["p_2"]["value"] < 0.628
    assert report["p_1"]["value"] == 0.0
    assert report["p_1"]["defining_residual"] == 0.0


def test_curves_csv_and_plot(tmp_path):
    out = tmp_path / "curve.csv"
    res = run_cli(
        [
            "curves", "d2tq", "--q-min", "0.52", "--q-max", "0.69",
            "--q-steps", "25", "--out", str(out),
        ]
    )
    assert res.returncode == 0
    rows = read_rows(out)
    assert len(rows) == 25
    assert list(rows[0].keys()) == ["q", "x"]
    xs = [float(r["x"]) for r in rows]
    assert all(b > a for a, b in zip(xs, xs[1:]))
    assert out.with_suffix(".png").exists()
    # Values are written with full round-trip precision.
    for r in rows[:5]:
        assert fmt17(r["x"]) == r["x"]


def test_curves_no_bracket_region_exits_3(tmp_path):
    out = tmp_path / "none.csv"
    res = run_cli(
        [
            "curves", "d2tq", "--q-min", "0.75", "--q-max", "0.9",
            "--q-steps", "10", "--out", str(out), "--no-plot",
        ]
    )
    assert res.returncode == 3


def test_curves_bad_range_is_usage_error(tmp_path):
    res = run_cli(
        [
            "curves", "d2tq", "--q-min", "1.5", "--q-max", "2.5",
            "--q-steps", "10", "--out", str(tmp_path / "x.csv"), "--no-plot",
        ]
    )
    assert res.returncode == 1


def test_surface_grid_values(tmp_path):
    out = tmp_path / "surf.csv"
    res = run_cli(
        [
            "surface", "--x-steps", "5", "--q-steps", "4",
            "--out", str(out), "--no-plot",
        ]
    )
    assert res.returncode == 0
    rows = read_rows(out)
    assert len(rows) == 20
    table = {(r["x"], r["q"]): float(r["F"]) for r in rows}
    assert abs(table[("0.5", "2")] - 0.5) < 1e-12
    assert abs(table[("0.5", "3")] - 9.0 / 8.0) < 1e-12
    assert abs(table[("0", "2")] - 0.125) < 1e-12
    assert abs(table[("1", "2")] - 0.5) < 1e-12
    assert abs(table[("1", "4")] - 0.6875) < 1e-12
    assert min(table.values()) >= -1e-9


def test_indicator_columns(tmp_path):
    out = tmp_path / "ind.csv"
    res = run_cli(
        [
            "indicator", "--q", "0.8", "--q", "1.4", "--p-steps", "21",
            "--out", str(out), "--no-plot",
        ]
    )
    assert res.returncode == 0
    rows = read_rows(out)
    assert len(rows) == 42
    assert list(rows[0].keys()) == ["p", "q", "tau_q", "three_tangle"]
    taus = [float(r["tau_q"]) for r in rows]
    assert min(taus) > 0.0
    tangles = [float(r["three_tangle"]) for r in rows if float(r["q"]) == 0.8]
    assert len(tangles) == 21
    assert min(tangles) < 0.0 and max(tangles) > 0.0


def test_sweep_deterministic_across_workers(tmp_path):
    out1 = tmp_path / "s1.csv"
    out2 = tmp_path / "s2.csv"
    base = [
        "sweep", "stqe", "--samples", "30", "--qubits", "3", "--seed", "7",
        "--q", "2.0", "--q", "3.0", "--no-plot",
    ]
    r1 = run_cli(base + ["--out", str(out1)], {"TSALLISQ_THREADS": "1"})
    r2 = run_cli(base + ["--out", str(out2)], {"TSALLISQ_THREADS": "2"})
    assert r1.returncode == 0 and r2.returncode == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_sweep_summary_and_rows(tmp_path):
    out = tmp_path / "sweep.csv"
    res = run_cli(
        [
            "sweep", "stqe", "--samples", "25", "--qubits", "3",
            "--seed", "11", "--q", "2.0", "--out", str(out), "--no-plot",
        ]
    )
    assert res.returncode == 0
    rows = read_rows(out)
    assert len(rows) == 25
    assert min(float(r["residual"]) for r in rows) > -1e-10
    summary = json.loads((tmp_path / "sweep_summary.json").read_text())
    assert summary["records"] == 25
    assert summary["violations"] == 0
    assert summary["min_residual"] > -1e-10
    assert summary["argmin_state"].startswith("s")


def test_sweep_w_injection_saturates_ckw(tmp_path):
    out = tmp_path / "ckw.csv"
    res = run_cli(
        [
            "sweep", "ckw", "--samples", "5", "--qubits", "3", "--seed", "3",
            "--inject-w", "--out", str(out), "--no-plot",
        ]
    )
    assert res.returncode == 0
    rows = read_rows(out)
    assert len(rows) == 5
    assert abs(float(rows[0]["residual"])) <= 1e-10


def test_sweep_violation_exit_and_artifacts(tmp_path):
    out = tmp_path / "viol.csv"
    res = run_cli(
        [
            "sweep", "ckw", "--samples", "4", "--qubits", "3", "--seed", "3",
            "--inject-w", "--tol=-1e-3", "--out", str(out), "--no-plot",
        ]
    )
    # The W state saturates the bound, so a negative tolerance flags it.
    assert res.returncode == 2
    summary = json.loads((tmp_path / "viol_summary.json").read_text())
    assert summary["violations"] >= 1
    assert "first_violation" in summary
    offender = tmp_path / "viol.violation.json"
    assert offender.exists()
    payload = json.loads(offender.read_text())
    assert payload["n_qubits"] == 3


def test_sweep_polygamy_direction(tmp_path):
    out = tmp_path / "poly.csv"
    res = run_cli(
        [
            "sweep", "mupolygamy", "--mu=-1.0", "--samples", "40",
            "--qubits", "3", "--seed", "5", "--q", "2.0",
            "--out", str(out), "--no-plot",
        ]
    )
    assert res.returncode == 0
    rows = read_rows(out)
    kept = [r for r in rows if r["note"] != "skipped:tiny-base"]
    assert len(kept) > 20
    assert max(float(r["residual"]) for r in kept) < 1e-10


def test_oracle_gap_bounds(tmp_path):
    out = tmp_path / "oracle.csv"
    res = run_cli(
        [
            "oracle", "--samples", "3", "--rank", "2", "--q", "2.0",
            "--restarts", "6", "--seed", "21", "--out", str(out), "--no-plot",
        ]
    )
    assert res.returncode == 0
    rows = read_rows(out)
    assert len(rows) == 3
    for r in rows:
        gap = float(r["gap"])
        assert -1e-9 <= gap <= 5e-3
        assert fmt17(r["roof"]) == r["roof"]


def test_state_report_for_w(tmp_path):
    path = tmp_path / "w3.json"
    save_state_file(str(path), w(3))
    out = tmp_path / "w3_report.json"
    res = run_cli(["state", str(path), "--q", "2.0", "--out", str(out), "--no-plot"])
    assert res.returncode == 0
    report = json.loads(out.read_text())
    assert report["kind"] == "pure"
    assert report["n_qubits"] == 3
    pair = report["pairwise_concurrence"]["0-1"]
    assert abs(pair - 2.0 / 3.0) < 1e-10
    assert abs(report["three_tangle"]) < 1e-10
    assert report["violations"] == []


def test_state_report_for_mixed(tmp_path):
    rho = random_mixed(2, 2, SeededSampler(9, 0))
    path = tmp_path / "mixed.json"
    save_state_file(str(path), rho)
    out = tmp_path / "mixed_report.json"
    res = run_cli(["state", str(path), "--q", "2.0", "--out", str(out), "--no-plot"])
    assert res.returncode == 0
    report = json.loads(out.read_text())
    assert report["kind"] == "mixed"
    assert "0-1" in report["pairwise_concurrence"]
    assert "T_q" in report


def test_state_malformed_file_exits_1(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"kind": "pure", "n_qubits": 1, "amplitudes": [[1.0, 0.0], [0.5, 0.0]]}')
    res = run_cli(["state", str(path), "--no-plot"])
    assert res.returncode == 1
    assert res.stderr != "" or res.stdout != ""


def test_usage_errors_exit_1():
    assert run_cli(["bogus"]).returncode == 1
    assert run_cli(["sweep", "stqe", "--qubits", "2"]).returncode == 1
    assert run_cli(["sweep", "stqe", "--q", "-1.0"]).returncode == 1
    assert run_cli(["sweep", "mupower", "--mu", "1.5"]).returncode == 1
    assert run_cli(["indicator", "--q", "0.5"]).returncode != 0


def test_plot_emission_toggle(tmp_path):
    out = tmp_path / "ind.csv"
    res = run_cli(["indicator", "--q", "1.4", "--p-steps", "11", "--out", str(out)])
    assert res.returncode == 0
    assert out.with_suffix(".png").exists()
    out2 = tmp_path / "ind2.csv"
    res = run_cli(
        ["indicator", "--q", "1.4", "--p-steps", "11", "--out", str(out2), "--no-plot"]
    )
    assert res.returncode == 0
    assert not out2.with_suffix(".png").exists()


def test_json_output_format(tmp_path):
    out = tmp_path / "sweep.json"
    res = run_cli(
        [
            "sweep", "stqe", "--samples", "5", "--qubits", "3", "--seed", "2",
            "--q", "2.0", "--format", "json", "--out", str(out), "--no-plot",
        ]
    )
    assert res.returncode == 0
    rows = json.loads(out.read_text())
    assert isinstance(rows, list) and len(rows) == 5
    assert {"inequality", "q", "residual", "state_id"} <= set(rows[0].keys())
