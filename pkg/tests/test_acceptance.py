"""End-to-end acceptance checks for the shipped numerical artifacts.

Each test covers one headline claim at its stated tolerance and runtime
budget and prints one PASS line (visible with pytest -rA or -s).
"""

import csv
import json
import math
import os
import subprocess
import sys
import time

import numpy as np

from tsallisq import (
    dTq2_dx,
    f_q,
    find_p2,
    find_qc_pair_T2,
    finite_diff_2nd,
    ghz_w_superposition,
    three_tangle,
    three_tangle_analytic,
    x1_curvature_bracket,
    big_F,
)

CLI = [sys.executable, "-m", "tsallisq.cli"]


def run_cli(args):
    env = dict(os.environ)
    env.setdefault("TSALLISQ_THREADS", "1")
    return subprocess.run(
        CLI + list(args), capture_output=True, text=True, env=env, timeout=360
    )


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_criterion_01_critical_orders_closed_form(tmp_path):
    out = tmp_path / "crit.json"
    t0 = time.perf_counter()
    res = run_cli(["critical", "--out", str(out), "--no-plot"])
    dt = time.perf_counter() - t0
    assert res.returncode == 0
    report = json.loads(out.read_text())
    qc1 = report["qc1"]["value"]
    qc2 = report["qc2"]["value"]
    assert abs(qc1 - (5.0 - math.sqrt(13.0)) / 2.0) <= 1e-9
    assert abs(qc2 - (5.0 + math.sqrt(13.0)) / 2.0) <= 1e-9
    assert dt < 1.0
    print(f"ACCEPTANCE 1 PASS ({dt:.2f} s < 1 s)")


def test_criterion_02_outer_critical_orders():
    t0 = time.perf_counter()
    qc3, qc4 = find_qc_pair_T2()
    dt = time.perf_counter() - t0
    assert 0.64 <= qc3 <= 0.66
    assert 4.60 <= qc4 <= 4.70
    assert abs(x1_curvature_bracket(qc3)) <= 1e-9
    assert abs(x1_curvature_bracket(qc4)) <= 1e-9
    assert dt < 1.0
    print(f"ACCEPTANCE 2 PASS ({dt:.2f} s < 1 s)")


def test_criterion_03_tangle_zeros():
    t0 = time.perf_counter()
    assert three_tangle_analytic(0.0) == 0.0
    p2 = find_p2()
    assert 0.626 <= p2 <= 0.628
    tangle_at_zero = three_tangle(ghz_w_superposition(p2))
    assert abs(tangle_at_zero) <= 1e-3
    dt = time.perf_counter() - t0
    assert dt < 1.0
    print(f"ACCEPTANCE 3 PASS ({dt:.2f} s < 1 s)")


def test_criterion_04_indicator_stays_positive(tmp_path):
    out = tmp_path / "ind.csv"
    t0 = time.perf_counter()
    res = run_cli(
        [
            "indicator", "--q", "0.8", "--q", "1.1", "--q", "1.4",
            "--p-steps", "101", "--out", str(out), "--no-plot",
        ]
    )
    dt = time.perf_counter() - t0
    assert res.returncode == 0
    rows = read_rows(out)
    assert len(rows) == 303
    assert all(float(r["tau_q"]) > 0.0 for r in rows)
    p2 = find_p2()
    for q in ("0.8", "1.1", "1.4"):
        block = [r for r in rows if float(r["q"]) == float(q)]
        assert len(block) == 101
        ps = [float(r["p"]) for r in block]
        tangles = [float(r["three_tangle"]) for r in block]
        flips = [
            i for i in range(len(block) - 1)
            if tangles[i] < 0.0 and tangles[i + 1] > 0.0
        ]
        assert len(flips) == 1
        assert ps[flips[0]] < p2 < ps[flips[0] + 1]
    assert dt < 10.0
    print(f"ACCEPTANCE 4 PASS ({dt:.2f} s < 10 s)")


def test_criterion_05_surface_nonnegative(tmp_path):
    out = tmp_path / "surf.csv"
    t0 = time.perf_counter()
    res = run_cli(
        [
            "surface", "--x-steps", "100", "--q-steps", "100",
            "--out", str(out), "--no-plot",
        ]
    )
    dt = time.perf_counter() - t0
    assert res.returncode == 0
    rows = read_rows(out)
    assert len(rows) == 10000
    min_f = min(float(r["F"]) for r in rows)
    assert min_f >= -1e-9
    assert dt < 30.0
    print(f"ACCEPTANCE 5 PASS (min F = {min_f:.3e}, {dt:.2f} s < 30 s)")


def test_criterion_06_monogamy_sweeps(tmp_path):
    t0 = time.perf_counter()

    res = run_cli(
        [
            "sweep", "stqe", "--samples", "10000", "--qubits", "3",
            "--seed", "12345", "--out", str(tmp_path / "stqe3.csv"), "--no-plot",
        ]
    )
    assert res.returncode == 0
    s = json.loads((tmp_path / "stqe3_summary.json").read_text())
    assert s["records"] == 90000
    assert s["violations"] == 0

    res = run_cli(
        [
            "sweep", "stqe", "--samples", "1000", "--qubits", "4",
            "--seed", "12345", "--out", str(tmp_path / "stqe4.csv"), "--no-plot",
        ]
    )
    assert res.returncode == 0
    s = json.loads((tmp_path / "stqe4_summary.json").read_text())
    assert s["records"] == 9000
    assert s["violations"] == 0

    res = run_cli(
        [
            "sweep", "ckw", "--samples", "10000", "--qubits", "3",
            "--seed", "12345", "--inject-w",
            "--out", str(tmp_path / "ckw3.csv"), "--no-plot",
        ]
    )
    assert res.returncode == 0
    s = json.loads((tmp_path / "ckw3_summary.json").read_text())
    assert s["records"] == 10000
    assert s["violations"] == 0
    rows = read_rows(tmp_path / "ckw3.csv")
    assert abs(float(rows[0]["residual"])) <= 1e-10  # injected W saturates

    res = run_cli(
        [
            "sweep", "ckw", "--samples", "1000", "--qubits", "4",
            "--seed", "12345", "--out", str(tmp_path / "ckw4.csv"), "--no-plot",
        ]
    )
    assert res.returncode == 0
    s = json.loads((tmp_path / "ckw4_summary.json").read_text())
    assert s["violations"] == 0

    dt = time.perf_counter() - t0
    assert dt < 300.0
    print(f"ACCEPTANCE 6 PASS ({dt:.1f} s < 300 s)")


def test_criterion_07_power_sweeps(tmp_path):
    t0 = time.perf_counter()
    for mu in ("2", "3", "5"):
        out = tmp_path / f"pow{mu}.csv"
        res = run_cli(
            [
                "sweep", "mupower", "--mu", mu, "--samples", "1000",
                "--qubits", "3", "--seed", "12345", "--q", "2.0",
                "--out", str(out), "--no-plot",
            ]
        )
        assert res.returncode == 0
        s = json.loads(out.with_name(out.stem + "_summary.json").read_text())
        assert s["violations"] == 0
    for mu in ("-1", "-0.5"):
        out = tmp_path / f"poly{mu.replace('-', 'm').replace('.', '_')}.csv"
        res = run_cli(
            [
                "sweep", "mupolygamy", f"--mu={mu}", "--samples", "1000",
                "--qubits", "3", "--seed", "12345", "--q", "2.0",
                "--out", str(out), "--no-plot",
            ]
        )
        assert res.returncode == 0
        s = json.loads(out.with_name(out.stem + "_summary.json").read_text())
        assert s["violations"] == 0
        rows = read_rows(out)
        kept = [r for r in rows if r["note"] != "skipped:tiny-base"]
        assert len(kept) >= 100  # the skip rule must not hollow out the run
    dt = time.perf_counter() - t0
    assert dt < 60.0
    print(f"ACCEPTANCE 7 PASS ({dt:.1f} s < 60 s)")


def test_criterion_08_convex_roof_oracle(tmp_path):
    out = tmp_path / "oracle.csv"
    t0 = time.perf_counter()
    res = run_cli(
        [
            "oracle", "--samples", "20", "--seed", "12345",
            "--out", str(out), "--no-plot",
        ]
    )
    dt = time.perf_counter() - t0
    assert res.returncode == 0
    rows = read_rows(out)
    assert len(rows) == 60
    assert {r["q"] for r in rows} == {"1.5", "2", "3"}
    ranks = {int(r["rank"]) for r in rows}
    assert ranks == {2, 3, 4}
    for r in rows:
        gap = float(r["gap"])
        assert -1e-9 <= gap <= 5e-3, (r["sample_index"], r["q"], gap)
    assert dt < 120.0
    print(f"ACCEPTANCE 8 PASS ({dt:.1f} s < 120 s)")


def test_criterion_09_first_derivative():
    xs = np.linspace(0.05, 0.95, 19)
    h = 1e-5
    worst = 0.0
    for q in (0.7, 1.0, 1.5, 2.0, 3.0, 4.3):
        for x in xs:
            fd = (f_q(x + h, q) ** 2 - f_q(x - h, q) ** 2) / (2.0 * h)
            worst = max(worst, abs(dTq2_dx(float(x), q) - fd))
    assert worst <= 1e-6
    for x in np.linspace(0.0, 1.0, 101):
        assert abs(f_q(float(x), 2.0) - x / 2.0) <= 1e-12
    for x in np.linspace(0.01, 0.99, 99):
        assert abs(big_F(float(x), 2.0) - 0.5) <= 1e-12
    print(f"ACCEPTANCE 9 PASS (max derivative error {worst:.2e})")


def test_criterion_10_curvature_sign_pattern():
    xs = np.linspace(0.005, 0.995, 199)
    h = 1e-3
    for q in (0.70, 1.0 - 1e-6, 1.0 + 1e-6, 2.0, 3.0, 4.3):
        vals = [
            finite_diff_2nd(lambda t: f_q(t, q) ** 2, float(x), h) for x in xs
        ]
        assert min(vals) >= -1e-8, (q, min(vals))
    for q in (0.6, 4.8):
        near_one = [
            finite_diff_2nd(lambda t: f_q(t, q) ** 2, float(x), h)
            for x in xs
            if x >= 0.9
        ]
        assert min(near_one) < -1e-4, (q, min(near_one))
    print("ACCEPTANCE 10 PASS")


def test_criterion_11_curve_monotonicity(tmp_path):
    jobs = [
        ("d2tq", "0.51", "0.695", "nondecreasing"),
        ("d2tq", "4.35", "4.95", "nonincreasing"),
        ("d2tq2", "0.51", "0.645", "nondecreasing"),
        ("d2tq2", "4.70", "4.99", "nonincreasing"),
    ]
    for which, lo, hi, direction in jobs:
        out = tmp_path / f"{which}_{lo}.csv"
        res = run_cli(
            [
                "curves", which, "--q-min", lo, "--q-max", hi,
                "--q-steps", "200", "--out", str(out), "--no-plot",
            ]
        )
        assert res.returncode == 0, (which, lo, hi, res.stderr)
        xs = [float(r["x"]) for r in read_rows(out)]
        assert len(xs) >= 180  # at most 10% of gridpoints may fail
        if direction == "nondecreasing":
            assert all(b >= a for a, b in zip(xs, xs[1:])), (which, lo)
        else:
            assert all(b <= a for a, b in zip(xs, xs[1:])), (which, lo)
    print("ACCEPTANCE 11 PASS")
