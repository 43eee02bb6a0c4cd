"""Batch command-line frontend.

Reproduces every headline number and curve as flat CSV/JSON artifacts,
runs randomized verification sweeps of the monogamy inequalities, runs the
decomposition-search oracle against the closed form, and evaluates the
measures on user-supplied state files.  Each tabular artifact gets a PNG
rendering next to it unless --no-plot is given.

Exit codes: 0 success, 1 usage or input error, 2 verification failure
(an inequality certified as violated), 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import NonConvergenceError, OutOfRangeError, TsallisqError
from .linalg import partial_trace
from .measures import (
    concurrence_pure,
    concurrence_wootters,
    focus_vs_rest,
    g_q,
    limit_d2g_dx2_at_1,
    limit_F_at_x0,
    limit_F_at_x1,
    big_F,
    tsallis_pure,
    tsallis_two_qubit_mixed,
    x1_curvature_bracket,
)
from .monogamy import (
    ckw_residual,
    focus_and_pair_entanglements,
    mu_power_residual,
    stqe_residual,
    three_tangle,
    three_tangle_analytic,
)
from .numerics import (
    CurveCondition,
    convex_roof_upper_bound,
    find_p2,
    find_qc_pair_T2,
    find_qc_pair_g,
    trace_critical_curve,
)
from .states import (
    DensityMatrix,
    SeededSampler,
    StateVector,
    density_of,
    ghz_w_superposition,
    load_state_file,
    random_mixed,
    random_pure,
    save_state_file,
    w,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_NUMERIC = 3

DEFAULT_SEED = 12345
DEFAULT_TOL = 1e-10
TINY_BASE = 1e-6

# Nine orders spanning the closed-form window (dyadic endpoints keep the
# grid values exactly representable, so CSV bytes are platform-stable).
DEFAULT_Q_GRID = tuple(float(q) for q in np.linspace(0.75, 4.25, 9))
DEFAULT_INDICATOR_QS = (0.8, 1.1, 1.4)
DEFAULT_ORACLE_QS = (1.5, 2.0, 3.0)
DEFAULT_STATE_QS = (1.5, 2.0, 3.0)

CURVE_NAMES = {
    "d2tq": CurveCondition.D2Tq_Zero,
    "d2tq2": CurveCondition.D2Tq2_Zero,
    "dfdx": CurveCondition.DFdx_Zero,
    "dfdq": CurveCondition.DFdq_Zero,
}

SWEEP_HEADER = (
    "inequality,q,mu,lhs,rhs,residual,state_id,master_seed,sample_index,note"
)
ORACLE_HEADER = "sample_index,rank,q,analytic,roof,gap,note"


class UsageError(Exception):
    """Bad flags or bad input; mapped to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse's default error() calls sys.exit(2), which would collide
    # with "2 = verification failure"; route through UsageError instead.
    def error(self, message):
        raise UsageError(message)


def _fmt(value: float) -> str:
    """17 significant digits: round-trip exact for doubles."""
    return format(float(value), ".17g")


def _json_safe(value):
    if isinstance(value, (np.floating, np.integer)):
        value = float(value)
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _plots():
    # matplotlib costs ~0.5 s to import; load it only when rendering.
    from . import plots

    return plots


def _worker_count() -> int:
    env = os.environ.get("TSALLISQ_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError:
            raise UsageError(f"TSALLISQ_THREADS={env!r} is not an integer")
        if n < 1:
            raise UsageError("TSALLISQ_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def _map_ordered(fn, jobs: Sequence, workers: int) -> List:
    """Apply fn to jobs preserving order, optionally across processes."""
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    chunk = max(1, len(jobs) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=chunk))


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one CLI invocation."""

    command: str
    q_list: Tuple[float, ...] = DEFAULT_Q_GRID
    mu: float = 2.0
    samples: int = 1000
    n_qubits: int = 3
    focus: int = 0
    master_seed: int = DEFAULT_SEED
    tol: float = DEFAULT_TOL
    out_path: str = ""
    format: str = "csv"
    which: str = ""
    state_path: str = ""
    rank: int = 0  # 0 = cycle ranks 2,3,4 by sample index
    restarts: int = 20
    x_steps: int = 100
    q_steps: int = 100
    p_steps: int = 101
    curve_steps: int = 200
    q_min: float = math.nan
    q_max: float = math.nan
    inject_w: bool = False
    no_plot: bool = False
    workers: int = 1
    mu_given: bool = False

    def __post_init__(self):
        if any(not (q > 0.0) for q in self.q_list):
            raise UsageError("all q values must be > 0")
        if self.samples < 1:
            raise UsageError("samples must be >= 1")
        if not (2 <= self.n_qubits <= 6):
            raise UsageError("qubits must be between 2 and 6")
        if not (0 <= self.focus < self.n_qubits):
            raise UsageError("focus must name a qubit of the state")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")
        if not (0 <= self.master_seed < 2**64):
            raise UsageError("seed must fit in 64 bits")


def _resolve_q_list(args, default: Tuple[float, ...]) -> Tuple[float, ...]:
    explicit = getattr(args, "q", None)
    q_min = getattr(args, "q_min", None)
    q_max = getattr(args, "q_max", None)
    if explicit and (q_min is not None or q_max is not None):
        raise UsageError("give either --q values or a --q-min/--q-max range")
    if explicit:
        return tuple(float(q) for q in explicit)
    if q_min is not None or q_max is not None:
        if q_min is None or q_max is None:
            raise UsageError("--q-min and --q-max go together")
        steps = int(getattr(args, "q_steps", 9) or 9)
        if steps < 2 or not (q_min < q_max):
            raise UsageError("need q_min < q_max and at least 2 steps")
        return tuple(float(q) for q in np.linspace(q_min, q_max, steps))
    return default


def _out_paths(cfg: RunConfig, stem: str, table: bool = True):
    """Return (data_path, summary_path, png_path) honoring --out/--format."""
    if cfg.out_path:
        data = cfg.out_path
    else:
        ext = ".csv" if (table and cfg.format == "csv") else ".json"
        data = stem + ext
    root, _ = os.path.splitext(data)
    return data, root + "_summary.json", root + ".png"


def _write_table(path: str, header: str, rows: List[tuple], fmt: str) -> None:
    """Write rows as CSV (stable bytes) or as a JSON array of records."""
    names = header.split(",")
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            fh.write(header + "\n")
            for row in rows:
                cells = [
                    _fmt(c) if isinstance(c, float) else str(c) for c in row
                ]
                fh.write(",".join(cells) + "\n")
    else:
        payload = [
            {k: _json_safe(v) for k, v in zip(names, row)} for row in rows
        ]
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, default=_json_safe)
        fh.write("\n")


# ----------------------------------------------------------------- critical


def cmd_critical(cfg: RunConfig) -> int:
    """Emit the critical orders and the interior zero of the GHZ/W family."""
    sqrt13 = math.sqrt(13.0)
    qc1, qc2 = find_qc_pair_g()
    qc3, qc4 = find_qc_pair_T2()
    p2 = find_p2()
    report = {
        "qc1": {
            "value": qc1,
            "closed_form": (5.0 - sqrt13) / 2.0,
            "abs_diff": abs(qc1 - (5.0 - sqrt13) / 2.0),
            "defining_residual": abs(limit_d2g_dx2_at_1(qc1)),
        },
        "qc2": {
            "value": qc2,
            "closed_form": (5.0 + sqrt13) / 2.0,
            "abs_diff": abs(qc2 - (5.0 + sqrt13) / 2.0),
            "defining_residual": abs(limit_d2g_dx2_at_1(qc2)),
        },
        "qc3": {
            "value": qc3,
            "defining_residual": abs(x1_curvature_bracket(qc3)),
        },
        "qc4": {
            "value": qc4,
            "defining_residual": abs(x1_curvature_bracket(qc4)),
        },
        "p_1": {
            # The closed form vanishes identically at p = 0.
            "value": 0.0,
            "defining_residual": abs(three_tangle_analytic(0.0)),
        },
        "p_2": {
            "value": p2,
            "defining_residual": abs(three_tangle_analytic(p2)),
            # At the zero, p/(1-p) equals the cube root of 384/81.
            "ratio_identity_gap": abs(
                p2 / (1.0 - p2) - (384.0 / 81.0) ** (1.0 / 3.0)
            ),
        },
    }
    data, _, _ = _out_paths(cfg, "critical", table=False)
    _write_json(data, report)
    for name, entry in report.items():
        print(
            f"{name} = {_fmt(entry['value'])}"
            f"  (defining residual {entry['defining_residual']:.3e})"
        )
    print(f"wrote {data}")
    return EXIT_OK


# ------------------------------------------------------------------- curves


def cmd_curves(cfg: RunConfig) -> int:
    """Trace one critical curve over a q range and write q,x rows."""
    condition = CURVE_NAMES[cfg.which]
    try:
        curve = trace_critical_curve(
            condition, cfg.q_min, cfg.q_max, cfg.curve_steps
        )
    except OutOfRangeError as exc:
        raise UsageError(str(exc))
    rows = [(float(q), float(x)) for q, x in curve.points]
    data, _, png = _out_paths(cfg, f"curves_{cfg.which}")
    _write_table(data, "q,x", rows, cfg.format)
    if not cfg.no_plot:
        _plots().render_curve(curve, png)
    missing = cfg.curve_steps - len(rows)
    print(
        f"{condition.value}: {len(rows)}/{cfg.curve_steps} gridpoints over "
        f"[{cfg.q_min:g}, {cfg.q_max:g}], wrote {data}"
    )
    if missing > 0.1 * cfg.curve_steps:
        print(
            f"error: {missing} gridpoints found no admissible zero",
            file=sys.stderr,
        )
        return EXIT_NUMERIC
    return EXIT_OK


# ------------------------------------------------------------------ surface


def cmd_surface(cfg: RunConfig) -> int:
    """Tabulate the convexity certificate over (x, q) in [0,1] x [1,4]."""
    xs = np.linspace(0.0, 1.0, cfg.x_steps)
    qs = np.linspace(1.0, 4.0, cfg.q_steps)
    grid = np.empty((cfg.q_steps, cfg.x_steps))
    rows = []
    for j, x in enumerate(xs):
        for i, q in enumerate(qs):
            if x <= 0.0:
                val = limit_F_at_x0(q)
            elif x >= 1.0:
                val = limit_F_at_x1(q)
            else:
                val = big_F(float(x), float(q))
            grid[i, j] = val
            rows.append((float(x), float(q), float(val)))
    data, _, png = _out_paths(cfg, "surface")
    _write_table(data, "x,q,F", rows, cfg.format)
    if not cfg.no_plot:
        _plots().render_surface(xs, qs, grid, png)
    fmin = float(grid.min())
    imin = np.unravel_index(int(grid.argmin()), grid.shape)
    print(
        f"surface {cfg.x_steps}x{cfg.q_steps}: min F = {_fmt(fmin)} at "
        f"x={xs[imin[1]]:.4f}, q={qs[imin[0]]:.4f}, wrote {data}"
    )
    return EXIT_OK


# ---------------------------------------------------------------- indicator


def cmd_indicator(cfg: RunConfig) -> int:
    """Sweep the GHZ/W superposition family and emit the q-indicator."""
    ps = np.linspace(0.0, 1.0, cfg.p_steps)
    tangles = np.array([three_tangle_analytic(float(p)) for p in ps])
    rows = []
    tau_by_q: Dict[float, np.ndarray] = {}
    for q in cfg.q_list:
        taus = np.empty(ps.size)
        for k, p in enumerate(ps):
            psi = ghz_w_superposition(float(p))
            taus[k] = stqe_residual(psi, cfg.focus, q).residual
        tau_by_q[q] = taus
        rows.extend(
            (float(p), float(q), float(taus[k]), float(tangles[k]))
            for k, p in enumerate(ps)
        )
    data, _, png = _out_paths(cfg, "indicator")
    _write_table(data, "p,q,tau_q,three_tangle", rows, cfg.format)
    if not cfg.no_plot:
        _plots().render_indicator(ps, tau_by_q, tangles, png)
    for q in cfg.q_list:
        taus = tau_by_q[q]
        kmin = int(taus.argmin())
        print(
            f"indicator q={q:g}: min tau_q = {_fmt(float(taus[kmin]))}"
            f" at p={ps[kmin]:.4f}"
        )
    print(f"wrote {data}")
    return EXIT_OK


# -------------------------------------------------------------------- sweep


def _is_polygamy(inequality: str, mu: float) -> bool:
    return inequality in ("mupower", "mupolygamy") and mu <= 0.0


def _sweep_state(
    seed: int, index: int, n_qubits: int, inject_w: bool
) -> StateVector:
    if inject_w and index == 0:
        return w(n_qubits)
    return random_pure(n_qubits, SeededSampler(seed, index))


def _sweep_job(job: tuple) -> List[tuple]:
    """Rows for one sampled state; runs in worker processes."""
    inequality, seed, index, n_qubits, focus, qs, mu, inject_w = job
    psi = _sweep_state(seed, index, n_qubits, inject_w)
    sid = f"s{index}"
    rows = []
    if inequality == "ckw":
        rec = ckw_residual(psi, focus, state_id=sid, seed_info=(seed, index))
        rows.append(
            (
                rec.inequality.value,
                rec.q,
                rec.mu,
                rec.lhs,
                rec.rhs,
                rec.residual,
                sid,
                seed,
                index,
                rec.note,
            )
        )
        return rows
    for q in qs:
        if inequality == "stqe":
            rec = stqe_residual(
                psi, focus, q, state_id=sid, seed_info=(seed, index)
            )
        else:
            if mu < 0.0:
                # Negative powers of near-zero entanglements overflow into
                # meaningless residuals; such pairs are outside the claim.
                t_focus, pairs = focus_and_pair_entanglements(psi, focus, q)
                if min([t_focus] + list(pairs)) <= TINY_BASE:
                    rows.append(
                        (
                            "MuPolygamy",
                            float(q),
                            mu,
                            math.nan,
                            math.nan,
                            math.nan,
                            sid,
                            seed,
                            index,
                            "skipped:tiny-base",
                        )
                    )
                    continue
            rec = mu_power_residual(
                psi, focus, q, mu, state_id=sid, seed_info=(seed, index)
            )
        rows.append(
            (
                rec.inequality.value,
                rec.q,
                rec.mu,
                rec.lhs,
                rec.rhs,
                rec.residual,
                sid,
                seed,
                index,
                rec.note,
            )
        )
    return rows


def cmd_sweep(cfg: RunConfig) -> int:
    """Randomized verification sweep of one monogamy/polygamy inequality."""
    qs = (1.0,) if cfg.which == "ckw" else cfg.q_list
    jobs = [
        (
            cfg.which,
            cfg.master_seed,
            i,
            cfg.n_qubits,
            cfg.focus,
            qs,
            cfg.mu,
            cfg.inject_w,
        )
        for i in range(cfg.samples)
    ]
    results = _map_ordered(_sweep_job, jobs, cfg.workers)
    rows = [row for chunk in results for row in chunk]

    polygamy = _is_polygamy(cfg.which, cfg.mu)
    finite = [
        (k, row) for k, row in enumerate(rows) if math.isfinite(row[5])
    ]
    skipped = len(rows) - len(finite)
    violations = []
    for k, row in finite:
        residual = row[5]
        bad = residual > cfg.tol if polygamy else residual < -cfg.tol
        if bad:
            violations.append((k, row))

    data, summary_path, png = _out_paths(cfg, f"sweep_{cfg.which}")
    _write_table(data, SWEEP_HEADER, rows, cfg.format)
    if not cfg.no_plot:
        _plots().render_sweep(
            [row[5] for _, row in finite],
            cfg.tol,
            png,
            f"{cfg.which} residuals, n={cfg.n_qubits}, {cfg.samples} samples",
        )

    summary = {
        "command": "sweep",
        "inequality": cfg.which,
        "samples": cfg.samples,
        "n_qubits": cfg.n_qubits,
        "focus": cfg.focus,
        "master_seed": cfg.master_seed,
        "mu": cfg.mu if cfg.which in ("mupower", "mupolygamy") else None,
        "q_grid": list(qs),
        "tol": cfg.tol,
        "records": len(rows),
        "skipped": skipped,
        "violations": len(violations),
        "direction": "polygamy" if polygamy else "monogamy",
        "data_file": data,
    }
    if finite:
        kmin, rmin = min(finite, key=lambda kr: kr[1][5])
        kmax, rmax = max(finite, key=lambda kr: kr[1][5])
        summary["min_residual"] = rmin[5]
        summary["argmin_state"] = rmin[6]
        summary["max_residual"] = rmax[5]
        summary["argmax_state"] = rmax[6]
    if violations:
        _, first = violations[0]
        offender = _sweep_state(
            cfg.master_seed, first[8], cfg.n_qubits, cfg.inject_w
        )
        root, _ = os.path.splitext(data)
        violation_path = root + ".violation.json"
        save_state_file(violation_path, offender)
        summary["first_violation"] = {
            "state_id": first[6],
            "q": first[1],
            "residual": first[5],
            "state_file": violation_path,
        }
    _write_json(summary_path, summary)

    print(
        f"{cfg.which}: {len(rows)} records ({skipped} skipped), "
        f"{len(violations)} violations at tol {cfg.tol:g}"
    )
    if finite:
        print(
            f"  residual range [{_fmt(summary['min_residual'])}, "
            f"{_fmt(summary['max_residual'])}]"
        )
    print(f"wrote {data} and {summary_path}")
    if violations:
        print(
            f"error: verification failed, offending state in "
            f"{summary['first_violation']['state_file']}",
            file=sys.stderr,
        )
        return EXIT_VERIFY
    return EXIT_OK


# ------------------------------------------------------------------- oracle


def _oracle_job(job: tuple) -> List[tuple]:
    """Decomposition-search runs for one sampled state."""
    seed, index, rank, qs, restarts = job
    rho = random_mixed(2, rank, SeededSampler(seed, index))
    c = concurrence_wootters(rho)
    rows = []
    for q in qs:
        analytic = g_q(c, q)
        note = ""
        try:
            value, _ = convex_roof_upper_bound(
                rho,
                q,
                ensemble_size=4,
                restarts=restarts,
                sampler=SeededSampler(seed, index),
            )
        except NonConvergenceError as exc:
            value = exc.value
            note = "nonconverged"
        rows.append(
            (index, rank, float(q), analytic, value, value - analytic, note)
        )
    return rows


def cmd_oracle(cfg: RunConfig) -> int:
    """Check the closed-form curve against a direct decomposition search."""
    ranks = (
        [cfg.rank] * cfg.samples
        if cfg.rank
        else [2 + (i % 3) for i in range(cfg.samples)]
    )
    jobs = [
        (cfg.master_seed, i, ranks[i], cfg.q_list, cfg.restarts)
        for i in range(cfg.samples)
    ]
    results = _map_ordered(_oracle_job, jobs, cfg.workers)
    rows = [row for chunk in results for row in chunk]
    gaps = [row[5] for row in rows]
    nonconverged = sum(1 for row in rows if row[6])

    data, summary_path, png = _out_paths(cfg, "oracle")
    _write_table(data, ORACLE_HEADER, rows, cfg.format)
    if not cfg.no_plot:
        _plots().render_oracle(gaps, png)
    summary = {
        "command": "oracle",
        "samples": cfg.samples,
        "q_list": list(cfg.q_list),
        "restarts": cfg.restarts,
        "master_seed": cfg.master_seed,
        "runs": len(rows),
        "nonconverged": nonconverged,
        "max_gap": max(gaps),
        "min_gap": min(gaps),
        "data_file": data,
    }
    _write_json(summary_path, summary)
    print(
        f"oracle: {len(rows)} runs, gap range "
        f"[{_fmt(min(gaps))}, {_fmt(max(gaps))}], "
        f"{nonconverged} nonconverged"
    )
    print(f"wrote {data} and {summary_path}")
    if nonconverged > 0.1 * len(rows):
        print("error: optimizer failed to stabilize on >10% of runs",
              file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


# -------------------------------------------------------------------- state


def _pairwise_concurrences(mat: np.ndarray, n: int) -> Dict[str, float]:
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            reduced = partial_trace(mat, n, (i, j))
            out[f"{i}-{j}"] = concurrence_wootters(DensityMatrix(2, reduced))
    return out


def cmd_state(cfg: RunConfig) -> int:
    """Evaluate measures on a state file; certify inequalities when pure."""
    state = load_state_file(cfg.state_path)
    n = state.n_qubits
    if not (2 <= n <= 6):
        raise UsageError(f"state has {n} qubits; supported range is 2..6")
    if cfg.focus >= n:
        raise UsageError(f"--focus {cfg.focus} out of range for {n} qubits")
    qs = cfg.q_list
    report: dict = {
        "file": cfg.state_path,
        "kind": "pure" if isinstance(state, StateVector) else "mixed",
        "n_qubits": n,
        "focus": cfg.focus,
        "tol": cfg.tol,
    }
    violations = []

    if isinstance(state, StateVector):
        mat = density_of(state).matrix
        report["pairwise_concurrence"] = _pairwise_concurrences(mat, n)
        part = focus_vs_rest(cfg.focus, n)
        report["focus_rest_concurrence"] = concurrence_pure(state, part)
        report["T_q"] = {
            _fmt(q): tsallis_pure(state, part, q) for q in qs
        }
        if n >= 3:
            tau = {}
            for q in qs:
                rec = stqe_residual(state, cfg.focus, q)
                tau[_fmt(q)] = rec.residual
                if rec.residual < -cfg.tol:
                    violations.append(
                        {
                            "inequality": rec.inequality.value,
                            "q": float(q),
                            "residual": rec.residual,
                        }
                    )
            report["tau_q"] = tau
            ckw = ckw_residual(state, cfg.focus)
            report["ckw_residual"] = ckw.residual
            if ckw.residual < -cfg.tol:
                violations.append(
                    {
                        "inequality": ckw.inequality.value,
                        "q": 1.0,
                        "residual": ckw.residual,
                    }
                )
        if n == 3:
            report["three_tangle"] = three_tangle(state)
            if cfg.mu_given:
                mu_rows = {}
                for q in qs:
                    if cfg.mu < 0.0:
                        t_focus, pairs = focus_and_pair_entanglements(
                            state, cfg.focus, q
                        )
                        if min([t_focus] + list(pairs)) <= TINY_BASE:
                            mu_rows[_fmt(q)] = None
                            continue
                    rec = mu_power_residual(state, cfg.focus, q, cfg.mu)
                    mu_rows[_fmt(q)] = rec.residual
                    if rec.note == "vacuous":
                        continue
                    bad = (
                        rec.residual > cfg.tol
                        if cfg.mu <= 0.0
                        else rec.residual < -cfg.tol
                    )
                    if bad:
                        violations.append(
                            {
                                "inequality": rec.inequality.value,
                                "q": float(q),
                                "mu": cfg.mu,
                                "residual": rec.residual,
                            }
                        )
                report["mu"] = cfg.mu
                report["mu_power_residual"] = mu_rows
    else:
        mat = state.matrix
        report["pairwise_concurrence"] = (
            _pairwise_concurrences(mat, n)
            if n > 2
            else {"0-1": concurrence_wootters(state)}
        )
        if n == 2:
            tq = {}
            for q in qs:
                try:
                    tq[_fmt(q)] = tsallis_two_qubit_mixed(state, q)
                except TsallisqError:
                    tq[_fmt(q)] = None
            report["T_q"] = tq
        else:
            report["note"] = (
                "mixed multiqubit state: pairwise concurrences only; "
                "inequalities are certified for pure states"
            )

    report["violations"] = violations
    data, _, _ = _out_paths(cfg, "state_report", table=False)
    _write_json(data, report)
    print(json.dumps(report, indent=1, default=_json_safe))
    print(f"wrote {data}")
    return EXIT_VERIFY if violations else EXIT_OK


# ------------------------------------------------------------------ parsing


def _add_common(sp) -> None:
    sp.add_argument("--out", default="", help="output path for the artifact")
    sp.add_argument(
        "--format", default="csv", choices=("csv", "json"),
        help="tabular output format",
    )
    sp.add_argument(
        "--no-plot", action="store_true", help="skip the PNG rendering"
    )


def _add_q_options(sp) -> None:
    sp.add_argument(
        "--q", type=float, action="append",
        help="entropic order; repeatable",
    )
    sp.add_argument("--q-min", type=float, default=None)
    sp.add_argument("--q-max", type=float, default=None)
    sp.add_argument("--q-steps", type=int, default=None)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="tsallisq",
        description="Entanglement monogamy toolkit: batch artifacts, "
        "verification sweeps, and state-file reports.",
    )
    sub = parser.add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )

    sp = sub.add_parser("critical", help="critical orders and the p_2 zero")
    _add_common(sp)
    sp.set_defaults(handler=cmd_critical)

    sp = sub.add_parser("curves", help="trace a critical curve x(q)")
    sp.add_argument("which", choices=sorted(CURVE_NAMES))
    sp.add_argument("--q-min", type=float, required=True)
    sp.add_argument("--q-max", type=float, required=True)
    sp.add_argument("--q-steps", type=int, default=200)
    _add_common(sp)
    sp.set_defaults(handler=cmd_curves)

    sp = sub.add_parser("surface", help="tabulate F over (x, q)")
    sp.add_argument("--x-steps", type=int, default=100)
    sp.add_argument("--q-steps", type=int, default=100)
    _add_common(sp)
    sp.set_defaults(handler=cmd_surface)

    sp = sub.add_parser(
        "indicator", help="q-indicator on the GHZ/W superposition family"
    )
    sp.add_argument("--q", type=float, action="append")
    sp.add_argument("--p-steps", type=int, default=101)
    sp.add_argument("--focus", type=int, default=0)
    _add_common(sp)
    sp.set_defaults(handler=cmd_indicator)

    sp = sub.add_parser(
        "sweep", help="randomized verification of one inequality"
    )
    sp.add_argument(
        "inequality", choices=("stqe", "ckw", "mupower", "mupolygamy")
    )
    _add_q_options(sp)
    sp.add_argument("--mu", type=float, default=None)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--qubits", type=int, default=3)
    sp.add_argument("--focus", type=int, default=0)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.add_argument(
        "--inject-w", action="store_true",
        help="replace sample 0 with the W state (a known saturation case)",
    )
    _add_common(sp)
    sp.set_defaults(handler=cmd_sweep)

    sp = sub.add_parser(
        "oracle", help="decomposition search vs the closed form"
    )
    sp.add_argument("--q", type=float, action="append")
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument(
        "--rank", type=int, default=0, choices=(0, 1, 2, 3, 4),
        help="fixed state rank; 0 cycles 2,3,4",
    )
    sp.add_argument("--restarts", type=int, default=20)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_common(sp)
    sp.set_defaults(handler=cmd_oracle)

    sp = sub.add_parser("state", help="evaluate measures on a state file")
    sp.add_argument("path")
    sp.add_argument("--q", type=float, action="append")
    sp.add_argument("--mu", type=float, default=None)
    sp.add_argument("--focus", type=int, default=0)
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _add_common(sp)
    sp.set_defaults(handler=cmd_state)

    return parser


def _config_from_args(args) -> RunConfig:
    command = args.command
    mu_given = getattr(args, "mu", None) is not None
    mu = getattr(args, "mu", None)
    if command == "sweep":
        if args.qubits < 3:
            raise UsageError("sweeps compare a focus against at least 2 partners; need 3+ qubits")
        if args.inequality == "mupower":
            mu = 2.0 if mu is None else mu
        elif args.inequality == "mupolygamy":
            mu = -1.0 if mu is None else mu
        else:
            mu = 1.0 if mu is None else mu
        if args.inequality in ("mupower", "mupolygamy"):
            if not (mu >= 2.0 or mu <= 0.0):
                raise UsageError("--mu must satisfy mu >= 2 or mu <= 0")
            if args.qubits != 3:
                raise UsageError(
                    "mu-power sweeps are defined for 3-qubit states"
                )
    elif mu is None:
        mu = 2.0
    elif command == "state" and not (mu >= 2.0 or mu <= 0.0):
        raise UsageError("--mu must satisfy mu >= 2 or mu <= 0")
    defaults = {
        "critical": DEFAULT_Q_GRID,
        "curves": DEFAULT_Q_GRID,
        "surface": DEFAULT_Q_GRID,
        "indicator": DEFAULT_INDICATOR_QS,
        "sweep": DEFAULT_Q_GRID,
        "oracle": DEFAULT_ORACLE_QS,
        "state": DEFAULT_STATE_QS,
    }
    q_list = (
        defaults[command]
        if command in ("critical", "surface", "curves")
        else _resolve_q_list(args, defaults[command])
    )
    # The state command learns the true qubit count from the file, so the
    # config-level focus check must not reject a focus the file supports.
    n_qubits = 6 if command == "state" else int(getattr(args, "qubits", 3) or 3)
    cfg = RunConfig(
        command=command,
        q_list=tuple(q_list),
        mu=float(mu),
        samples=int(getattr(args, "samples", 1000) or 1000),
        n_qubits=n_qubits,
        focus=int(getattr(args, "focus", 0) or 0),
        master_seed=int(getattr(args, "seed", DEFAULT_SEED)),
        tol=float(getattr(args, "tol", DEFAULT_TOL)),
        out_path=args.out,
        format=args.format,
        which=getattr(args, "which", getattr(args, "inequality", "")),
        state_path=getattr(args, "path", ""),
        rank=int(getattr(args, "rank", 0) or 0),
        restarts=int(getattr(args, "restarts", 20) or 20),
        x_steps=int(getattr(args, "x_steps", 100) or 100),
        q_steps=int(getattr(args, "q_steps", 100) or 100),
        p_steps=int(getattr(args, "p_steps", 101) or 101),
        curve_steps=int(getattr(args, "q_steps", 200) or 200),
        q_min=(
            float(args.q_min)
            if getattr(args, "q_min", None) is not None
            else math.nan
        ),
        q_max=(
            float(args.q_max)
            if getattr(args, "q_max", None) is not None
            else math.nan
        ),
        inject_w=bool(getattr(args, "inject_w", False)),
        no_plot=bool(getattr(args, "no_plot", False)),
        workers=_worker_count(),
        mu_given=mu_given,
    )
    if command == "curves":
        if cfg.curve_steps < 2:
            raise UsageError("curves need at least 2 gridpoints")
    if command == "surface" and (cfg.x_steps < 2 or cfg.q_steps < 2):
        raise UsageError("surface needs at least a 2x2 grid")
    if command == "indicator" and cfg.p_steps < 2:
        raise UsageError("indicator needs at least 2 p gridpoints")
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config_from_args(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.handler(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TsallisqError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def entry_point() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
