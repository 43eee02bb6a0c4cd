"""Figure rendering for the command-line artifacts.

Every CSV the CLI writes gets a PNG sibling so a run can be eyeballed
without loading the data elsewhere.  All functions write the file and
return its path; they never show a window (Agg backend).
"""

from __future__ import annotations

from typing import Dict, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

FIGSIZE = (6.0, 4.2)
DPI = 150


def _finish(fig, path: str) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def render_curve(curve, path: str) -> str:
    """Plot a traced critical curve x(q)."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    qs = curve.q_values()
    xs = curve.x_values()
    ax.plot(qs, xs, "b.-", ms=3, lw=0.8)
    ax.set_xlabel("order q")
    ax.set_ylabel("x at zero crossing")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(f"{curve.condition.value}: {len(curve.points)} points")
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def render_surface(
    x_vals: np.ndarray, q_vals: np.ndarray, f_grid: np.ndarray, path: str
) -> str:
    """Heat map of the convexity certificate over the (x, q) rectangle.

    f_grid must have shape (len(q_vals), len(x_vals)).
    """
    fig, ax = plt.subplots(figsize=FIGSIZE)
    mesh = ax.pcolormesh(x_vals, q_vals, f_grid, shading="auto", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="F(x, q)")
    ax.set_xlabel("x")
    ax.set_ylabel("order q")
    ax.set_title("convexity certificate F")
    return _finish(fig, path)


def render_indicator(
    p_vals: np.ndarray,
    tau_by_q: Dict[float, np.ndarray],
    tangle_vals: np.ndarray,
    path: str,
) -> str:
    """Residual indicator vs mixing weight p, one line per order q."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for q, taus in sorted(tau_by_q.items()):
        ax.plot(p_vals, taus, lw=1.2, label=f"q = {q:g}")
    ax.plot(p_vals, tangle_vals, "k--", lw=1.0, label="three-party residual")
    ax.axhline(0.0, color="gray", lw=0.6)
    ax.set_xlabel("superposition weight p")
    ax.set_ylabel("residual")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def render_sweep(residuals: Sequence[float], tol: float, path: str, title: str) -> str:
    """Histogram of sweep residuals with the violation threshold marked."""
    res = np.asarray([r for r in residuals if np.isfinite(r)], dtype=float)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    if res.size:
        ax.hist(res, bins=60, color="steelblue")
    ax.axvline(-tol, color="red", lw=0.8, ls="--", label=f"-tol = {-tol:g}")
    ax.axvline(0.0, color="gray", lw=0.6)
    ax.set_yscale("log")
    ax.set_xlabel("residual")
    ax.set_ylabel("count")
    ax.set_title(title)
    ax.legend(fontsize=8)
    return _finish(fig, path)


def render_oracle(gaps: Sequence[float], path: str) -> str:
    """Scatter of optimizer-vs-analytic gaps per run."""
    g = np.asarray(gaps, dtype=float)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(np.arange(g.size), g, "o", ms=4, color="darkorange")
    ax.axhline(0.0, color="gray", lw=0.6)
    ax.axhline(5e-3, color="red", lw=0.8, ls="--", label="5e-3 target")
    ax.set_xlabel("run index")
    ax.set_ylabel("roof minus analytic")
    ax.set_yscale("symlog", linthresh=1e-12)
    ax.set_title("decomposition search vs closed form")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    return _finish(fig, path)
