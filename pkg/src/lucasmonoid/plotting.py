"""Report figures rendered next to the delimited outputs.

All figures use the Agg backend and fixed styling so identical inputs
produce identical files.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_DPI = 150


def _new_axes(title: str, xlabel: str, ylabel: str):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path: str) -> None:
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)


def save_mellin_figure(rows, path: str) -> None:
    """rows: (x, u, r, integral, smoothed_sum, rel_err)."""
    fig, ax = _new_axes("Smoothed-sum integral identity", "case", "relative error")
    labels = [f"x={int(x)}\nu={u:g}" for x, u, *_ in rows]
    errs = [max(row[5], 1e-18) for row in rows]
    ax.bar(range(len(rows)), errs, color="#32648e")
    ax.set_xticks(range(len(rows)), labels, fontsize=8)
    ax.set_yscale("log")
    ax.axhline(1e-3, color="firebrick", linestyle="--", label="tolerance 1e-3")
    ax.legend()
    _save(fig, path)


def save_dirichlet_figure(rows, path: str) -> None:
    """rows: (r, u, residual) for the central-estimate constant check."""
    fig, ax = _new_axes("Central-estimate residual", "r", "|residual|")
    by_u: dict[float, list[tuple[float, float]]] = {}
    for r, u, resid in rows:
        by_u.setdefault(u, []).append((r, abs(resid)))
    for u, pts in sorted(by_u.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", label=f"u = {u:g}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.legend()
    _save(fig, path)


def save_stats_figure(values: np.ndarray, kind: str, path: str,
                      reference_draws: np.ndarray | None = None) -> None:
    """Histogram of the normalized statistic with its reference law."""
    fig, ax = _new_axes(f"Normalized {kind} distribution", "z", "density")
    ax.hist(values, bins=80, density=True, alpha=0.6, color="#32648e",
            label="empirical")
    if reference_draws is None:
        grid = np.linspace(-4.5, 4.5, 400)
        pdf = np.exp(-(grid**2) / 2) / math.sqrt(2 * math.pi)
        ax.plot(grid, pdf, "firebrick", label="standard normal")
    else:
        ax.hist(reference_draws, bins=80, density=True, histtype="step",
                color="firebrick", label="limit-law sample")
    ax.legend()
    _save(fig, path)


def save_limit_law_figure(draws: np.ndarray, path: str) -> None:
    fig, ax = _new_axes("Limit-law Monte Carlo sample", "value", "density")
    ax.hist(draws, bins=100, density=True, color="#32648e", alpha=0.8)
    _save(fig, path)


def save_decay_profile_figure(rows, path: str) -> None:
    """rows: (t, log d(r,u) - Re log d(r+it,u))."""
    fig, ax = _new_axes("Off-axis decay profile", "t", "log d(r,u) - Re log d(r+it,u)")
    t = [row[0] for row in rows]
    v = [row[1] for row in rows]
    ax.plot(t, v, color="#32648e", linewidth=1.0)
    _save(fig, path)
