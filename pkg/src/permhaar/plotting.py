"""Static figures for convergence tables and condition audits."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _style(ax, xlabel, ylabel):
    ax.set_xscale("log", base=2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, which="both", alpha=0.3)


def _save(fig, path):
    # a fixed hash salt keeps SVG output byte-stable across runs
    matplotlib.rcParams["svg.hashsalt"] = "permhaar"
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
    plt.close(fig)


def plot_convergence(rows, path, title=None):
    """Gap |MC mean - limit| against matrix size, with 4-SE bars."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    N = [r["N"] for r in rows]
    gap = [r["gap"] for r in rows]
    se = [4 * r["se"] for r in rows]
    ax.errorbar(N, gap, yerr=se, marker="o", capsize=3, label="|estimate - limit|")
    _style(ax, "matrix size N", "gap")
    ax.set_ylim(bottom=0)
    ax.legend(frameon=False)
    if title:
        ax.set_title(title, fontsize=9)
    _save(fig, path)


def plot_audit(report, path):
    """One panel per statistic kind, value against ladder size (log-log)."""
    kinds = [k for k in ("max", "2free", "lcm_L") if any(s.statistic == k for s in report.series)]
    fig, axes = plt.subplots(1, len(kinds), figsize=(4.5 * len(kinds), 3.5), squeeze=False)
    for ax, kind in zip(axes[0], kinds):
        for s in report.series:
            if s.statistic != kind:
                continue
            vals = [float(v) for v in s.values]
            ax.plot(s.sizes, vals, marker="o", label=" vs ".join(s.labels))
        _style(ax, "ladder size n", kind)
        if all(float(v) > 0 for s in report.series if s.statistic == kind for v in s.values):
            ax.set_yscale("log")
        ax.legend(fontsize=7, frameon=False)
    _save(fig, path)
