"""Matplotlib figures for the report commands (rendered off-screen to files)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_META = {"Software": None}


def _save(fig, path: Path) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_META)
    plt.close(fig)
    return str(path)


def plot_examples(rows, out_dir) -> str:
    fig, ax = plt.subplots(figsize=(8, 0.32 * len(rows) + 1.2))
    labels = [f"{r.name}: {r.quantity}" for r in rows]
    y = range(len(rows))
    ax.barh([i + 0.2 for i in y], [r.pipeline for r in rows], height=0.4, label="pipeline")
    ax.barh([i - 0.2 for i in y], [r.closed_form for r in rows], height=0.4, label="closed form")
    ax.set_yticks(list(y))
    ax.set_yticklabels(labels, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("value")
    ax.legend(loc="lower right")
    return _save(fig, Path(out_dir) / "examples.png")


def plot_ellipsoid_sweep(n: int, a_values: Sequence[float], lam: Sequence[float],
                         isop_values: Sequence[float], true_values: Sequence[float],
                         out_dir) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(a_values, lam, "o-", label="lambda")
    ax.plot(a_values, isop_values, "s-", label="Isop(TM) from lambda")
    ax.plot(a_values, true_values, "^--", label="Isop(TM) from area formula")
    ax.axhline(1.0, color="gray", lw=0.8)
    ax.set_xscale("log")
    ax.set_xlabel("a")
    ax.set_title(f"half-ellipsoid, n = {n}")
    ax.legend()
    return _save(fig, Path(out_dir) / f"ellipsoid_n{n}.png")


def plot_search_trace(trace, out_dir, name: str = "affine_search.png") -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([r.evaluation for r in trace], [r.ratio for r in trace], ".", ms=2, alpha=0.5,
            label="evaluated")
    ax.plot([r.evaluation for r in trace], [r.best for r in trace], "-", label="best so far")
    ax.axhline(1.0, color="gray", lw=0.8)
    ax.set_xlabel("evaluation")
    ax.set_ylabel("facet Isop ratio")
    ax.legend()
    return _save(fig, Path(out_dir) / name)


def plot_wulff_sweep(ts, volumes, mixed, out_dir) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ts, volumes, "o-", label="V(W_t)")
    ax.plot(ts, mixed, "s-", label="V(W_t, K[n-1])")
    ax.set_xlabel("t")
    ax.legend()
    return _save(fig, Path(out_dir) / "wulff_sweep.png")


def plot_probe(report, out_dir) -> str:
    rows = [r for r in report["trials"] if r["status"] == "searched"]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([r["trial"] for r in rows], [r["initial_ratio"] for r in rows], "o", label="identity")
    ax.plot([r["trial"] for r in rows], [r["best_ratio"] for r in rows], "s", label="best T")
    ax.axhline(1.0, color="gray", lw=0.8)
    ax.set_yscale("log")
    ax.set_xlabel("trial")
    ax.set_ylabel("max facet Isop ratio")
    ax.legend()
    return _save(fig, Path(out_dir) / f"probe_{report['generator']}.png")
