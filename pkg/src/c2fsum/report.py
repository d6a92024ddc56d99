"""Figure rendering for benchmark, sweep, and segmentation reports.

All functions write PNG files next to the delimited/JSON outputs produced by
the CLI; the Agg backend keeps rendering headless-safe.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .segmentation import BoundaryProfile


def save_bench_figure(report: Mapping, path: str | Path) -> Path:
    """Bar chart of mean scoring time per system, annotated with slowdowns."""
    systems = report["systems"]
    names = list(systems)
    means_ms = [systems[name]["mean_seconds"] * 1e3 for name in names]
    fastest = min(means_ms) if means_ms else 0.0

    fig, ax = plt.subplots(figsize=(max(4.0, 1.4 * len(names)), 3.2))
    bars = ax.bar(names, means_ms, color="#4878a8")
    for bar, ms in zip(bars, means_ms):
        label = f"{ms:.2f} ms"
        if fastest > 0.0 and ms > fastest:
            label += f"\nx{ms / fastest:.1f}"
        ax.annotate(
            label,
            xy=(bar.get_x() + bar.get_width() / 2, bar.get_height()),
            xytext=(0, 2),
            textcoords="offset points",
            ha="center",
            va="bottom",
            fontsize=8,
        )
    ax.set_ylabel("mean scoring time per document (ms)")
    ax.set_title(f"scoring time, mean of {report['repeats']} runs")
    ax.margins(y=0.2)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_sweep_figure(rows: Sequence[Mapping], param: str, path: str | Path) -> Path:
    """Line plots of block statistics (and ROUGE-1 when present) vs a parameter."""
    xs = [row[param] for row in rows]
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    ax.plot(xs, [row["mean_blocks"] for row in rows], marker="o", label="blocks")
    ax.plot(xs, [row["mean_beta"] for row in rows], marker="s", label="per-block quota")
    ax.set_xlabel(param)
    ax.set_ylabel("count")
    if any("rouge_1_f1" in row for row in rows):
        twin = ax.twinx()
        twin.plot(
            xs,
            [row.get("rouge_1_f1") for row in rows],
            marker="^",
            color="#a84848",
            label="ROUGE-1 F1",
        )
        twin.set_ylabel("ROUGE-1 F1")
        twin.legend(loc="upper right", fontsize=8)
    ax.legend(loc="upper left", fontsize=8)
    ax.set_title(f"segmentation response to {param}")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_profile_figure(profile: BoundaryProfile, doc_id: str, path: str | Path) -> Path:
    """Similarity and depth curves for one document with chosen boundaries."""
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6.4, 4.2), sharex=True)
    gaps = range(len(profile.raw_sims))
    top.plot(gaps, profile.raw_sims, label="gap similarity", color="#888888", lw=1)
    top.plot(gaps, profile.smoothed_sims, label="smoothed", color="#4878a8", lw=1.5)
    top.set_ylabel("cosine")
    top.legend(fontsize=8)
    bottom.plot(gaps, profile.depth_scores, label="depth", color="#48a878", lw=1.5)
    if profile.epsilon is not None:
        bottom.axhline(profile.epsilon, color="#a84848", ls="--", lw=1, label="threshold")
    for b in profile.boundaries:
        bottom.axvline(b, color="#a84848", alpha=0.4, lw=1)
    bottom.set_xlabel("gap index")
    bottom.set_ylabel("depth")
    bottom.legend(fontsize=8)
    top.set_title(f"boundary profile: {doc_id}")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


__all__ = ["save_bench_figure", "save_profile_figure", "save_sweep_figure"]
