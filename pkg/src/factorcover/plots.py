"""Figure rendering for CLI reports.

Every function takes computed results and writes a PNG next to the
delimited output, returning the path written.  The Agg backend is forced
so rendering works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analytic import DeltaScanResult
from .growth import GrowthTrace


def stage_summary_figure(stage_counts: dict, path: str) -> str:
    """Bar chart of how many primes each escalation stage certified."""
    order = ["lemma", "lemma10", "lemma_ext", "fallback", "brute"]
    stages = [s for s in order if s in stage_counts]
    stages += sorted(k for k in stage_counts if k not in order)
    counts = [stage_counts[s] for s in stages]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(stages, counts, color="#4878a8")
    ax.set_ylabel("primes certified")
    ax.set_xlabel("stage")
    positive = [c for c in counts if c > 0]
    if positive and max(positive) > 50 * min(positive):
        ax.set_yscale("log")
    for i, c in enumerate(counts):
        ax.annotate(str(c), (i, c), ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def growth_trace_figure(trace: GrowthTrace, path: str) -> str:
    """Cardinality growth per step, branch-coded, with the p/2 line."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ms = [s.m for s in trace.steps]
    bs = [s.b_after for s in trace.steps]
    ax.plot([0] + ms, [trace.b1] + bs, color="#888888", lw=1, zorder=1)
    colors = {"i": "#c44e52", "ii": "#55a868", "iii": "#4c72b0"}
    for branch in ("ii", "iii", "i"):
        xs = [s.m for s in trace.steps if s.branch == branch]
        ys = [s.b_after for s in trace.steps if s.branch == branch]
        if xs:
            ax.scatter(xs, ys, color=colors[branch], label=f"branch {branch}", zorder=2)
    ax.axhline(trace.p / 2, color="#cccccc", ls="--", lw=1, label="p/2")
    ax.set_yscale("log")
    ax.set_xlabel("step")
    ax.set_ylabel("set cardinality")
    ax.set_title(f"growth at p={trace.p}, window {trace.window}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def delta_scan_figure(result: DeltaScanResult, path: str) -> str:
    """Step-cost coefficient over the window-scale grid."""
    lams = [row[0] for row in result.table]
    deltas = [row[2] for row in result.table]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(lams, deltas, marker="o", ms=3, color="#4c72b0")
    ax.scatter([result.best_lam], [result.delta_min], color="#c44e52", zorder=3,
               label=f"min {result.delta_min:.3f} at {result.best_lam:.1f}")
    ax.set_xlabel("window scale")
    ax.set_ylabel("step-cost coefficient")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
