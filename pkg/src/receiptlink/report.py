"""Report rendering: console table, JSON, per-mention TSV, accuracy figure."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from .linking import Report
from .textprep import CollocationStats


def format_table(report: Report) -> str:
    """Fixed-width summary table, one row per strategy."""
    lines = [f"{'strategy':<14}{'hits':>6}{'total':>7}{'accuracy':>10}"]
    for result in report.results:
        lines.append(
            f"{result.strategy.value:<14}{result.hits:>6}{result.total:>7}"
            f"{result.accuracy:>10.4f}"
        )
    return "\n".join(lines) + "\n"


def report_json(report: Report) -> str:
    """Machine-readable summary keyed by strategy name."""
    payload = {
        result.strategy.value: {
            "accuracy": result.accuracy,
            "hits": result.hits,
            "total": result.total,
        }
        for result in report.results
    }
    return json.dumps(payload, indent=2) + "\n"


def report_tsv(report: Report) -> str:
    """Per-mention rows: mention, predicted id, gold ids, hit flag.

    With more than one strategy in the report, each block is preceded by a
    comment line naming the strategy.
    """
    lines = ["mention\tpredicted\tgold_ids\thit"]
    for result in report.results:
        if len(report.results) > 1:
            lines.append(f"# {result.strategy.value}")
        for p in result.predictions:
            predicted = p.predicted_entity if p.predicted_entity is not None else "-"
            lines.append(
                f"{p.mention}\t{predicted}\t{','.join(p.gold_ids)}\t"
                f"{'true' if p.hit else 'false'}"
            )
    return "\n".join(lines) + "\n"


def collocations_tsv(stats: Sequence[CollocationStats]) -> str:
    """One line per n-gram: space-joined tokens, count, PMI to 6 decimals."""
    lines = [f"{' '.join(s.ngram)}\t{s.count}\t{s.pmi:.6f}" for s in stats]
    return "".join(line + "\n" for line in lines)


def render_accuracy_figure(report: Report, path: str | Path) -> None:
    """Write a bar chart of top-1 accuracy per strategy to an image file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = [result.strategy.value for result in report.results]
    accuracies = [result.accuracy for result in report.results]
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    bars = ax.bar(names, accuracies, color="#4878a8")
    ax.bar_label(bars, fmt="%.3f", padding=2)
    ax.set_ylim(0.0, 1.08)
    ax.set_ylabel("top-1 accuracy")
    ax.set_title("Linking accuracy by query strategy")
    ax.grid(axis="y", alpha=0.3)
    ax.set_axisbelow(True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
