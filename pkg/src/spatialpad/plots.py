"""Figure rendering for the report path (score distribution, error tradeoff)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .harness import histogram_bin_edges
from .metrics import ATTACK, BONA_FIDE, DetReport, ScoredSample

# Fixed metadata keeps repeated renders byte-identical.
_PNG_METADATA = {"Software": "spatialpad"}


def plot_score_distribution(samples: Sequence[ScoredSample],
                            path: str | Path) -> None:
    """Overlaid per-class histograms of the spatial consistency scores."""
    edges = histogram_bin_edges()
    bona = [s.score for s in samples if s.truth == BONA_FIDE]
    attack = [s.score for s in samples if s.truth == ATTACK]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.hist(bona, bins=edges, alpha=0.6, label="bona fide", color="tab:green")
    ax.hist(attack, bins=edges, alpha=0.6, label="attack", color="tab:red")
    ax.set_xlabel("spatial consistency score")
    ax.set_ylabel("count")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_METADATA)
    plt.close(fig)


def plot_det_tradeoff(report: DetReport, path: str | Path) -> None:
    """APCER and BPCER as functions of the decision threshold."""
    thresholds = [t for t, _, _ in report.points]
    apcers = [a for _, a, _ in report.points]
    bpcers = [b for _, _, b in report.points]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(thresholds, apcers, label="APCER", color="tab:red")
    ax.plot(thresholds, bpcers, label="BPCER", color="tab:blue")
    ax.axvline(report.deer_threshold, linestyle="--", color="gray",
               label=f"D-EER {100 * report.deer:.2f}%")
    ax.set_xlabel("threshold")
    ax.set_ylabel("error rate")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_METADATA)
    plt.close(fig)
