"""PAD and vulnerability metrics: APCER, BPCER, D-EER sweep, IAPAR, FNMR.

Score conventions, stated per operation: PAD scores are attack-positive
(higher means more attack-like, score >= threshold classifies as attack);
comparison scores are similarity (higher means accept, score >= threshold
accepts). Rates are stored as fractions; formatting as percentages is a
presentation-layer concern.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

BONA_FIDE = "bona_fide"
ATTACK = "attack"


class MissingClassError(ValueError):
    """A metric needing both classes got samples of only one."""


@dataclass(frozen=True)
class ScoredSample:
    sample_id: str
    truth: str
    score: float

    def __post_init__(self):
        if self.truth not in (BONA_FIDE, ATTACK):
            raise ValueError(f"unknown truth label: {self.truth!r}")
        if not math.isfinite(self.score):
            raise ValueError(f"sample {self.sample_id!r}: non-finite score")


@dataclass(frozen=True)
class DetReport:
    """Threshold sweep of (apcer, bpcer) pairs with the equal-error point."""

    points: tuple[tuple[float, float, float], ...]
    deer: float
    deer_threshold: float


def apcer(attack_scores: Sequence[float], threshold: float) -> float:
    """Fraction of attack scores strictly below threshold (missed attacks)."""
    if not attack_scores:
        raise ValueError("apcer is undefined for zero attack scores")
    return sum(1 for s in attack_scores if s < threshold) / len(attack_scores)


def bpcer(bona_fide_scores: Sequence[float], threshold: float) -> float:
    """Fraction of bona fide scores at or above threshold (false alarms)."""
    if not bona_fide_scores:
        raise ValueError("bpcer is undefined for zero bona fide scores")
    return sum(1 for s in bona_fide_scores if s >= threshold) / len(bona_fide_scores)


def det_curve(samples: Sequence[ScoredSample]) -> DetReport:
    """Sweep thresholds over the observed scores and locate the equal-error rate.

    Thresholds are the midpoints between adjacent distinct scores plus one
    sentinel below the minimum and one above the maximum. The equal error
    rate is (apcer + bpcer) / 2 at the threshold minimizing |apcer - bpcer|,
    ties broken toward the lower threshold; when an exact crossing exists
    this reduces to the common value there.
    """
    attack_scores = [s.score for s in samples if s.truth == ATTACK]
    bona_scores = [s.score for s in samples if s.truth == BONA_FIDE]
    if not attack_scores:
        raise MissingClassError("no attack samples")
    if not bona_scores:
        raise MissingClassError("no bona_fide samples")

    distinct = sorted(set(attack_scores) | set(bona_scores))
    thresholds = [distinct[0] - 1.0]
    thresholds += [(a + b) / 2 for a, b in zip(distinct, distinct[1:])]
    thresholds.append(distinct[-1] + 1.0)

    points = []
    best = None  # (abs diff, threshold index)
    for i, t in enumerate(thresholds):
        a = apcer(attack_scores, t)
        b = bpcer(bona_scores, t)
        points.append((t, a, b))
        diff = abs(a - b)
        if best is None or diff < best[0]:
            best = (diff, i)
    _, idx = best
    t, a, b = points[idx]
    return DetReport(points=tuple(points), deer=(a + b) / 2, deer_threshold=t)


def iapar(comparison_scores: Sequence[float], verification_threshold: float) -> float:
    """Fraction of attack-presentation similarity scores accepted."""
    if not comparison_scores:
        raise ValueError("iapar is undefined for zero scores")
    return sum(1 for s in comparison_scores
               if s >= verification_threshold) / len(comparison_scores)


def fnmr(mated_comparison_scores: Sequence[float],
         verification_threshold: float) -> float:
    """Fraction of mated similarity scores falsely rejected."""
    if not mated_comparison_scores:
        raise ValueError("fnmr is undefined for zero scores")
    return sum(1 for s in mated_comparison_scores
               if s < verification_threshold) / len(mated_comparison_scores)


def write_det_csv(report: DetReport, path: str | Path) -> None:
    """Export the sweep as CSV with header threshold,apcer,bpcer."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["threshold", "apcer", "bpcer"])
        for t, a, b in report.points:
            writer.writerow([t, a, b])


def det_summary(report: DetReport) -> dict:
    return {"deer": report.deer, "deer_threshold": report.deer_threshold}


def write_det_summary(report: DetReport, path: str | Path) -> None:
    Path(path).write_text(json.dumps(det_summary(report), indent=2) + "\n")
