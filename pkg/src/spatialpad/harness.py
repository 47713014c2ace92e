"""Manifest-driven evaluation: per-sample scoring, per-scenario aggregation,
DET report, and the exported artifact files."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .detections import (FilterPolicy, FrameDetections, average_confidence,
                         detection_success_rate, filter_small_detections,
                         load_detections, minmax_normalize_confidences)
from .manifest import ATTACK, BONA_FIDE, SCENARIOS, SampleRecord
from .metrics import DetReport, ScoredSample, det_curve
from .scoring import ABSTAIN, ABSTAIN_IS_ATTACK, DEFAULT_THRESHOLD, classify

ABSTAIN_SENTINEL_SCORE = 1.0  # maximal attack-likeness for fail-closed abstentions

HISTOGRAM_BIN_WIDTH = 0.05
HISTOGRAM_RANGE = (-1.0, 1.0)


class EvaluationError(ValueError):
    """The evaluation inputs are unusable (empty set, missing files, ...)."""


@dataclass(frozen=True)
class ScenarioReport:
    """Face-detection statistics for one (scenario, class) group.

    avg_confidence is None when no frame in the group had a detected face.
    """

    scenario: str
    truth: str
    success_rate: float
    avg_confidence: float | None
    sample_count: int


@dataclass(frozen=True)
class EvaluationResult:
    samples: tuple[ScoredSample, ...]
    det: DetReport
    scenarios: tuple[ScenarioReport, ...]
    abstained: int
    # decision labels at the operating threshold, keyed by sample_id
    labels: dict[str, str]

    @property
    def misclassified(self) -> int:
        by_id = {s.sample_id: s.truth for s in self.samples}
        return sum(1 for sid, label in self.labels.items()
                   if label != ABSTAIN and sid in by_id and label != by_id[sid])


def _load_single_frame(record: SampleRecord) -> FrameDetections:
    frames = load_detections(record.detections_path)
    if len(frames) == 1:
        return frames[0]
    for frame in frames:
        if frame.frame_id == record.sample_id:
            return frame
    raise EvaluationError(
        f"{record.detections_path}: no frame with id {record.sample_id!r}")


def run_evaluation(records: Sequence[SampleRecord],
                   filter_policy: FilterPolicy = FilterPolicy(),
                   threshold: float = DEFAULT_THRESHOLD,
                   abstain_policy: str = ABSTAIN_IS_ATTACK,
                   strict_multiplicity: bool = False,
                   workers: int = 1) -> EvaluationResult:
    """Score every record and aggregate DET and per-scenario statistics.

    Output is sorted by sample_id and identical for any worker count.
    """
    if not records:
        raise EvaluationError("no records to evaluate")
    missing = [r.detections_path for r in records
               if not Path(r.detections_path).is_file()]
    if missing:
        listing = ", ".join(str(p) for p in missing)
        raise EvaluationError(f"missing detections files: {listing}")

    records = sorted(records, key=lambda r: r.sample_id)

    def score_one(record: SampleRecord):
        frame = filter_small_detections(_load_single_frame(record), filter_policy)
        decision = classify(frame, threshold=threshold,
                            abstain_policy=abstain_policy,
                            strict_multiplicity=strict_multiplicity)
        return record, frame, decision

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(score_one, records))
    else:
        rows = [score_one(r) for r in records]

    samples: list[ScoredSample] = []
    labels: dict[str, str] = {}
    abstained = 0
    for record, frame, decision in rows:
        labels[record.sample_id] = decision.label
        if decision.score.is_abstention:
            if decision.label == ABSTAIN:
                abstained += 1
                continue
            value = ABSTAIN_SENTINEL_SCORE
        else:
            value = decision.score.value
        samples.append(ScoredSample(sample_id=record.sample_id,
                                    truth=record.truth, score=value))

    report = det_curve(samples)
    scenarios = _scenario_reports(rows)
    return EvaluationResult(samples=tuple(samples), det=report,
                            scenarios=tuple(scenarios), abstained=abstained,
                            labels=labels)


def _scenario_reports(rows) -> list[ScenarioReport]:
    """Per (scenario, class): detection success rate and mean normalized
    confidence of the best face per detected frame."""
    # Min-max normalization is computed per detector backend over the whole
    # evaluated set, never per frame or per scenario.
    detected: list[tuple[SampleRecord, str, float]] = []
    per_group: dict[tuple[str, str], list[tuple[str, bool]]] = {}
    for record, frame, _ in rows:
        key = (record.scenario, record.truth)
        has_face = len(frame.faces) > 0
        per_group.setdefault(key, []).append((record.sample_id, has_face))
        if has_face:
            best = max(d.confidence for d in frame.faces)
            detected.append((record, frame.detector_name, best))

    normalized: dict[str, float] = {}
    by_detector: dict[str, list[tuple[str, float]]] = {}
    for record, detector, conf in detected:
        by_detector.setdefault(detector, []).append((record.sample_id, conf))
    for detector, entries in by_detector.items():
        values = minmax_normalize_confidences([c for _, c in entries])
        for (sid, _), v in zip(entries, values):
            normalized[sid] = v

    group_conf: dict[tuple[str, str], list[float]] = {}
    for record, _, _ in detected:
        key = (record.scenario, record.truth)
        group_conf.setdefault(key, []).append(normalized[record.sample_id])

    reports = []
    for scenario in SCENARIOS:
        for truth in (BONA_FIDE, ATTACK):
            key = (scenario, truth)
            if key not in per_group:
                continue
            confs = group_conf.get(key, [])
            reports.append(ScenarioReport(
                scenario=scenario, truth=truth,
                success_rate=detection_success_rate(per_group[key]),
                avg_confidence=average_confidence(confs) if confs else None,
                sample_count=len(per_group[key])))
    return reports


def histogram_bin_edges() -> list[float]:
    lo, hi = HISTOGRAM_RANGE
    n = round((hi - lo) / HISTOGRAM_BIN_WIDTH)
    return [lo + (hi - lo) * i / n for i in range(n + 1)]


def _bin_index(score: float, n_bins: int) -> int:
    lo, hi = HISTOGRAM_RANGE
    idx = math.floor((score - lo) / (hi - lo) * n_bins)
    return min(max(idx, 0), n_bins - 1)  # top edge folds into the last bin


def score_histogram(samples: Sequence[ScoredSample]) -> dict:
    edges = histogram_bin_edges()
    n_bins = len(edges) - 1
    counts = {BONA_FIDE: [0] * n_bins, ATTACK: [0] * n_bins}
    for s in samples:
        counts[s.truth][_bin_index(s.score, n_bins)] += 1
    return {"bin_edges": edges, "counts": counts}


def export_score_distribution(samples: Sequence[ScoredSample],
                              csv_path: str | Path,
                              histogram_path: str | Path) -> None:
    """Write per-sample scores as CSV and the binned distribution as JSON."""
    if not samples:
        raise ValueError("no samples to export")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_id", "truth", "score"])
        for s in samples:
            writer.writerow([s.sample_id, s.truth, s.score])
    Path(histogram_path).write_text(
        json.dumps(score_histogram(samples), indent=2) + "\n")


def render_scenario_table(reports: Sequence[ScenarioReport]) -> str:
    """Plain-text table grouped by scenario, bona fide row before attack."""
    if not reports:
        raise ValueError("no scenario reports to render")
    order = {(s, t): (i, j) for i, s in enumerate(SCENARIOS)
             for j, t in enumerate((BONA_FIDE, ATTACK))}
    rows = sorted(reports, key=lambda r: order[(r.scenario, r.truth)])
    header = f"{'Scenario':<10} {'Class':<10} {'Success %':>10} {'Avg. score':>11} {'Samples':>8}"
    lines = [header, "-" * len(header)]
    for r in rows:
        avg = f"{r.avg_confidence:.2f}" if r.avg_confidence is not None else "n/a"
        lines.append(f"{r.scenario:<10} {r.truth:<10} "
                     f"{100 * r.success_rate:>10.2f} {avg:>11} "
                     f"{r.sample_count:>8}")
    return "\n".join(lines) + "\n"
