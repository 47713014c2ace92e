"""Dataset manifest: one CSV row per evaluated presentation."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

BONA_FIDE = "bona_fide"
ATTACK = "attack"

SCENARIOS = ("normal", "covered", "left", "right", "stretch", "mask", "down", "up")

MANIFEST_HEADER = ["sample_id", "truth", "scenario", "subject_id",
                   "instrument_id", "detections_path"]


class ManifestError(ValueError):
    """A manifest file is malformed or violates a record invariant."""


@dataclass(frozen=True)
class SampleRecord:
    """One dataset row; instrument_id is set exactly for attack samples."""

    sample_id: str
    truth: str
    scenario: str
    subject_id: str
    instrument_id: str | None
    detections_path: Path

    def __post_init__(self):
        if self.truth not in (BONA_FIDE, ATTACK):
            raise ValueError(f"unknown truth label: {self.truth!r}")
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario: {self.scenario!r}")
        if (self.instrument_id is not None) != (self.truth == ATTACK):
            raise ValueError(
                "instrument_id must be present exactly for attack samples")


def load_manifest(path: str | Path) -> list[SampleRecord]:
    """Parse and validate a manifest CSV.

    Relative detections paths are resolved against the manifest's directory.
    """
    path = Path(path)
    base = path.parent
    records: list[SampleRecord] = []
    seen: set[str] = set()
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ManifestError(f"{path}: empty manifest") from None
        if header != MANIFEST_HEADER:
            raise ManifestError(
                f"{path}:1: bad header {header!r}, expected {MANIFEST_HEADER!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(MANIFEST_HEADER):
                raise ManifestError(
                    f"{path}:{lineno}: expected {len(MANIFEST_HEADER)} fields, "
                    f"got {len(row)}")
            sample_id, truth, scenario, subject_id, instrument_id, det_path = row
            if sample_id in seen:
                raise ManifestError(f"{path}:{lineno}: duplicate sample_id "
                                    f"{sample_id!r}")
            seen.add(sample_id)
            try:
                record = SampleRecord(
                    sample_id=sample_id,
                    truth=truth,
                    scenario=scenario,
                    subject_id=subject_id,
                    instrument_id=instrument_id or None,
                    detections_path=base / det_path,
                )
            except ValueError as exc:
                raise ManifestError(f"{path}:{lineno}: {exc}") from exc
            records.append(record)
    return records


def write_manifest(records: Sequence[SampleRecord], path: str | Path,
                   relative_to: str | Path | None = None) -> None:
    """Write records as manifest CSV, with paths relative to ``relative_to``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_HEADER)
        for r in records:
            det_path = r.detections_path
            if relative_to is not None:
                det_path = det_path.relative_to(relative_to)
            writer.writerow([r.sample_id, r.truth, r.scenario, r.subject_id,
                             r.instrument_id or "", det_path.as_posix()])
