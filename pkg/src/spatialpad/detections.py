"""Detection data types, the JSON interchange format, and confidence pre-processing.

Coordinate convention throughout: origin at the image's top-left corner,
y increases downward. Boxes are axis-aligned rectangles in pixel units.
"""

from __future__ import annotations

import json
import logging
import math
import statistics
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

FACE = "face"
PERSON = "person"

_REQUIRED_FRAME_KEYS = ("frame_id", "image_width", "image_height",
                        "detector_name", "faces", "persons")
_REQUIRED_BOX_KEYS = ("x", "y", "width", "height", "confidence")


class DetectionsParseError(ValueError):
    """A detections document violates the interchange schema."""


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned rectangle; (x, y) is the top-left corner in pixels."""

    x: float
    y: float
    width: float
    height: float

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError(
                f"box sides must be positive, got {self.width}x{self.height}")

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def min_side(self) -> float:
        return min(self.width, self.height)


@dataclass(frozen=True)
class Detection:
    """A single detected region with its raw detector confidence.

    ``confidence`` is the raw detector output; it may exceed [0, 1] before
    min-max normalization is applied.
    """

    box: BoundingBox
    confidence: float
    kind: str

    def __post_init__(self):
        if self.kind not in (FACE, PERSON):
            raise ValueError(f"unknown detection kind: {self.kind!r}")


@dataclass(frozen=True)
class FrameDetections:
    """All face and person detections found in a single image."""

    frame_id: str
    image_width: float
    image_height: float
    faces: tuple[Detection, ...]
    persons: tuple[Detection, ...]
    detector_name: str = ""

    def __post_init__(self):
        if not (self.image_width > 0 and self.image_height > 0):
            raise ValueError(
                f"frame {self.frame_id!r}: image dimensions must be positive")
        for det in self.faces:
            if det.kind != FACE:
                raise ValueError(f"frame {self.frame_id!r}: non-face in faces list")
        for det in self.persons:
            if det.kind != PERSON:
                raise ValueError(f"frame {self.frame_id!r}: non-person in persons list")
        # tolerance absorbs float roundoff from y + (height - y) style arithmetic
        eps = 1e-6 * max(self.image_width, self.image_height)
        for det in (*self.faces, *self.persons):
            b = det.box
            if b.x < -eps or b.y < -eps \
                    or b.x + b.width > self.image_width + eps \
                    or b.y + b.height > self.image_height + eps:
                raise ValueError(
                    f"frame {self.frame_id!r}: box {b} outside image bounds "
                    f"{self.image_width}x{self.image_height}")


@dataclass(frozen=True)
class FilterPolicy:
    """Size thresholds for dropping implausibly small face detections.

    A face is removed when its area is below ``min_relative_area`` times the
    image area, or its shorter side is below ``min_side`` pixels.
    """

    min_relative_area: float = 0.0005
    min_side: float = 10.0

    def __post_init__(self):
        if not (0 <= self.min_relative_area < 1):
            raise ValueError("min_relative_area must be in [0, 1)")
        if self.min_side < 0:
            raise ValueError("min_side must be >= 0")


def filter_small_detections(frame: FrameDetections,
                            policy: FilterPolicy) -> FrameDetections:
    """Drop small face detections per ``policy``; persons are never filtered."""
    min_area = policy.min_relative_area * frame.image_width * frame.image_height
    kept = tuple(d for d in frame.faces
                 if d.box.area >= min_area and d.box.min_side >= policy.min_side)
    return replace(frame, faces=kept)


def minmax_normalize_confidences(confidences: Sequence[float]) -> list[float]:
    """Map raw confidences to [0, 1] via (v - min) / (max - min).

    A constant list maps to all zeros (a constant confidence carries no
    ranking information). Raises on non-finite values.
    """
    for v in confidences:
        if not math.isfinite(v):
            raise ValueError(f"non-finite confidence value: {v}")
    if not confidences:
        return []
    lo, hi = min(confidences), max(confidences)
    if hi == lo:
        return [0.0] * len(confidences)
    return [(v - lo) / (hi - lo) for v in confidences]


def detection_success_rate(records: Sequence[tuple[str, bool]]) -> float:
    """Fraction of (frame_id, detected) records with detected=True."""
    if not records:
        raise ValueError("success rate is undefined for zero records")
    return sum(1 for _, detected in records if detected) / len(records)


def average_confidence(confidences: Sequence[float]) -> float:
    """Arithmetic mean of normalized confidence values."""
    if not confidences:
        raise ValueError("average of zero confidences is undefined")
    return statistics.fmean(confidences)


def _clamp_box(raw: dict, image_width: float, image_height: float,
               frame_id: str) -> BoundingBox | None:
    """Clamp a raw box to the image; return None if nothing remains."""
    rx, ry = float(raw["x"]), float(raw["y"])
    rw, rh = float(raw["width"]), float(raw["height"])
    x0 = min(max(rx, 0.0), image_width)
    y0 = min(max(ry, 0.0), image_height)
    x1 = min(max(rx + rw, 0.0), image_width)
    y1 = min(max(ry + rh, 0.0), image_height)
    if x1 - x0 <= 0 or y1 - y0 <= 0:
        log.warning("frame %r: dropping box with no in-image area: %r",
                    frame_id, raw)
        return None
    if (x0, y0, x1, y1) != (rx, ry, rx + rw, ry + rh):
        log.warning("frame %r: clamped out-of-bounds box %r", frame_id, raw)
    return BoundingBox(x=x0, y=y0, width=x1 - x0, height=y1 - y0)


def _parse_detection_list(raw_list, kind: str, image_width: float,
                          image_height: float, frame_id: str) -> tuple[Detection, ...]:
    if not isinstance(raw_list, list):
        raise DetectionsParseError(
            f"frame {frame_id!r}: {kind} list must be an array")
    out = []
    for raw in raw_list:
        if not isinstance(raw, dict):
            raise DetectionsParseError(
                f"frame {frame_id!r}: {kind} entry must be an object")
        for key in _REQUIRED_BOX_KEYS:
            if key not in raw:
                raise DetectionsParseError(
                    f"frame {frame_id!r}: {kind} entry missing required key {key!r}")
        conf = raw["confidence"]
        if not isinstance(conf, (int, float)) or isinstance(conf, bool) \
                or not math.isfinite(conf):
            raise DetectionsParseError(
                f"frame {frame_id!r}: non-finite or non-numeric confidence")
        box = _clamp_box(raw, image_width, image_height, frame_id)
        if box is None:
            continue
        out.append(Detection(box=box, confidence=float(conf), kind=kind))
    return tuple(out)


def parse_frame(obj: dict) -> FrameDetections:
    """Build a validated FrameDetections from one interchange-format object.

    Unknown keys are ignored; missing required keys raise
    DetectionsParseError naming the key and frame_id.
    """
    if not isinstance(obj, dict):
        raise DetectionsParseError("frame document must be a JSON object")
    frame_id = obj.get("frame_id", "<unknown>")
    for key in _REQUIRED_FRAME_KEYS:
        if key not in obj:
            raise DetectionsParseError(
                f"frame {frame_id!r}: missing required key {key!r}")
    width = obj["image_width"]
    height = obj["image_height"]
    if not isinstance(width, (int, float)) or not isinstance(height, (int, float)) \
            or width <= 0 or height <= 0:
        raise DetectionsParseError(
            f"frame {frame_id!r}: image dimensions must be positive numbers")
    faces = _parse_detection_list(obj["faces"], FACE, width, height, frame_id)
    persons = _parse_detection_list(obj["persons"], PERSON, width, height, frame_id)
    return FrameDetections(
        frame_id=str(obj["frame_id"]),
        image_width=float(width),
        image_height=float(height),
        faces=faces,
        persons=persons,
        detector_name=str(obj["detector_name"]),
    )


def frame_to_dict(frame: FrameDetections) -> dict:
    """Serialize a frame back to the interchange-format object."""
    def det_list(dets: Iterable[Detection]) -> list[dict]:
        return [{"x": d.box.x, "y": d.box.y, "width": d.box.width,
                 "height": d.box.height, "confidence": d.confidence}
                for d in dets]

    return {
        "frame_id": frame.frame_id,
        "image_width": frame.image_width,
        "image_height": frame.image_height,
        "detector_name": frame.detector_name,
        "faces": det_list(frame.faces),
        "persons": det_list(frame.persons),
    }


def load_detections(path: str | Path) -> list[FrameDetections]:
    """Load frames from a file holding one JSON document or a JSON-lines stream."""
    text = Path(path).read_text()
    stripped = text.strip()
    if not stripped:
        raise DetectionsParseError(f"{path}: empty detections file")
    try:
        doc = json.loads(stripped)
    except json.JSONDecodeError:
        doc = None
    if isinstance(doc, dict):
        return [parse_frame(doc)]
    if isinstance(doc, list):
        return [parse_frame(o) for o in doc]
    frames = []
    for lineno, line in enumerate(stripped.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DetectionsParseError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        frames.append(parse_frame(obj))
    return frames
