"""Folder scanning and detections JSON-lines emission."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import imageio.v3 as iio
import numpy as np

from .backends import Box, FaceBackend, PersonBackend

log = logging.getLogger(__name__)

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff", ".webp"}


@dataclass(frozen=True)
class SidecarConfig:
    image_dir: Path
    output_path: Path
    face_backend: str = "generic-landmark"
    person_backend: str = "yolo-like"
    confidence_floor: float = 0.0

    def __post_init__(self):
        if not (0 <= self.confidence_floor < 1):
            raise ValueError("confidence_floor must be in [0, 1)")


@dataclass(frozen=True)
class RunStats:
    processed: int
    skipped: int


def _box_dict(box: Box) -> dict:
    return {"x": box.x, "y": box.y, "width": box.width, "height": box.height,
            "confidence": box.confidence}


def _clip_boxes(boxes: list[Box], width: int, height: int) -> list[Box]:
    # keep the interchange contract locally: boxes never leave the image
    out = []
    for b in boxes:
        x0 = min(max(b.x, 0.0), width)
        y0 = min(max(b.y, 0.0), height)
        x1 = min(max(b.x + b.width, 0.0), width)
        y1 = min(max(b.y + b.height, 0.0), height)
        if x1 > x0 and y1 > y0:
            out.append(Box(x=x0, y=y0, width=x1 - x0, height=y1 - y0,
                           confidence=b.confidence))
    return out


def detect_folder(config: SidecarConfig) -> RunStats:
    """Detect faces and persons in every image under config.image_dir.

    Writes one JSON line per decodable image, ordered by frame_id (the
    path relative to the folder). Undecodable files are logged and
    skipped. Raises FileNotFoundError when the folder has no images.
    """
    faces = FaceBackend(config.face_backend)
    persons = PersonBackend(config.person_backend)
    detector_name = (f"{faces.name}:{faces.model_version}"
                     f"+{persons.name}:{persons.model_version}")

    paths = sorted(p for p in Path(config.image_dir).rglob("*")
                   if p.suffix.lower() in IMAGE_SUFFIXES)
    if not paths:
        raise FileNotFoundError(f"no images found under {config.image_dir}")

    processed = skipped = 0
    lines = []
    for path in paths:
        frame_id = path.relative_to(config.image_dir).as_posix()
        try:
            image = np.asarray(iio.imread(path))
        except Exception as exc:
            log.warning("skipping undecodable image %s: %s", frame_id, exc)
            skipped += 1
            continue
        height, width = image.shape[:2]
        face_boxes = _clip_boxes(faces.detect(image), width, height)
        person_boxes = _clip_boxes(persons.detect(image), width, height)
        floor = config.confidence_floor
        record = {
            "frame_id": frame_id,
            "image_width": width,
            "image_height": height,
            "detector_name": detector_name,
            "faces": [_box_dict(b) for b in face_boxes
                      if b.confidence >= floor],
            "persons": [_box_dict(b) for b in person_boxes
                        if b.confidence >= floor],
        }
        lines.append(json.dumps(record))
        processed += 1

    config.output_path.parent.mkdir(parents=True, exist_ok=True)
    config.output_path.write_text("\n".join(lines) + ("\n" if lines else ""))
    if skipped:
        log.warning("skipped %d undecodable image(s)", skipped)
    return RunStats(processed=processed, skipped=skipped)
