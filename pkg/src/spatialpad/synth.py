"""Synthetic detection-scene generator.

Stands in for the non-redistributable capture data: emits detections JSON
files plus a manifest with the same structure the evaluation pipeline
expects from real recordings. Bona fide frames place the face at head
level (small face-to-person vertical offset); attack frames place it on
the torso (large offset), optionally with the wearer's own face also
visible above it. Positional jitter shifts a whole frame's boxes jointly,
so the configured offset ranges translate exactly into score ranges.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from .detections import FACE, PERSON, BoundingBox, Detection, FrameDetections, \
    frame_to_dict
from .manifest import ATTACK, BONA_FIDE, SCENARIOS, SampleRecord, write_manifest

DETECTOR_NAME = "synthetic"

N_BONA_FIDE_SUBJECTS = 19
N_ATTACK_SUBJECTS = 8
N_INSTRUMENTS = 100


@dataclass(frozen=True)
class SynthConfig:
    image_width: int = 1280
    image_height: int = 720
    n_bona_fide: int = 152
    n_attack: int = 200
    # face top y minus person top y, as a fraction of image height
    bona_fide_face_offset: tuple[float, float] = (0.00, 0.08)
    # lower bound sits above the 0.3-0.4 operating band so that the whole
    # band falls inside the class separation margin
    attack_face_offset: tuple[float, float] = (0.42, 0.60)
    real_face_visible_prob: float = 0.35
    jitter: float = 12.0
    seed: int = 0

    def __post_init__(self):
        for lo, hi in (self.bona_fide_face_offset, self.attack_face_offset):
            if not (0 <= lo <= hi <= 1):
                raise ValueError("offset ranges must be ordered and within [0, 1]")
        if self.attack_face_offset[0] <= self.bona_fide_face_offset[1]:
            raise ValueError("attack offset range must sit above the bona fide range")
        if not (0 <= self.real_face_visible_prob <= 1):
            raise ValueError("real_face_visible_prob must be in [0, 1]")
        if self.jitter < 0:
            raise ValueError("jitter must be >= 0")
        if self.image_width <= 0 or self.image_height <= 0:
            raise ValueError("image dimensions must be positive")
        if self.n_bona_fide < 0 or self.n_attack < 0:
            raise ValueError("sample counts must be >= 0")


def _face(rng: random.Random, top_y: float, cfg: SynthConfig) -> Detection:
    h = cfg.image_height * rng.uniform(0.12, 0.18)
    w = h * rng.uniform(0.75, 0.95)
    x = cfg.image_width / 2 - w / 2 + rng.uniform(-cfg.jitter, cfg.jitter)
    x = min(max(x, 0.0), cfg.image_width - w)
    h = min(h, cfg.image_height - top_y)
    return Detection(box=BoundingBox(x=x, y=top_y, width=w, height=h),
                     confidence=rng.uniform(0.75, 0.99), kind=FACE)


def _person(rng: random.Random, top_y: float, cfg: SynthConfig) -> Detection:
    w = cfg.image_width * rng.uniform(0.35, 0.55)
    x = cfg.image_width / 2 - w / 2 + rng.uniform(-cfg.jitter, cfg.jitter)
    x = min(max(x, 0.0), cfg.image_width - w)
    h = cfg.image_height - top_y - rng.uniform(0, 4)
    return Detection(box=BoundingBox(x=x, y=top_y, width=w, height=h),
                     confidence=rng.uniform(0.80, 0.99), kind=PERSON)


def _frame(rng: random.Random, sample_id: str, truth: str, scenario: str,
           cfg: SynthConfig) -> FrameDetections:
    # Jitter shifts person and face together, keeping the drawn offset exact.
    person_y = cfg.image_height * 0.10 + rng.uniform(0, cfg.jitter)
    person = _person(rng, person_y, cfg)
    if truth == BONA_FIDE:
        offset = rng.uniform(*cfg.bona_fide_face_offset)
        faces = [_face(rng, person_y + offset * cfg.image_height, cfg)]
    else:
        offset = rng.uniform(*cfg.attack_face_offset)
        torso_face = _face(rng, person_y + offset * cfg.image_height, cfg)
        faces = [torso_face]
        # The wearer's own face sits at head level, above the printed one.
        # The "covered" pose means the real face is concealed, so it never
        # yields a detection there.
        real_visible = rng.random() < cfg.real_face_visible_prob
        if scenario != "covered" and real_visible:
            head_offset = rng.uniform(0.0, 0.02)
            faces.insert(0, _face(rng, person_y + head_offset * cfg.image_height,
                                  cfg))
    return FrameDetections(frame_id=sample_id,
                           image_width=float(cfg.image_width),
                           image_height=float(cfg.image_height),
                           faces=tuple(faces), persons=(person,),
                           detector_name=DETECTOR_NAME)


def generate_synthetic(config: SynthConfig,
                       out_dir: str | Path) -> list[SampleRecord]:
    """Materialize detections files and a manifest under ``out_dir``.

    Deterministic for a fixed config: the same seed reproduces the output
    tree byte for byte.
    """
    out_dir = Path(out_dir)
    det_dir = out_dir / "detections"
    det_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(config.seed)
    records: list[SampleRecord] = []

    def emit(sample_id: str, truth: str, scenario: str, subject_id: str,
             instrument_id: str | None) -> None:
        frame = _frame(rng, sample_id, truth, scenario, config)
        det_path = det_dir / f"{sample_id}.json"
        det_path.write_text(json.dumps(frame_to_dict(frame)) + "\n")
        records.append(SampleRecord(
            sample_id=sample_id, truth=truth, scenario=scenario,
            subject_id=subject_id, instrument_id=instrument_id,
            detections_path=det_path))

    for i in range(config.n_bona_fide):
        emit(f"bf-{i:05d}", BONA_FIDE, SCENARIOS[i % len(SCENARIOS)],
             f"subject-{i % N_BONA_FIDE_SUBJECTS:02d}", None)
    for i in range(config.n_attack):
        emit(f"pa-{i:05d}", ATTACK, SCENARIOS[i % len(SCENARIOS)],
             f"subject-{i % N_ATTACK_SUBJECTS:02d}",
             f"tshirt-{i % N_INSTRUMENTS:03d}")

    write_manifest(records, out_dir / "manifest.csv", relative_to=out_dir)
    return records
