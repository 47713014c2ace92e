"""Spatial consistency score and the binary attack/bona-fide decision.

The score compares the top y-coordinate of the lowest detected face with
the top y-coordinate of the topmost detected person, normalized by image
height. A face printed on a torso sits far below where a person's head
starts, so attack frames score high and genuine ones near zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .detections import FrameDetections

NO_FACE = "no_face"
NO_PERSON = "no_person"
NO_FACE_AND_NO_PERSON = "no_face_and_no_person"

ATTACK = "attack"
BONA_FIDE = "bona_fide"
ABSTAIN = "abstain"

ABSTAIN_IS_ATTACK = "attack"
ABSTAIN_IS_ABSTAIN = "abstain"
ABSTAIN_POLICIES = (ABSTAIN_IS_ATTACK, ABSTAIN_IS_ABSTAIN)

DEFAULT_THRESHOLD = 0.35


class ConfigError(ValueError):
    """An operating parameter is outside its valid range."""


@dataclass(frozen=True)
class SpatialScore:
    """Either a normalized difference score in [-1, 1] or an abstention."""

    value: float | None
    abstain_reason: str | None = None

    def __post_init__(self):
        if (self.value is None) == (self.abstain_reason is None):
            raise ValueError("exactly one of value / abstain_reason must be set")

    @classmethod
    def of(cls, value: float) -> "SpatialScore":
        return cls(value=value)

    @classmethod
    def abstention(cls, reason: str) -> "SpatialScore":
        if reason not in (NO_FACE, NO_PERSON, NO_FACE_AND_NO_PERSON):
            raise ValueError(f"unknown abstention reason: {reason!r}")
        return cls(value=None, abstain_reason=reason)

    @property
    def is_abstention(self) -> bool:
        return self.value is None


@dataclass(frozen=True)
class MultiplicityFlags:
    """Detection counts; more than one face or person hints at an attack."""

    face_count: int
    person_count: int
    multiple_faces: bool
    multiple_persons: bool

    @classmethod
    def from_counts(cls, face_count: int, person_count: int) -> "MultiplicityFlags":
        return cls(face_count=face_count, person_count=person_count,
                   multiple_faces=face_count > 1,
                   multiple_persons=person_count > 1)


@dataclass(frozen=True)
class PadDecision:
    label: str
    score: SpatialScore
    threshold: float
    flags: MultiplicityFlags


def spatial_consistency_score(frame: FrameDetections) -> SpatialScore:
    """Score one frame: max face top-y minus min person top-y, over height.

    Abstains (a value, not an error) when either detection list is empty.
    """
    if not frame.faces and not frame.persons:
        return SpatialScore.abstention(NO_FACE_AND_NO_PERSON)
    if not frame.faces:
        return SpatialScore.abstention(NO_FACE)
    if not frame.persons:
        return SpatialScore.abstention(NO_PERSON)
    lowest_face_y = max(d.box.y for d in frame.faces)
    top_person_y = min(d.box.y for d in frame.persons)
    return SpatialScore.of(lowest_face_y / frame.image_height
                           - top_person_y / frame.image_height)


def multiplicity_flags(frame: FrameDetections) -> MultiplicityFlags:
    return MultiplicityFlags.from_counts(len(frame.faces), len(frame.persons))


def classify(frame: FrameDetections,
             threshold: float = DEFAULT_THRESHOLD,
             abstain_policy: str = ABSTAIN_IS_ATTACK,
             strict_multiplicity: bool = False) -> PadDecision:
    """Threshold the spatial score into an attack / bona fide decision.

    Decision rule is score >= threshold => attack (fail-closed on ties).
    Abstentions map to attack or to an explicit abstain label per policy.
    With strict_multiplicity, multiple detected faces force an attack label.
    """
    if not (-1.0 <= threshold <= 1.0):
        raise ConfigError(f"threshold must be in [-1, 1], got {threshold}")
    if abstain_policy not in ABSTAIN_POLICIES:
        raise ConfigError(f"unknown abstain policy: {abstain_policy!r}")
    score = spatial_consistency_score(frame)
    flags = multiplicity_flags(frame)
    if score.is_abstention:
        label = ATTACK if abstain_policy == ABSTAIN_IS_ATTACK else ABSTAIN
    elif score.value >= threshold:
        label = ATTACK
    else:
        label = BONA_FIDE
    if strict_multiplicity and flags.multiple_faces:
        label = ATTACK
    return PadDecision(label=label, score=score, threshold=threshold, flags=flags)
