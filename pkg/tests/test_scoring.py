"""Tests for the spatial consistency score and the PAD decision."""

import random

import pytest

from spatialpad.detections import FACE, PERSON, BoundingBox, Detection, \
    FrameDetections
from spatialpad.scoring import (
    ABSTAIN,
    ABSTAIN_IS_ABSTAIN,
    ABSTAIN_IS_ATTACK,
    ATTACK,
    BONA_FIDE,
    NO_FACE,
    NO_FACE_AND_NO_PERSON,
    NO_PERSON,
    ConfigError,
    SpatialScore,
    classify,
    multiplicity_flags,
    spatial_consistency_score,
)


def make_frame(face_ys=(), person_ys=(), height=720.0, width=1280.0):
    faces = tuple(Detection(box=BoundingBox(10, y, 50, min(50, height - y)),
                            confidence=0.9, kind=FACE) for y in face_ys)
    persons = tuple(Detection(box=BoundingBox(5, y, 200, min(300, height - y)),
                              confidence=0.9, kind=PERSON) for y in person_ys)
    return FrameDetections(frame_id="t", image_width=width, image_height=height,
                           faces=faces, persons=persons, detector_name="test")


def brute_force_score(frame):
    """Independent re-derivation: explicit max/min scan, no sorting."""
    if not frame.faces or not frame.persons:
        return None
    lowest = frame.faces[0].box.y
    for d in frame.faces:
        if d.box.y > lowest:
            lowest = d.box.y
    top = frame.persons[0].box.y
    for d in frame.persons:
        if d.box.y < top:
            top = d.box.y
    return lowest / frame.image_height - top / frame.image_height


class TestSpatialScore:
    def test_single_face_single_person(self):
        score = spatial_consistency_score(make_frame([400], [40]))
        assert score.value == pytest.approx(0.5)

    def test_equal_y_gives_zero(self):
        score = spatial_consistency_score(make_frame([100], [100]))
        assert score.value == 0.0

    def test_extremes_selected(self):
        score = spatial_consistency_score(make_frame([50, 400], [40, 60]))
        assert score.value == pytest.approx(0.5)

    def test_abstentions(self):
        assert spatial_consistency_score(
            make_frame([], [40])).abstain_reason == NO_FACE
        assert spatial_consistency_score(
            make_frame([400], [])).abstain_reason == NO_PERSON
        assert spatial_consistency_score(
            make_frame([], [])).abstain_reason == NO_FACE_AND_NO_PERSON

    def test_score_or_reason_exclusive(self):
        with pytest.raises(ValueError):
            SpatialScore(value=0.5, abstain_reason=NO_FACE)
        with pytest.raises(ValueError):
            SpatialScore(value=None, abstain_reason=None)

    def test_bounded(self):
        rng = random.Random(11)
        for _ in range(500):
            f = _random_frame(rng)
            s = spatial_consistency_score(f)
            if not s.is_abstention:
                assert -1.0 <= s.value <= 1.0


def _random_frame(rng, height=None):
    height = height or rng.uniform(100, 2000)
    n_faces = rng.randrange(0, 4)
    n_persons = rng.randrange(0, 4)
    return make_frame(
        face_ys=[rng.uniform(0, height - 51) for _ in range(n_faces)],
        person_ys=[rng.uniform(0, height - 51) for _ in range(n_persons)],
        height=height)


class TestInvariances:
    def test_matches_brute_force(self):
        rng = random.Random(12)
        for _ in range(500):
            f = _random_frame(rng)
            got = spatial_consistency_score(f)
            want = brute_force_score(f)
            if want is None:
                assert got.is_abstention
            else:
                assert got.value == pytest.approx(want, abs=1e-12)

    def test_x_translation_invariance(self):
        f = make_frame([50, 400], [40, 60])
        moved = make_frame([50, 400], [40, 60])
        # rebuild with different x/width
        faces = tuple(Detection(box=BoundingBox(d.box.x + 37, d.box.y,
                                                d.box.width * 2, d.box.height),
                                confidence=d.confidence, kind=d.kind)
                      for d in moved.faces)
        moved = FrameDetections(frame_id=f.frame_id, image_width=f.image_width,
                                image_height=f.image_height, faces=faces,
                                persons=f.persons, detector_name=f.detector_name)
        assert spatial_consistency_score(moved).value == \
            spatial_consistency_score(f).value

    def test_joint_vertical_shift(self):
        rng = random.Random(13)
        for _ in range(200):
            h = 1000.0
            face_ys = [rng.uniform(0, 400) for _ in range(rng.randrange(1, 4))]
            person_ys = [rng.uniform(0, 400) for _ in range(rng.randrange(1, 4))]
            d = rng.uniform(0, 400)
            a = spatial_consistency_score(make_frame(face_ys, person_ys, h))
            b = spatial_consistency_score(
                make_frame([y + d for y in face_ys],
                           [y + d for y in person_ys], h))
            assert b.value == pytest.approx(a.value, abs=1e-12)

    def test_scale_invariance(self):
        rng = random.Random(14)
        for _ in range(200):
            h = 720.0
            face_ys = [rng.uniform(0, 600) for _ in range(2)]
            person_ys = [rng.uniform(0, 600) for _ in range(2)]
            k = rng.uniform(0.5, 4.0)
            a = spatial_consistency_score(make_frame(face_ys, person_ys, h))
            b = spatial_consistency_score(
                make_frame([y * k for y in face_ys],
                           [y * k for y in person_ys], h * k))
            assert b.value == pytest.approx(a.value, abs=1e-12)

    def test_monotonicity(self):
        base = spatial_consistency_score(make_frame([300], [100])).value
        lower_face = spatial_consistency_score(make_frame([350], [100])).value
        higher_person = spatial_consistency_score(make_frame([300], [50])).value
        assert lower_face > base
        assert higher_person > base

    def test_permutation_invariance(self):
        rng = random.Random(15)
        face_ys = [rng.uniform(0, 600) for _ in range(4)]
        person_ys = [rng.uniform(0, 600) for _ in range(4)]
        a = spatial_consistency_score(make_frame(face_ys, person_ys))
        for _ in range(10):
            rng.shuffle(face_ys)
            rng.shuffle(person_ys)
            assert spatial_consistency_score(
                make_frame(face_ys, person_ys)).value == a.value


class TestMultiplicityFlags:
    @pytest.mark.parametrize("n_faces,n_persons,mf,mp", [
        (1, 1, False, False),
        (2, 1, True, False),
        (0, 3, False, True),
    ])
    def test_counts(self, n_faces, n_persons, mf, mp):
        f = make_frame([100] * n_faces, [50] * n_persons)
        flags = multiplicity_flags(f)
        assert flags.face_count == n_faces
        assert flags.person_count == n_persons
        assert flags.multiple_faces == mf
        assert flags.multiple_persons == mp


class TestClassify:
    def test_attack_above_threshold(self):
        d = classify(make_frame([400], [40]), threshold=0.35)
        assert d.label == ATTACK
        assert d.score.value == pytest.approx(0.5)

    def test_bona_fide_below_threshold(self):
        # score 0.02: face barely below person top
        d = classify(make_frame([114.4], [100]), threshold=0.35)
        assert d.score.value == pytest.approx(0.02)
        assert d.label == BONA_FIDE

    def test_tie_is_attack(self):
        d = classify(make_frame([292], [40]), threshold=0.35)
        assert d.score.value == pytest.approx(0.35)
        assert d.label == ATTACK

    def test_threshold_validation(self):
        with pytest.raises(ConfigError):
            classify(make_frame([400], [40]), threshold=1.5)
        with pytest.raises(ConfigError):
            classify(make_frame([400], [40]), threshold=-1.01)

    def test_abstention_policy_enumeration(self):
        # exhaustive case table: (faces, persons) x policy
        cases = {
            ((), (40.0,)): NO_FACE,
            ((400.0,), ()): NO_PERSON,
            ((), ()): NO_FACE_AND_NO_PERSON,
        }
        for (face_ys, person_ys), reason in cases.items():
            f = make_frame(face_ys, person_ys)
            d = classify(f, abstain_policy=ABSTAIN_IS_ATTACK)
            assert d.label == ATTACK
            assert d.score.abstain_reason == reason
            d = classify(f, abstain_policy=ABSTAIN_IS_ABSTAIN)
            assert d.label == ABSTAIN
            assert d.score.abstain_reason == reason

    def test_never_bona_fide_on_empty_list_fail_closed(self):
        rng = random.Random(16)
        for _ in range(200):
            f = _random_frame(rng)
            if f.faces and f.persons:
                continue
            d = classify(f, abstain_policy=ABSTAIN_IS_ATTACK)
            assert d.label != BONA_FIDE

    def test_flags_always_populated(self):
        d = classify(make_frame([], [40, 50, 60]))
        assert d.flags.person_count == 3

    def test_decision_depends_only_on_extremes(self):
        a = classify(make_frame([100, 400], [40, 500]), threshold=0.35)
        b = classify(make_frame([250, 400], [40, 300]), threshold=0.35)
        assert a.label == b.label
        assert a.score.value == b.score.value

    def test_strict_multiplicity(self):
        f = make_frame([100, 110], [95])
        assert classify(f, threshold=0.35).label == BONA_FIDE
        assert classify(f, threshold=0.35,
                        strict_multiplicity=True).label == ATTACK

    def test_extra_higher_face_never_changes_score(self):
        base = make_frame([400], [40])
        with_real_face = make_frame([50, 400], [40])
        assert spatial_consistency_score(with_real_face).value == \
            spatial_consistency_score(base).value
