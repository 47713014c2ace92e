"""Sidecar tests: synthetic image folder, round-trip into the core parser."""

import json
import subprocess
import sys
from pathlib import Path

import imageio.v3 as iio
import numpy as np
import pytest
from skimage import data

from detector_sidecar import BackendError, FaceBackend, PersonBackend, \
    SidecarConfig, detect_folder

from spatialpad.detections import parse_frame

FACE_CROP = (slice(20, 200), slice(140, 310))  # astronaut's face region


def face_patch() -> np.ndarray:
    return data.astronaut()[FACE_CROP]


def make_scene(canvas_hw, paste_xy, background=230) -> np.ndarray:
    h, w = canvas_hw
    canvas = np.full((h, w, 3), background, dtype=np.uint8)
    patch = face_patch()
    x, y = paste_xy
    canvas[y:y + patch.shape[0], x:x + patch.shape[1]] = patch
    return canvas


@pytest.fixture(scope="module")
def image_folder(tmp_path_factory):
    folder = tmp_path_factory.mktemp("images")
    rng = np.random.default_rng(0)
    for i in range(10):
        x = int(rng.integers(0, 300))
        y = int(rng.integers(0, 250))
        iio.imwrite(folder / f"img{i:02d}.png", make_scene((512, 640), (x, y)))
    return folder


class TestBackends:
    def test_unknown_backend_rejected(self):
        with pytest.raises(BackendError):
            FaceBackend("caffe-thing")
        with pytest.raises(BackendError):
            PersonBackend("rcnn-like")

    def test_face_backend_finds_astronaut_face(self):
        boxes = FaceBackend("generic-landmark").detect(data.astronaut())
        assert boxes, "expected at least one face on the reference image"
        b = max(boxes, key=lambda b: b.width * b.height)
        # known face position: roughly rows 25-190, cols 140-280
        assert 100 <= b.x <= 300 and 0 <= b.y <= 220

    def test_person_backend_boxes_foreground(self):
        scene = make_scene((512, 640), (100, 150))
        boxes = PersonBackend("yolo-like").detect(scene)
        assert len(boxes) == 1
        b = boxes[0]
        assert b.x <= 100 + 5 and b.y <= 150 + 5
        assert 0 < b.confidence <= 1

    def test_person_backend_empty_on_blank(self):
        blank = np.full((128, 128, 3), 230, dtype=np.uint8)
        assert PersonBackend("yolo-like").detect(blank) == []


class TestDetectFolder:
    def test_one_line_per_image(self, image_folder, tmp_path):
        out = tmp_path / "detections.jsonl"
        stats = detect_folder(SidecarConfig(image_dir=image_folder,
                                            output_path=out))
        assert stats.processed == 10
        lines = out.read_text().splitlines()
        assert len(lines) == 10

    def test_round_trip_into_core_parser(self, image_folder, tmp_path):
        out = tmp_path / "detections.jsonl"
        detect_folder(SidecarConfig(image_dir=image_folder, output_path=out))
        frames = [parse_frame(json.loads(line))
                  for line in out.read_text().splitlines()]
        assert len(frames) == 10
        ids = [f.frame_id for f in frames]
        assert ids == sorted(ids)
        assert len(set(ids)) == 10

    def test_known_offset_face_box_overlaps_pasted_region(self, tmp_path):
        folder = tmp_path / "imgs"
        folder.mkdir()
        x0, y0 = 180, 120
        iio.imwrite(folder / "known.png", make_scene((512, 640), (x0, y0)))
        out = tmp_path / "det.jsonl"
        detect_folder(SidecarConfig(image_dir=folder, output_path=out))
        frame = parse_frame(json.loads(out.read_text().splitlines()[0]))
        assert frame.faces, "pasted face not detected"
        patch_h, patch_w = face_patch().shape[:2]
        box = frame.faces[0].box
        # overlap check, not pixel-exact
        assert box.x < x0 + patch_w and box.x + box.width > x0
        assert box.y < y0 + patch_h and box.y + box.height > y0

    def test_undecodable_image_skipped(self, tmp_path):
        folder = tmp_path / "imgs"
        folder.mkdir()
        iio.imwrite(folder / "ok.png", make_scene((256, 320), (30, 30)))
        (folder / "broken.png").write_bytes(b"not a png")
        out = tmp_path / "det.jsonl"
        stats = detect_folder(SidecarConfig(image_dir=folder, output_path=out))
        assert stats.processed == 1
        assert stats.skipped == 1

    def test_empty_folder_raises(self, tmp_path):
        folder = tmp_path / "imgs"
        folder.mkdir()
        with pytest.raises(FileNotFoundError):
            detect_folder(SidecarConfig(image_dir=folder,
                                        output_path=tmp_path / "o.jsonl"))

    def test_missing_person_yields_empty_list(self, tmp_path):
        folder = tmp_path / "imgs"
        folder.mkdir()
        iio.imwrite(folder / "blank.png",
                    np.full((128, 128, 3), 230, dtype=np.uint8))
        out = tmp_path / "det.jsonl"
        detect_folder(SidecarConfig(image_dir=folder, output_path=out))
        frame = parse_frame(json.loads(out.read_text().splitlines()[0]))
        assert frame.persons == ()


def test_acceptance_round_trip(image_folder, tmp_path):
    import time

    start = time.perf_counter()
    out = tmp_path / "det.jsonl"
    stats = detect_folder(SidecarConfig(image_dir=image_folder,
                                        output_path=out))
    assert stats.processed == 10
    frames = [parse_frame(json.loads(line))
              for line in out.read_text().splitlines()]
    assert len(frames) == 10
    elapsed = time.perf_counter() - start
    assert elapsed < 60
    print(f"PASS: sidecar round-trip, 10 images parsed with zero validation "
          f"errors, {elapsed:.1f}s < 60 s")


class TestCli:
    def test_end_to_end(self, image_folder, tmp_path):
        out = tmp_path / "det.jsonl"
        proc = subprocess.run(
            [sys.executable, "-m", "detector_sidecar.cli", "--images",
             str(image_folder), "--out", str(out)],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert json.loads(proc.stdout)["processed"] == 10

    def test_empty_folder_nonzero_exit(self, tmp_path):
        folder = tmp_path / "empty"
        folder.mkdir()
        proc = subprocess.run(
            [sys.executable, "-m", "detector_sidecar.cli", "--images",
             str(folder), "--out", str(tmp_path / "o.jsonl")],
            capture_output=True, text=True)
        assert proc.returncode != 0

    def test_bad_confidence_floor(self, image_folder, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "detector_sidecar.cli", "--images",
             str(image_folder), "--out", str(tmp_path / "o.jsonl"),
             "--confidence-floor", "1.5"],
            capture_output=True, text=True)
        assert proc.returncode == 3
