"""Detection backends.

Face backends wrap the trained LBP frontal-face cascade that ships with
scikit-image; the role names (retinaface-like, mtcnn-like,
generic-landmark) select operating parameters, and the emitted
detector_name records the actual engine and version. The person backend
is a deterministic foreground-extent detector suited to the plain-
background capture setup this tool targets; swap in a neural detector by
registering another backend.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import skimage
from skimage import measure, morphology
from skimage.color import rgb2gray
from skimage.data import lbp_frontal_face_cascade_filename
from skimage.feature import Cascade


@dataclass(frozen=True)
class Box:
    """Top-left-origin pixel box; y increases downward."""

    x: float
    y: float
    width: float
    height: float
    confidence: float


@dataclass(frozen=True)
class _CascadeParams:
    scale_factor: float
    step_ratio: float
    min_size: tuple[int, int]


# Role name -> cascade operating point. Exact model choice is a deployment
# concern; all roles currently resolve to the bundled LBP cascade.
FACE_BACKENDS = {
    "retinaface-like": _CascadeParams(1.15, 1.2, (24, 24)),
    "mtcnn-like": _CascadeParams(1.2, 1.3, (32, 32)),
    "generic-landmark": _CascadeParams(1.25, 1.2, (40, 40)),
}

PERSON_BACKENDS = ("yolo-like",)


class BackendError(ValueError):
    """Requested backend name is unknown or cannot be loaded."""


def _to_gray(image: np.ndarray) -> np.ndarray:
    if image.ndim == 3:
        return rgb2gray(image[..., :3])
    return image.astype(float) / 255.0 if image.dtype == np.uint8 else image


class FaceBackend:
    def __init__(self, name: str):
        if name not in FACE_BACKENDS:
            raise BackendError(f"unknown face backend {name!r}, "
                               f"choose from {sorted(FACE_BACKENDS)}")
        self.name = name
        self.params = FACE_BACKENDS[name]
        self.cascade = Cascade(lbp_frontal_face_cascade_filename())
        self.model_version = f"skimage-lbp-cascade-{skimage.__version__}"

    def detect(self, image: np.ndarray) -> list[Box]:
        h, w = image.shape[:2]
        max_size = (max(h, self.params.min_size[0]),
                    max(w, self.params.min_size[1]))
        hits = self.cascade.detect_multi_scale(
            img=image, scale_factor=self.params.scale_factor,
            step_ratio=self.params.step_ratio,
            min_size=self.params.min_size, max_size=max_size)
        # the cascade is a binary detector: accepted windows get confidence 1
        return [Box(x=float(hit["c"]), y=float(hit["r"]),
                    width=float(hit["width"]), height=float(hit["height"]),
                    confidence=1.0)
                for hit in hits]


class PersonBackend:
    """Foreground-extent person proposal for plain-background captures.

    Estimates the background level from the image border, thresholds the
    deviation from it, and returns the bounding box of the largest
    connected foreground component. Confidence is the foreground fill
    ratio inside that box.
    """

    MIN_AREA_FRACTION = 0.01
    DEVIATION_THRESHOLD = 0.12

    def __init__(self, name: str):
        if name not in PERSON_BACKENDS:
            raise BackendError(f"unknown person backend {name!r}, "
                               f"choose from {sorted(PERSON_BACKENDS)}")
        self.name = name
        self.model_version = "foreground-extent"

    def detect(self, image: np.ndarray) -> list[Box]:
        gray = _to_gray(image)
        h, w = gray.shape
        border = np.concatenate([gray[0, :], gray[-1, :], gray[:, 0],
                                 gray[:, -1]])
        background = float(np.median(border))
        mask = np.abs(gray - background) > self.DEVIATION_THRESHOLD
        mask = morphology.binary_opening(mask, np.ones((3, 3), dtype=bool))
        labels = measure.label(mask)
        best = None
        for region in measure.regionprops(labels):
            if best is None or region.area > best.area:
                best = region
        if best is None or best.area < self.MIN_AREA_FRACTION * h * w:
            return []
        r0, c0, r1, c1 = best.bbox
        fill = best.area / ((r1 - r0) * (c1 - c0))
        return [Box(x=float(c0), y=float(r0), width=float(c1 - c0),
                    height=float(r1 - r0), confidence=float(min(fill, 1.0)))]
