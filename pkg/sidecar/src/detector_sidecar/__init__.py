"""Batch face/person detection sidecar emitting detections JSON lines."""

__version__ = "0.1.0"

from .backends import FACE_BACKENDS, PERSON_BACKENDS, BackendError, Box, \
    FaceBackend, PersonBackend
from .runner import RunStats, SidecarConfig, detect_folder

__all__ = ["FACE_BACKENDS", "PERSON_BACKENDS", "BackendError", "Box",
           "FaceBackend", "PersonBackend", "RunStats", "SidecarConfig",
           "detect_folder"]
