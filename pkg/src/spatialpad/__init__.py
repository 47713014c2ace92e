"""Presentation attack detection toolkit built on spatial consistency of
face and person bounding boxes, with ISO/IEC 30107-3-style metrics and a
manifest-driven evaluation harness."""

__version__ = "0.1.0"

from .detections import (BoundingBox, Detection, DetectionsParseError,
                         FilterPolicy, FrameDetections, average_confidence,
                         detection_success_rate, filter_small_detections,
                         load_detections, minmax_normalize_confidences,
                         parse_frame)
from .harness import (EvaluationError, EvaluationResult, ScenarioReport,
                      export_score_distribution, render_scenario_table,
                      run_evaluation)
from .manifest import ManifestError, SampleRecord, load_manifest, SCENARIOS
from .metrics import (DetReport, MissingClassError, ScoredSample, apcer,
                      bpcer, det_curve, fnmr, iapar)
from .scoring import (ConfigError, MultiplicityFlags, PadDecision,
                      SpatialScore, classify, multiplicity_flags,
                      spatial_consistency_score)
from .synth import SynthConfig, generate_synthetic

__all__ = [
    "BoundingBox", "Detection", "DetectionsParseError", "FilterPolicy",
    "FrameDetections", "average_confidence", "detection_success_rate",
    "filter_small_detections", "load_detections",
    "minmax_normalize_confidences", "parse_frame",
    "EvaluationError", "EvaluationResult", "ScenarioReport",
    "export_score_distribution", "render_scenario_table", "run_evaluation",
    "ManifestError", "SampleRecord", "load_manifest", "SCENARIOS",
    "DetReport", "MissingClassError", "ScoredSample", "apcer", "bpcer",
    "det_curve", "fnmr", "iapar",
    "ConfigError", "MultiplicityFlags", "PadDecision", "SpatialScore",
    "classify", "multiplicity_flags", "spatial_consistency_score",
    "SynthConfig", "generate_synthetic",
]
