"""Command-line entry point for batch detection runs."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .backends import FACE_BACKENDS, PERSON_BACKENDS, BackendError
from .runner import SidecarConfig, detect_folder


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detector-sidecar",
        description="Run face and person detectors over an image folder and "
                    "emit detections JSON lines")
    parser.add_argument("--images", required=True, help="image folder")
    parser.add_argument("--out", required=True, help="output JSON-lines file")
    parser.add_argument("--face-backend", default="generic-landmark",
                        choices=sorted(FACE_BACKENDS))
    parser.add_argument("--person-backend", default="yolo-like",
                        choices=sorted(PERSON_BACKENDS))
    parser.add_argument("--confidence-floor", type=float, default=0.0,
                        help="drop detections below this confidence")
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        config = SidecarConfig(image_dir=Path(args.images),
                               output_path=Path(args.out),
                               face_backend=args.face_backend,
                               person_backend=args.person_backend,
                               confidence_floor=args.confidence_floor)
    except (ValueError, BackendError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 3
    try:
        stats = detect_folder(config)
    except FileNotFoundError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 4
    print(json.dumps({"processed": stats.processed, "skipped": stats.skipped,
                      "out": str(config.output_path)}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
