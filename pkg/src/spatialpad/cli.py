"""Command-line interface: score, evaluate, synth, det.

Exit codes: 0 ok, 2 input parse error, 3 invalid flags, 4 missing
referenced files. stdout carries data; diagnostics go to stderr as a
machine-readable JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .detections import DetectionsParseError, FilterPolicy, \
    filter_small_detections, load_detections
from .harness import EvaluationError, export_score_distribution, \
    render_scenario_table, run_evaluation
from .manifest import ManifestError, load_manifest
from .metrics import MissingClassError, ScoredSample, det_curve, det_summary, \
    write_det_csv
from .plots import plot_det_tradeoff, plot_score_distribution
from .scoring import ABSTAIN_POLICIES, ConfigError, DEFAULT_THRESHOLD, classify
from .synth import SynthConfig, generate_synthetic

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_FLAGS = 3
EXIT_MISSING_FILES = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _fail(message: str, code: int) -> "CliError":
    return CliError(message, code)


def _add_decision_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD,
                        help="attack decision threshold in [-1, 1]")
    parser.add_argument("--min-relative-area", type=float,
                        default=FilterPolicy().min_relative_area,
                        help="drop faces smaller than this fraction of image area")
    parser.add_argument("--min-side", type=float,
                        default=FilterPolicy().min_side,
                        help="drop faces with a side shorter than this (pixels)")
    parser.add_argument("--abstain-policy", choices=ABSTAIN_POLICIES,
                        default="attack",
                        help="how a missing face/person detection is labeled")
    parser.add_argument("--strict-multiplicity", action="store_true",
                        help="label attack whenever multiple faces are detected")


def _decision_params(args):
    try:
        policy = FilterPolicy(min_relative_area=args.min_relative_area,
                              min_side=args.min_side)
    except ValueError as exc:
        raise _fail(str(exc), EXIT_FLAGS) from exc
    if not (-1.0 <= args.threshold <= 1.0):
        raise _fail(f"threshold must be in [-1, 1], got {args.threshold}",
                    EXIT_FLAGS)
    return policy


def cmd_score(args) -> int:
    policy = _decision_params(args)
    try:
        frames = load_detections(args.detections)
    except FileNotFoundError as exc:
        raise _fail(str(exc), EXIT_MISSING_FILES) from exc
    except DetectionsParseError as exc:
        raise _fail(str(exc), EXIT_PARSE) from exc
    for frame in frames:
        frame = filter_small_detections(frame, policy)
        decision = classify(frame, threshold=args.threshold,
                            abstain_policy=args.abstain_policy,
                            strict_multiplicity=args.strict_multiplicity)
        out = {
            "frame_id": frame.frame_id,
            "score": decision.score.value,
            "abstain_reason": decision.score.abstain_reason,
            "label": decision.label,
            "threshold": decision.threshold,
            "flags": {
                "face_count": decision.flags.face_count,
                "person_count": decision.flags.person_count,
                "multiple_faces": decision.flags.multiple_faces,
                "multiple_persons": decision.flags.multiple_persons,
            },
        }
        print(json.dumps(out))
    return EXIT_OK


def _write_evaluation_outputs(result, out_dir: Path, provenance: dict) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    export_score_distribution(result.samples, out_dir / "scores.csv",
                              out_dir / "histogram.json")
    write_det_csv(result.det, out_dir / "det.csv")
    (out_dir / "table.txt").write_text(render_scenario_table(result.scenarios))
    plot_score_distribution(result.samples, out_dir / "score_distribution.png")
    plot_det_tradeoff(result.det, out_dir / "det_curve.png")
    summary = {
        **det_summary(result.det),
        "n_samples": len(result.samples),
        "n_bona_fide": sum(1 for s in result.samples if s.truth == "bona_fide"),
        "n_attack": sum(1 for s in result.samples if s.truth == "attack"),
        "abstained": result.abstained,
        "misclassified": result.misclassified,
        "scenario_success_rates": {
            f"{r.scenario}/{r.truth}": r.success_rate for r in result.scenarios
        },
        "parameters": provenance,
    }
    (out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


def cmd_evaluate(args) -> int:
    policy = _decision_params(args)
    try:
        records = load_manifest(args.manifest)
    except FileNotFoundError as exc:
        raise _fail(str(exc), EXIT_MISSING_FILES) from exc
    except ManifestError as exc:
        raise _fail(str(exc), EXIT_PARSE) from exc
    try:
        result = run_evaluation(records, filter_policy=policy,
                                threshold=args.threshold,
                                abstain_policy=args.abstain_policy,
                                strict_multiplicity=args.strict_multiplicity,
                                workers=args.workers)
    except EvaluationError as exc:
        code = EXIT_MISSING_FILES if "missing detections files" in str(exc) \
            else EXIT_PARSE
        raise _fail(str(exc), code) from exc
    except (DetectionsParseError, MissingClassError) as exc:
        raise _fail(str(exc), EXIT_PARSE) from exc
    provenance = {
        "threshold": args.threshold,
        "min_relative_area": policy.min_relative_area,
        "min_side": policy.min_side,
        "abstain_policy": args.abstain_policy,
        "strict_multiplicity": args.strict_multiplicity,
        "version": __version__,
    }
    summary = _write_evaluation_outputs(result, Path(args.out), provenance)
    print(json.dumps({"deer": summary["deer"],
                      "deer_threshold": summary["deer_threshold"],
                      "n_samples": summary["n_samples"],
                      "abstained": summary["abstained"],
                      "misclassified": summary["misclassified"],
                      "out": str(args.out)}))
    return EXIT_OK


def cmd_synth(args) -> int:
    try:
        config = SynthConfig(image_width=args.width, image_height=args.height,
                             n_bona_fide=args.n_bona_fide,
                             n_attack=args.n_attack,
                             real_face_visible_prob=args.real_face_visible_prob,
                             jitter=args.jitter, seed=args.seed)
    except ValueError as exc:
        raise _fail(str(exc), EXIT_FLAGS) from exc
    records = generate_synthetic(config, args.out)
    print(json.dumps({"manifest": str(Path(args.out) / "manifest.csv"),
                      "n_bona_fide": config.n_bona_fide,
                      "n_attack": config.n_attack,
                      "seed": config.seed}))
    return EXIT_OK


def cmd_det(args) -> int:
    samples = []
    try:
        import csv as _csv
        with open(args.scores, newline="") as fh:
            reader = _csv.DictReader(fh)
            if reader.fieldnames != ["sample_id", "truth", "score"]:
                raise _fail(f"{args.scores}: expected header "
                            f"sample_id,truth,score", EXIT_PARSE)
            for row in reader:
                samples.append(ScoredSample(sample_id=row["sample_id"],
                                            truth=row["truth"],
                                            score=float(row["score"])))
    except FileNotFoundError as exc:
        raise _fail(str(exc), EXIT_MISSING_FILES) from exc
    except (ValueError, KeyError) as exc:
        if isinstance(exc, CliError):
            raise
        raise _fail(f"{args.scores}: {exc}", EXIT_PARSE) from exc
    try:
        report = det_curve(samples)
    except MissingClassError as exc:
        raise _fail(str(exc), EXIT_PARSE) from exc
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_det_csv(report, out_dir / "det.csv")
    (out_dir / "summary.json").write_text(
        json.dumps(det_summary(report), indent=2, sort_keys=True) + "\n")
    plot_det_tradeoff(report, out_dir / "det_curve.png")
    print(json.dumps(det_summary(report)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spatialpad",
        description="Presentation attack detection via face/person spatial "
                    "consistency")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_score = sub.add_parser("score", help="score one detections file")
    p_score.add_argument("detections", help="detections JSON / JSON-lines file")
    _add_decision_flags(p_score)
    p_score.set_defaults(func=cmd_score)

    p_eval = sub.add_parser("evaluate", help="run a manifest evaluation")
    p_eval.add_argument("manifest", help="manifest CSV path")
    p_eval.add_argument("--out", required=True, help="output directory")
    p_eval.add_argument("--workers", type=int, default=1,
                        help="parallel scoring workers")
    _add_decision_flags(p_eval)
    p_eval.set_defaults(func=cmd_evaluate)

    p_synth = sub.add_parser("synth", help="generate a synthetic dataset")
    p_synth.add_argument("--out", required=True, help="output directory")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--n-bona-fide", type=int,
                         default=SynthConfig().n_bona_fide)
    p_synth.add_argument("--n-attack", type=int, default=SynthConfig().n_attack)
    p_synth.add_argument("--width", type=int, default=SynthConfig().image_width)
    p_synth.add_argument("--height", type=int, default=SynthConfig().image_height)
    p_synth.add_argument("--jitter", type=float, default=SynthConfig().jitter)
    p_synth.add_argument("--real-face-visible-prob", type=float,
                         default=SynthConfig().real_face_visible_prob)
    p_synth.set_defaults(func=cmd_synth)

    p_det = sub.add_parser("det", help="DET report from a scores CSV")
    p_det.add_argument("scores", help="scores CSV (sample_id,truth,score)")
    p_det.add_argument("--out", required=True, help="output directory")
    p_det.set_defaults(func=cmd_det)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(json.dumps({"error": str(exc), "code": exc.code}),
              file=sys.stderr)
        return exc.code
    except ConfigError as exc:
        print(json.dumps({"error": str(exc), "code": EXIT_FLAGS}),
              file=sys.stderr)
        return EXIT_FLAGS


if __name__ == "__main__":
    sys.exit(main())
