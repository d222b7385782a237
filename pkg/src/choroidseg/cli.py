"""Command-line front end: batch segmentation, evaluation, thickness maps,
a phantom generator, and the HTTP service launcher.

Exit codes: 0 all good, 1 partial failure (some inputs failed), 2 usage
error (bad arguments or unreadable config).
"""

import argparse
import json
import os
import sys

import numpy as np

from .config import load_config
from .errors import ChoroidSegError, ParseError
from .pipeline import (
    PipelineConfig,
    evaluate,
    result_from_dict,
    result_to_dict,
    segment,
    thickness_map,
    write_thickness_csv,
)
from .scan_io import Layer, ensure_dir, load_labels, load_scan, render_overlay, save_labels, save_scan

GREEN = (0, 255, 0)

USAGE_EXIT = 2
PARTIAL_EXIT = 1


def _load_cfg(path: str | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    return load_config(path)


def _collect_inputs(paths: list[str]) -> list[str]:
    files = []
    for p in paths:
        if os.path.isdir(p):
            files.extend(
                os.path.join(p, name)
                for name in sorted(os.listdir(p))
                if name.lower().endswith((".pgm", ".png"))
            )
        else:
            files.append(p)
    return files


def cmd_segment(args) -> int:
    try:
        cfg = _load_cfg(args.config)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    inputs = _collect_inputs(args.inputs)
    if not inputs:
        print("error: no input scans found", file=sys.stderr)
        return USAGE_EXIT
    ensure_dir(args.out)
    failures = 0
    for path in inputs:
        stem = os.path.splitext(os.path.basename(path))[0]
        try:
            image = load_scan(path, args.resolution_um)
            result = segment(image, cfg)
            with open(os.path.join(args.out, stem + ".result.json"), "w") as fh:
                json.dump(result_to_dict(result), fh)
            write_thickness_csv(
                result.thickness, os.path.join(args.out, stem + ".thickness.csv")
            )
            if args.overlay:
                render_overlay(
                    image,
                    [(result.rpe, GREEN), (result.choroid, GREEN)],
                    path=os.path.join(args.out, stem + ".overlay.png"),
                )
            if result.flags:
                print(f"{path}: flagged {','.join(result.flags)}", file=sys.stderr)
        except ChoroidSegError as exc:
            failures += 1
            print(f"{path}: {exc}", file=sys.stderr)
    return PARTIAL_EXIT if failures else 0


def cmd_eval(args) -> int:
    try:
        with open(args.result) as fh:
            result = result_from_dict(json.load(fh))
        label_sets = load_labels(args.labels)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: cannot read inputs: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    reports = {}
    for layer, boundary in ((Layer.RPE, result.rpe), (Layer.CHOROID, result.choroid)):
        labels = label_sets[layer]
        if not labels.points:
            continue
        try:
            reports[layer.value] = evaluate(boundary, labels, args.resolution_um)
        except ChoroidSegError as exc:
            print(f"{layer.value}: {exc}", file=sys.stderr)
            return PARTIAL_EXIT
    if not reports:
        print("error: label file holds no points", file=sys.stderr)
        return USAGE_EXIT
    if args.json:
        payload = {
            name: {
                "n_points": r.n_points,
                "mean_unsigned_px": r.mean_unsigned_px,
                "mean_unsigned_mm": r.mean_unsigned_mm,
                "per_point": [list(p) for p in r.per_point],
            }
            for name, r in reports.items()
        }
        print(json.dumps(payload))
    else:
        for name, r in reports.items():
            print(
                f"{name}: n={r.n_points} mean unsigned error "
                f"{r.mean_unsigned_px:.2f} px = {r.mean_unsigned_mm:.8f} mm"
            )
    return 0


def cmd_thickness_map(args) -> int:
    results = []
    try:
        for path in args.results:
            with open(path) as fh:
                results.append(result_from_dict(json.load(fh)))
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: cannot read result JSON: {exc}", file=sys.stderr)
        return USAGE_EXIT
    try:
        thickness_map(results, args.out)
    except ChoroidSegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return PARTIAL_EXIT
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    try:
        cfg = _load_cfg(args.config)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    static_dir = args.ui_dir
    if static_dir is None:
        bundled = os.path.join(os.path.dirname(__file__), "..", "..", "frontend", "dist")
        static_dir = bundled if os.path.isdir(bundled) else None
    app = create_app(cfg, upload_limit=args.upload_limit, static_dir=static_dir)
    uvicorn.run(app, host=args.bind, port=args.port, log_level="info")
    return 0


def cmd_phantom(args) -> int:
    from .phantom import make_phantom
    from .scan_io import LabelSet

    rng = np.random.default_rng(args.seed)
    ph = make_phantom(args.rows, args.cols, rng)
    save_scan(ph.image, args.out)
    if args.labels:
        step = max(1, args.cols // 16)
        cols = list(range(step, args.cols - step, step))
        sets = {
            Layer.RPE: LabelSet(Layer.RPE, [(c, int(ph.rpe_rows[c])) for c in cols]),
            Layer.CHOROID: LabelSet(
                Layer.CHOROID, [(c, int(ph.choroid_rows[c])) for c in cols]
            ),
        }
        save_labels(sets, args.labels)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="choroidseg",
        description="RPE and choroid boundary segmentation for EDI-OCT B-scans.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_seg = sub.add_parser("segment", help="segment scans and write results")
    p_seg.add_argument("inputs", nargs="+", help="scan files or directories")
    p_seg.add_argument("--config", help="flat key=value config file")
    p_seg.add_argument("--out", default=".", help="output directory")
    p_seg.add_argument("--overlay", action="store_true", help="write overlay rasters")
    p_seg.add_argument("--resolution-um", type=float, default=None)
    p_seg.set_defaults(func=cmd_segment)

    p_eval = sub.add_parser("eval", help="compare a result against labels")
    p_eval.add_argument("result", help="result JSON from 'segment'")
    p_eval.add_argument("labels", help="label CSV (layer,col,row)")
    p_eval.add_argument("--json", action="store_true", help="machine-readable output")
    p_eval.add_argument("--resolution-um", type=float, default=3.87167)
    p_eval.set_defaults(func=cmd_eval)

    p_map = sub.add_parser("thickness-map", help="render a volume thickness map")
    p_map.add_argument("results", nargs="+", help="ordered result JSON files")
    p_map.add_argument("--out", required=True, help="output basename")
    p_map.set_defaults(func=cmd_thickness_map)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--bind", default=os.environ.get("CHOROIDSEG_BIND", "127.0.0.1"))
    p_serve.add_argument(
        "--port", type=int, default=int(os.environ.get("CHOROIDSEG_PORT", "8000"))
    )
    p_serve.add_argument("--config", help="flat key=value config file")
    p_serve.add_argument("--ui-dir", help="directory with the built correction UI")
    p_serve.add_argument("--upload-limit", type=int, default=32 * 1024 * 1024)
    p_serve.set_defaults(func=cmd_serve)

    p_ph = sub.add_parser("phantom", help="generate a synthetic test scan")
    p_ph.add_argument("--out", required=True, help="output raster (.pgm or .png)")
    p_ph.add_argument("--labels", help="also write ground-truth label CSV here")
    p_ph.add_argument("--rows", type=int, default=496)
    p_ph.add_argument("--cols", type=int, default=768)
    p_ph.add_argument("--seed", type=int, default=None)
    p_ph.set_defaults(func=cmd_phantom)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_EXIT if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
