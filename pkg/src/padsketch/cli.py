"""Command-line entry point: gen, recognize, replay, bench, score, de,
serve, and the bundled evaluation suite."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, metrics, sketch, synth
from .anim import scene_frame
from .frames import FrameCodecError, read_stream, write_wsk, write_wskx
from .gestures import Recognizer
from .kernels import active_backend, available_backends
from .session import Session, SessionConfig, gesture_events_for_frames
from .touch import VotingWindow, detect_blobs
from .frames import preprocess

EXIT_OK = 0
EXIT_BAD_ARGS = 2
EXIT_BAD_INPUT = 3


class InputError(Exception):
    """Bad input data; mapped to exit code 3."""


def _load_config(path: str | None) -> SessionConfig:
    if path is None:
        return SessionConfig()
    try:
        return SessionConfig.from_json(json.loads(Path(path).read_text()))
    except (OSError, ValueError, TypeError) as exc:
        raise InputError(f"bad config file {path}: {exc}") from exc


def _load_frames(path: str):
    try:
        return read_stream(path)
    except (OSError, FrameCodecError) as exc:
        raise InputError(f"bad stream {path}: {exc}") from exc


def _open_out(path: str | None):
    return open(path, "w") if path and path != "-" else sys.stdout


# -- subcommands ---------------------------------------------------------------


def cmd_gen(args) -> int:
    try:
        script = synth.script_from_json(json.loads(Path(args.script).read_text()))
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"bad script {args.script}: {exc}") from exc
    noise = synth.NoiseModel(args.salt, args.dropout, args.seed)
    frames = synth.script_to_stream(script, noise)
    if args.out.endswith(".wskx"):
        write_wskx(args.out, frames)
    else:
        write_wsk(args.out, frames)
    print(json.dumps({"type": "gen_ok", "frames": len(frames), "out": args.out}))
    return EXIT_OK


def cmd_recognize(args) -> int:
    cfg = _load_config(args.config)
    frames = _load_frames(args.stream)
    session = Session(cfg)
    out = _open_out(args.events)
    try:
        for frame in frames:
            for msg in session.process_frame(frame):
                if msg["type"] in ("gesture", "command"):
                    out.write(json.dumps(msg) + "\n")
        for msg in session.finalize():
            if msg["type"] in ("gesture", "command"):
                out.write(json.dumps(msg) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_replay(args) -> int:
    cfg = _load_config(args.config)
    frames = _load_frames(args.stream)
    session = Session(cfg)
    for frame in frames:
        session.process_frame(frame)
    session.finalize()
    if args.doc:
        sketch.save_document(args.doc, session.doc)
    if args.scene_at is not None:
        scene = session.scene_at(args.scene_at)
        print(json.dumps(scene.to_json()))
    elif not args.doc:
        print(json.dumps(sketch.document_to_json(session.doc)))
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = _load_config(args.config)
    frames = _load_frames(args.stream)
    if not frames:
        raise InputError("empty stream")
    results = []
    for backend in available_backends():
        pre = cfg.preprocess_config()
        window = VotingWindow(cfg.vote_n)
        recognizer = Recognizer(cfg.recognizer_config())
        start = time.perf_counter()
        for frame in frames:
            blobs = detect_blobs(preprocess(frame, pre), backend)
            obs = window.push(blobs, frame.seq, frame.timestamp_ms)
            if obs is not None:
                recognizer.step(obs)
        recognizer.finalize()
        elapsed = time.perf_counter() - start
        fps = len(frames) / elapsed
        results.append(
            {
                "backend": backend.name,
                "frames": len(frames),
                "seconds": round(elapsed, 6),
                "fps": round(fps, 1),
                "selected": backend.name == active_backend().name,
            }
        )
        print(f"backend={backend.name} frames={len(frames)} time={elapsed:.3f}s fps={fps:.0f}")
    print(json.dumps({"type": "bench", "results": results}))
    return EXIT_OK


def _read_jsonl(path: str) -> list[dict]:
    try:
        return [json.loads(line) for line in Path(path).read_text().splitlines() if line.strip()]
    except (OSError, ValueError) as exc:
        raise InputError(f"bad jsonl {path}: {exc}") from exc


def cmd_score(args) -> int:
    pred_rows = _read_jsonl(args.pred)
    truth_rows = _read_jsonl(args.truth)
    preds = {row["trial"]: row["label"] for row in pred_rows}
    cm = metrics.ConfusionMatrix()
    for row in truth_rows:
        predicted = preds.get(row["trial"], metrics.NO_GESTURE)
        cm.add(row["label"], predicted)
    if cm.total() == 0:
        raise InputError("no trials to score")
    print(cm.to_text())
    summary = cm.to_json()
    summary["type"] = "score"
    print(json.dumps(summary))
    if args.json:
        Path(args.json).write_text(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


def _drawing_points(path: str) -> np.ndarray:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise InputError(f"bad drawing {path}: {exc}") from exc
    if isinstance(data, dict) and "points" in data:
        return np.asarray(data["points"], dtype=float)
    if isinstance(data, dict) and data.get("schema") == sketch.DOC_SCHEMA:
        doc = sketch.document_from_json(data)
        pts = [
            (x + asset.origin[0], y + asset.origin[1])
            for asset in doc.assets
            for stroke in asset.strokes
            for x, y in stroke.points
        ]
        if not pts:
            raise InputError("document has no stroke points")
        return np.asarray(pts, dtype=float)
    raise InputError(f"unrecognized drawing format in {path}")


def cmd_de(args) -> int:
    drawing = _drawing_points(args.drawing)
    if args.template in ("rect", "rectangle", "tri", "triangle", "circle"):
        template = metrics.template_samples(args.template, args.samples)
    else:
        try:
            data = json.loads(Path(args.template).read_text())
            template = metrics.resample_polyline(
                data["points"], args.samples, closed=bool(data.get("closed", False))
            )
        except (OSError, ValueError, KeyError) as exc:
            raise InputError(f"bad template {args.template}: {exc}") from exc
    # drawing points are already the sample set; only templates resample,
    # so a drawing equal to the template scores exactly zero
    de = metrics.drawing_error(drawing, template)
    print(json.dumps({"type": "de", "drawing_error": de, "samples": args.samples}))
    return EXIT_OK


def cmd_suite(args) -> int:
    cfg = _load_config(args.config)
    cm, results = synth.run_suite(
        seed=args.seed,
        per_class=args.per_class,
        salt_prob=args.salt,
        dropout_prob=args.dropout,
        cfg=cfg,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "truth.jsonl", "w") as truth, open(out_dir / "pred.jsonl", "w") as pred:
        for trial, (label, predicted) in enumerate(results):
            truth.write(json.dumps({"trial": trial, "label": label}) + "\n")
            pred.write(json.dumps({"trial": trial, "label": predicted}) + "\n")
    print(cm.to_text())
    summary = cm.to_json()
    summary["type"] = "suite"
    summary["seed"] = args.seed
    summary["per_class"] = args.per_class
    print(json.dumps(summary))
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .server import serve

    cfg = _load_config(args.config)
    serve(args.host, args.port, cfg)
    return EXIT_OK


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padsketch", description=__doc__)
    parser.add_argument("--version", action="version", version=f"padsketch {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="render a gesture script into a pressure stream")
    p.add_argument("script", help="script JSON file")
    p.add_argument("-o", "--out", required=True, help="output .wsk or .wskx path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--salt", type=float, default=0.0, help="per-cell salt probability")
    p.add_argument("--dropout", type=float, default=0.0, help="secondary finger dropout probability")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("recognize", help="stream gesture events and commands as JSON lines")
    p.add_argument("stream", help="input .wsk/.wskx file")
    p.add_argument("--events", help="output JSONL path (default stdout)")
    p.add_argument("--config", help="session config JSON")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("replay", help="run a full session and dump the document or a scene")
    p.add_argument("stream", help="input .wsk/.wskx file")
    p.add_argument("--doc", help="write the final document JSON here")
    p.add_argument("--scene-at", type=float, default=None, metavar="T", help="print the scene at time T seconds")
    p.add_argument("--config", help="session config JSON")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("bench", help="measure full-pipeline frames/s on every kernel backend")
    p.add_argument("stream", help="input .wsk/.wskx file")
    p.add_argument("--config", help="session config JSON")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("score", help="confusion matrix and accuracy from prediction/truth JSONL")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--json", help="also write the summary JSON here")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("de", help="drawing error against a template")
    p.add_argument("--drawing", required=True, help="points JSON or saved document")
    p.add_argument("--template", required=True, help="rect|tri|circle or a template JSON file")
    p.add_argument("--samples", type=int, default=metrics.DEFAULT_SAMPLES)
    p.set_defaults(func=cmd_de)

    p = sub.add_parser("suite", help="run the bundled 12-class synthetic gesture suite")
    p.add_argument("--out", required=True, help="directory for truth/pred/summary files")
    p.add_argument("--per-class", type=int, default=50)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--salt", type=float, default=0.0)
    p.add_argument("--dropout", type=float, default=0.0)
    p.add_argument("--config", help="session config JSON")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("serve", help="serve the session protocol over a local WebSocket")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--config", help="session config JSON")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(json.dumps({"type": "error", "error": str(exc)}), file=sys.stderr)
        return EXIT_BAD_INPUT
    except BrokenPipeError:
        # downstream closed the pipe (e.g. | head); not our error
        try:
            sys.stdout.close()
        except OSError:
            pass
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
