"""Acceptance criteria, one test per criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion.
"""

import copy
import json
import math
import subprocess
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import blob_oracle, random_test_frame
from padsketch import anim, metrics, sketch, synth
from padsketch.frames import PressureFrame, preprocess
from padsketch.gestures import Recognizer, Zone
from padsketch.kernels import available_backends
from padsketch.metrics import accuracy, drawing_error, two_finger_confusion_share
from padsketch.session import SessionConfig
from padsketch.touch import VotingWindow, detect_blobs

SUITE_SEED = 1  # the bundled suite


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    print(f"ACCEPTANCE {name}: PASS")


def make_recorded_stream(min_frames=3000):
    """A gesture-rich recorded stream, as replay files would contain."""
    frames = []
    seq = 0
    t = 0
    i = 0
    while seq < min_frames:
        label = metrics.GESTURE_CLASSES[i % len(metrics.GESTURE_CLASSES)]
        script = synth.build_gesture_script(label, np.random.default_rng([88, i]))
        for frame in synth.script_to_stream(script, synth.NoiseModel(0.002, 0.05, i)):
            frames.append(PressureFrame(seq, t, frame.cells))
            seq += 1
            t += 17
        i += 1
    return frames


class TestGestureAccuracy:
    def test_gesture_accuracy_three_noise_points(self):
        with criterion("gesture-accuracy"):
            start = time.perf_counter()

            cm, _ = synth.run_suite(seed=SUITE_SEED, per_class=50)
            assert accuracy(cm) == 1.0, "zero-noise suite must be perfect"

            cm_nominal, _ = synth.run_suite(
                seed=SUITE_SEED, per_class=50, salt_prob=0.002, dropout_prob=0.05
            )
            assert accuracy(cm_nominal) >= 0.99

            cm_heavy, results = synth.run_suite(
                seed=SUITE_SEED, per_class=50, salt_prob=0.002, dropout_prob=0.3
            )
            errors = sum(1 for t, p in results if t != p)
            assert errors > 0, "heavy dropout must produce confusions"
            assert two_finger_confusion_share(cm_heavy) >= 0.8

            elapsed = time.perf_counter() - start
            assert elapsed < 60.0, f"suite took {elapsed:.1f}s"


class TestThroughput:
    def test_full_pipeline_throughput(self):
        with criterion("throughput"):
            start = time.perf_counter()
            frames = make_recorded_stream()
            assert len(frames) >= 3000
            cfg = SessionConfig()
            for backend in available_backends():
                pre = cfg.preprocess_config()
                window = VotingWindow(cfg.vote_n)
                recognizer = Recognizer(cfg.recognizer_config())
                t0 = time.perf_counter()
                for frame in frames:
                    blobs = detect_blobs(preprocess(frame, pre), backend)
                    obs = window.push(blobs, frame.seq, frame.timestamp_ms)
                    if obs is not None:
                        recognizer.step(obs)
                recognizer.finalize()
                fps = len(frames) / (time.perf_counter() - t0)
                assert fps >= 310.0, f"{backend.name} backend: {fps:.0f} fps"
            assert time.perf_counter() - start < 30.0


class TestBlobOracleEquivalence:
    def test_thousand_random_frames(self):
        with criterion("cca-oracle-equivalence"):
            rng = np.random.default_rng(20260811)
            backends = available_backends()
            mismatches = 0
            for _ in range(1000):
                cells = random_test_frame(rng)
                expected = blob_oracle(cells)
                for backend in backends:
                    got = [set(b.cells) for b in detect_blobs(PressureFrame(0, 0, cells), backend)]
                    if got != expected:
                        mismatches += 1
            assert mismatches == 0


class TestDrawingErrorCorrectness:
    def test_eq1_against_oracle(self):
        with criterion("drawing-error"):
            rng = np.random.default_rng(7)
            for _ in range(100):
                n, m = rng.integers(1, 120, 2)
                d = rng.uniform(0, 1280, (n, 2))
                t = rng.uniform(0, 720, (m, 2))
                brute = sum(
                    min(math.hypot(px - tx, py - ty) for tx, ty in t) for px, py in d
                ) / len(d)
                assert abs(drawing_error(d, t) - brute) < 1e-9
            pts = rng.uniform(0, 100, (40, 2))
            assert drawing_error(pts, pts) == 0.0
            d = np.array([[3.0, 4.0]])
            t = np.array([[0.0, 0.0], [100.0, 100.0]])
            assert drawing_error(d, t) == pytest.approx(5.0, abs=1e-12)


class TestTemplateHarness:
    def test_tracer_and_tremor_ordering(self):
        with criterion("template-harness"):
            for name in ("rect", "tri", "circle"):
                perfect = metrics.template_drawing_error(name, tremor_sigma=0.0, seed=0)
                assert perfect < 2.0, f"{name}: perfect tracer DE {perfect:.3f}"
            for seed in range(20):
                for name in ("rect", "tri", "circle"):
                    perfect = metrics.template_drawing_error(name, 0.0, seed)
                    shaky = metrics.template_drawing_error(name, 4.0, seed)
                    assert shaky > perfect, f"{name} seed {seed}: {shaky} <= {perfect}"


class TestAnimationInvariants:
    def test_animation_invariants(self):
        with criterion("animation-invariants"):
            # full rotation restores vertices
            rng = np.random.default_rng(3)
            verts = [tuple(p) for p in rng.uniform(0, 1000, (12, 2))]
            binding = anim.RotateBinding(angle_deg=360.0, period_s=4.0)
            angle, center = anim.eval_rotate(binding, 4.0, (500.0, 400.0))
            out = anim.rotate_points(verts, angle, center)
            for (ox, oy), (nx, ny) in zip(verts, out):
                assert abs(nx - ox) < 1e-6 and abs(ny - oy) < 1e-6

            # 45 degree trajectory decomposes symmetrically
            emit = anim.EmitBinding(((0.0, 0.0), (10.0, 0.0)), (25.0, 25.0))
            ax, ay = anim.emit_accel(emit)
            assert abs(abs(ax) - abs(ay)) < 1e-9

            # spawn counting is exact
            emit2 = anim.EmitBinding(
                ((100.0, 50.0), (300.0, 50.0)), (10.0, 0.0), gravity=False,
                spawn_rate=2.0, initial_speed=0.0, accel_per_unit=0.0,
            )
            state = anim.EmitState()
            for _ in range(180):
                anim.step_emit(emit2, state, 1.0 / 60.0, [0])
            assert state.spawned == 6

            # frame index formula matches direct switch counting
            rng = np.random.default_rng(11)
            for _ in range(1000):
                k = int(rng.integers(1, 12))
                rate = float(rng.uniform(0.2, 30.0))
                t = float(rng.uniform(0.0, 60.0))
                fb = anim.FrameBinding([[]] * k, rate)
                switches = 0
                while (switches + 1) / rate <= t:
                    switches += 1
                assert anim.eval_frame(fb, t) == switches % k

            # zero-amplitude doodle is the identity
            pts = [[(10.0, 20.0), (30.0, 40.0)], [(1.5, 2.5)]]
            for t in (0.0, 0.2, 0.9):
                assert anim.eval_doodle(pts, t, [1], amplitude=0.0) == pts


class TestDeterminism:
    def test_recognize_and_replay_byte_identical(self, tmp_path):
        with criterion("determinism"):
            script = synth.build_gesture_script("1f-left-longpress", np.random.default_rng(21))
            stream_path = tmp_path / "in.wsk"
            from padsketch.frames import write_wsk

            write_wsk(stream_path, synth.script_to_stream(script, synth.NoiseModel(0.002, 0.05, 5)))
            outputs = {}
            for cmd, outname in (("recognize", "events"), ("replay", "doc")):
                pair = []
                for run in (1, 2):
                    out = tmp_path / f"{outname}{run}"
                    argv = [sys.executable, "-m", "padsketch.cli", cmd, str(stream_path)]
                    argv += ["--events", str(out)] if cmd == "recognize" else ["--doc", str(out)]
                    proc = subprocess.run(argv, capture_output=True)
                    assert proc.returncode == 0, proc.stderr
                    pair.append(out.read_bytes())
                outputs[cmd] = pair
            assert outputs["recognize"][0] == outputs["recognize"][1]
            assert outputs["replay"][0] == outputs["replay"][1]


def random_mutation(doc, rng):
    """Apply one random document-level command (exactly one undo entry)."""
    ops = ["stroke", "erase", "move", "create", "delete", "mirror", "thickness", "picker", "bind", "mode"]
    while True:
        op = ops[rng.integers(0, len(ops))]
        if op == "stroke" and doc.assets:
            pts = rng.integers(0, 40, (int(rng.integers(1, 5)), 2)).tolist()
            sketch.begin_stroke(doc, tuple(pts[0]))
            for p in pts[1:]:
                sketch.add_stroke_point(doc, tuple(p))
            sketch.end_stroke(doc)
            return
        if op == "erase":
            pos = tuple(rng.uniform(0, (1279, 719), 2))
            sketch.erase_at(doc, pos, radius=float(rng.uniform(2, 120)))
            return
        if op == "move" and doc.assets:
            sketch.move_asset(doc, tuple(rng.uniform(-200, 200, 2)))
            return
        if op == "create":
            sketch.create_asset(doc)
            return
        if op == "delete" and doc.assets:
            sketch.delete_asset(doc)
            return
        if op == "mirror":
            sketch.toggle_mirror(doc)
            return
        if op == "thickness":
            sketch.adjust_thickness(doc, float(rng.choice((-1.0, 1.0))))
            return
        if op == "picker":
            zone = (Zone.LEFT, Zone.RIGHT, Zone.TOP, Zone.BOTTOM)[rng.integers(0, 4)]
            sketch.apply_picker_move(doc, zone)
            return
        if op == "bind" and doc.assets:
            choice = rng.integers(0, 3)
            if choice == 0:
                binding = anim.DoodleBinding()
            elif choice == 1:
                binding = anim.RotateBinding(float(rng.integers(1, 24) * 15), float(rng.uniform(0.5, 8)))
            else:
                binding = anim.MoveBinding([tuple(p) for p in rng.uniform(0, 700, (3, 2))], 4.0)
            sketch.bind_animation(doc, binding)
            return
        if op == "mode":
            sketch.set_mode(doc, (sketch.Mode.DRAW, sketch.Mode.MOVE, sketch.Mode.ERASE)[rng.integers(0, 3)])
            return


class TestUndoSoundness:
    def test_500_random_sequences(self):
        with criterion("undo-soundness"):
            rng = np.random.default_rng(2)
            for _ in range(500):
                doc = sketch.new_document()
                initial = copy.deepcopy(doc)
                k = int(rng.integers(1, 26))
                for _ in range(k):
                    random_mutation(doc, rng)
                assert len(doc.undo_log) == k
                for _ in range(k):
                    assert sketch.undo(doc)
                assert doc == initial
