import math

import numpy as np
import pytest

from padsketch.frames import encode_frame
from padsketch.metrics import classify_events
from padsketch.session import gesture_events_for_frames
from padsketch.synth import (
    GESTURE_CLASSES,
    FingerModel,
    GestureScript,
    NoiseModel,
    ScriptEntry,
    build_gesture_script,
    render_finger,
    script_from_json,
    script_to_json,
    script_to_stream,
)


class TestRenderFinger:
    def test_center_gain(self):
        cells = np.zeros((40, 40), np.uint8)
        render_finger(cells, FingerModel(20.0, 20.0, peak=200, sigma=1.2))
        assert cells[20, 20] == 200

    def test_far_cells_untouched(self):
        cells = np.zeros((40, 40), np.uint8)
        render_finger(cells, FingerModel(20.0, 20.0, peak=200, sigma=1.2))
        assert cells[20, 27] == 0  # ~3 sigma away rounds to zero
        assert cells[0, 0] == 0

    def test_matches_gaussian_formula(self):
        cells = np.zeros((40, 40), np.uint8)
        fm = FingerModel(10.0, 12.0, peak=180, sigma=1.1)
        render_finger(cells, fm)
        for x, y in ((10, 12), (11, 12), (9, 11), (12, 14)):
            expected = round(180 * math.exp(-((x - 10) ** 2 + (y - 12) ** 2) / (2 * 1.1**2)))
            assert cells[y, x] == expected

    def test_zero_peak_is_identity(self):
        cells = np.zeros((40, 40), np.uint8)
        render_finger(cells, FingerModel(20.0, 20.0, peak=0))
        assert not cells.any()

    def test_overlapping_fingers_saturate(self):
        cells = np.zeros((40, 40), np.uint8)
        render_finger(cells, FingerModel(20.0, 20.0, peak=200))
        render_finger(cells, FingerModel(20.0, 20.0, peak=200))
        assert cells[20, 20] == 255


class TestScriptToStream:
    def test_empty_script_zero_frames(self):
        script = GestureScript([ScriptEntry(0.0)], duration_ms=100.0)
        frames = script_to_stream(script, NoiseModel())
        assert len(frames) == 7  # ticks at 0..100 ms inclusive
        assert all(not f.cells.any() for f in frames)
        assert [f.seq for f in frames] == list(range(7))

    def test_timestamps_at_60fps(self):
        script = GestureScript([ScriptEntry(0.0)], duration_ms=100.0)
        frames = script_to_stream(script)
        assert [f.timestamp_ms for f in frames] == [0, 17, 33, 50, 67, 83, 100]

    def test_same_seed_byte_identical(self):
        script = build_gesture_script("2f-tap", np.random.default_rng(5))
        noise = NoiseModel(0.01, 0.2, rng_seed=77)
        a = b"".join(encode_frame(f) for f in script_to_stream(script, noise))
        b = b"".join(encode_frame(f) for f in script_to_stream(script, noise))
        assert a == b

    def test_different_seed_differs(self):
        script = build_gesture_script("2f-tap", np.random.default_rng(5))
        a = script_to_stream(script, NoiseModel(0.01, 0.2, rng_seed=1))
        b = script_to_stream(script, NoiseModel(0.01, 0.2, rng_seed=2))
        assert any(x != y for x, y in zip(a, b))

    def test_lerp_moves_finger(self):
        script = GestureScript(
            [
                ScriptEntry(0.0, (FingerModel(5.0, 5.0),), lerp=True),
                ScriptEntry(1000.0, (FingerModel(35.0, 5.0),)),
            ],
            duration_ms=1000.0,
        )
        frames = script_to_stream(script)
        first = np.argmax(frames[0].cells[5])
        mid = np.argmax(frames[30].cells[5])
        last = np.argmax(frames[-1].cells[5])
        assert first < mid < last

    def test_json_round_trip(self):
        script = build_gesture_script("1f-top-longpress", np.random.default_rng(3))
        assert script_from_json(script_to_json(script)) == script


class TestEndToEnd:
    def run(self, label, seed=0, **noise):
        script = build_gesture_script(label, np.random.default_rng(seed))
        frames = script_to_stream(script, NoiseModel(**noise))
        return gesture_events_for_frames(frames)

    def test_left_tap_recognized(self):
        events = self.run("1f-left-tap")
        assert classify_events(events) == "1f-left-tap"

    def test_all_twelve_classes_zero_noise(self):
        for label in GESTURE_CLASSES:
            events = self.run(label, seed=11)
            assert classify_events(events) == label, label

    def test_full_dropout_reads_two_finger_as_one(self):
        events = self.run("2f-tap", dropout_prob=1.0, rng_seed=9)
        pred = classify_events(events)
        assert pred.startswith("1f-") and pred.endswith("-tap")

    def test_full_dropout_never_affects_one_finger(self):
        events = self.run("1f-bottom-tap", dropout_prob=1.0, rng_seed=9)
        assert classify_events(events) == "1f-bottom-tap"
