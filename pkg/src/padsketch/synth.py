"""Deterministic synthetic pressure streams: finger models, gesture
scripts, and noise. Stands in for human participants in every test."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .frames import GRID, PressureFrame
from .metrics import GESTURE_CLASSES
from .session import SessionConfig, gesture_events_for_frames

FPS = 60
# This pair puts 9-12 cells above the default threshold and, after the
# median filter, yields exactly one blob at every integer center and at
# every fractional center sampled (5000 draws). Wider or hotter profiles
# terrace into core-plus-ring splits under the half-pressure admit rule.
DEFAULT_PEAK = 160
DEFAULT_SIGMA = 0.9
DROPPED_PEAK = 8  # renders below the default threshold of 16
# mean dropout burst length; long enough that a light touch can blank the
# second finger for a whole short tap, which is the confusion that matters
_DROP_MEAN_RUN = 6.0


@dataclass(frozen=True)
class FingerModel:
    x: float
    y: float
    peak: int = DEFAULT_PEAK
    sigma: float = DEFAULT_SIGMA

    def __post_init__(self) -> None:
        if not 0 <= self.peak <= 255:
            raise ValueError("peak must be in [0, 255]")
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")


@dataclass(frozen=True)
class ScriptEntry:
    t_ms: float
    fingers: tuple[FingerModel, ...] = ()
    lerp: bool = False  # interpolate positions toward the next entry


@dataclass
class GestureScript:
    entries: list[ScriptEntry]
    label: str = ""
    duration_ms: float | None = None

    def __post_init__(self) -> None:
        times = [e.t_ms for e in self.entries]
        if times != sorted(times):
            raise ValueError("script entries must be in nondecreasing time order")
        if any(len(e.fingers) > 2 for e in self.entries):
            raise ValueError("at most 2 fingers are supported")

    def end_ms(self) -> float:
        if self.duration_ms is not None:
            return self.duration_ms
        return self.entries[-1].t_ms if self.entries else 0.0


@dataclass(frozen=True)
class NoiseModel:
    salt_prob: float = 0.0
    dropout_prob: float = 0.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.salt_prob <= 1.0 or not 0.0 <= self.dropout_prob <= 1.0:
            raise ValueError("noise probabilities must be in [0, 1]")


def render_finger(cells: np.ndarray, fm: FingerModel) -> np.ndarray:
    """Add a Gaussian pressure footprint in place, saturating at 255."""
    if fm.peak == 0:
        return cells
    r = int(math.ceil(4.0 * fm.sigma))
    x0 = max(0, int(math.floor(fm.x)) - r)
    x1 = min(GRID - 1, int(math.ceil(fm.x)) + r)
    y0 = max(0, int(math.floor(fm.y)) - r)
    y1 = min(GRID - 1, int(math.ceil(fm.y)) + r)
    if x0 > x1 or y0 > y1:
        return cells
    ys, xs = np.mgrid[y0 : y1 + 1, x0 : x1 + 1]
    d2 = (xs - fm.x) ** 2 + (ys - fm.y) ** 2
    bump = np.rint(fm.peak * np.exp(-d2 / (2.0 * fm.sigma**2))).astype(np.int32)
    region = cells[y0 : y1 + 1, x0 : x1 + 1].astype(np.int32) + bump
    cells[y0 : y1 + 1, x0 : x1 + 1] = np.minimum(region, 255).astype(np.uint8)
    return cells


class _DropoutState:
    """Per-finger burst dropout: a two-state chain whose stationary
    per-frame probability equals dropout_prob and whose bursts last
    _DROP_MEAN_RUN frames on average, so they defeat the 3-frame vote."""

    def __init__(self, prob: float, rng: np.random.Generator):
        self.prob = prob
        self.rng = rng
        self.stay = 1.0 - 1.0 / _DROP_MEAN_RUN
        if prob >= 1.0:
            self.enter = 1.0
        else:
            self.enter = min(prob * (1.0 - self.stay) / (1.0 - prob), 1.0)
        self.states: dict[int, bool] = {}

    def advance(self, finger_idx: int, active: bool) -> bool:
        if not active:
            self.states.pop(finger_idx, None)
            return False
        if self.prob >= 1.0:
            return True
        if self.prob <= 0.0:
            return False
        prev = self.states.get(finger_idx)
        if prev is None:
            cur = bool(self.rng.random() < self.prob)
        elif prev:
            cur = bool(self.rng.random() < self.stay)
        else:
            cur = bool(self.rng.random() < self.enter)
        self.states[finger_idx] = cur
        return cur


def active_fingers(script: GestureScript, t_ms: float) -> tuple[FingerModel, ...]:
    current = None
    nxt = None
    for entry in script.entries:
        if entry.t_ms <= t_ms:
            current = entry
        else:
            nxt = entry
            break
    if current is None:
        return ()
    if current.lerp and nxt is not None and len(nxt.fingers) == len(current.fingers) and nxt.t_ms > current.t_ms:
        u = (t_ms - current.t_ms) / (nxt.t_ms - current.t_ms)
        return tuple(
            FingerModel(a.x + u * (b.x - a.x), a.y + u * (b.y - a.y), a.peak, a.sigma)
            for a, b in zip(current.fingers, nxt.fingers)
        )
    return current.fingers


def script_to_stream(
    script: GestureScript, noise: NoiseModel | None = None, fps: int = FPS
) -> list[PressureFrame]:
    """Render the script into frames at the sensor cadence.

    Noise is applied after rendering and before any preprocessing: salt
    replaces random cells with random bytes; dropout renders secondary
    fingers (index >= 1) below the pressure threshold during seeded
    bursts, reproducing a finger pressed too lightly.
    """
    noise = noise or NoiseModel()
    rng = np.random.default_rng([noise.rng_seed, 0x5A17])
    dropout = _DropoutState(noise.dropout_prob, rng)
    frames: list[PressureFrame] = []
    step = 1000.0 / fps
    end = script.end_ms()
    k = 0
    while k * step <= end + 1e-9:
        t = k * step
        fingers = active_fingers(script, t)
        cells = np.zeros((GRID, GRID), dtype=np.uint8)
        for idx in range(2):
            active = idx < len(fingers)
            dropped = dropout.advance(idx, active) if idx >= 1 else False
            if not active:
                continue
            fm = fingers[idx]
            if dropped:
                fm = FingerModel(fm.x, fm.y, min(fm.peak, DROPPED_PEAK), fm.sigma)
            render_finger(cells, fm)
        if noise.salt_prob > 0.0:
            mask = rng.random((GRID, GRID)) < noise.salt_prob
            count = int(mask.sum())
            if count:
                cells[mask] = rng.integers(0, 256, count, dtype=np.uint8)
        frames.append(PressureFrame(k, round(t), cells))
        k += 1
    return frames


# -- script JSON --------------------------------------------------------------


def script_to_json(script: GestureScript) -> dict:
    return {
        "label": script.label,
        "duration_ms": script.duration_ms,
        "entries": [
            {
                "t": e.t_ms,
                "lerp": e.lerp,
                "fingers": [
                    {"x": f.x, "y": f.y, "peak": f.peak, "sigma": f.sigma} for f in e.fingers
                ],
            }
            for e in script.entries
        ],
    }


def script_from_json(data: dict) -> GestureScript:
    entries = [
        ScriptEntry(
            float(e["t"]),
            tuple(
                FingerModel(
                    float(f["x"]),
                    float(f["y"]),
                    int(f.get("peak", DEFAULT_PEAK)),
                    float(f.get("sigma", DEFAULT_SIGMA)),
                )
                for f in e.get("fingers", [])
            ),
            bool(e.get("lerp", False)),
        )
        for e in data.get("entries", [])
    ]
    duration = data.get("duration_ms")
    return GestureScript(entries, data.get("label", ""), float(duration) if duration is not None else None)


# -- the 12-class evaluation suite -------------------------------------------

ZONE_ANCHORS = {"left": (5.0, 20.0), "right": (34.0, 20.0), "top": (20.0, 5.0), "bottom": (20.0, 34.0)}
_TWO_FINGER_SPLIT = 3.0  # each finger this far from the anchor, vertically
_TAP_TAIL_MS = 650.0  # covers the double-tap window plus voting lag


def build_gesture_script(label: str, rng: np.random.Generator) -> GestureScript:
    """One scripted instance of a gesture class, with nominal jitter in
    position and timing."""
    fingers, rest = label.split("-", 1)
    two = fingers == "2f"
    if rest == "tap":
        zone, kind = "left", "tap"  # two-finger tap has no zone constraint
    elif rest == "double-tap":
        zone, kind = "top", "double-tap"
    else:
        zone, kind = rest.split("-", 1)

    ax, ay = ZONE_ANCHORS[zone]
    # jitter on whole cells: integer centers render the canonical clean
    # footprint at every grid position
    ax += float(rng.integers(-2, 3))
    ay += float(rng.integers(-2, 3))
    if two:
        touch = (FingerModel(ax, ay - _TWO_FINGER_SPLIT), FingerModel(ax, ay + _TWO_FINGER_SPLIT))
    else:
        touch = (FingerModel(ax, ay),)

    lead = rng.uniform(80.0, 120.0)
    if kind == "tap":
        dur = rng.uniform(90.0, 110.0)
        entries = [
            ScriptEntry(0.0),
            ScriptEntry(lead, touch),
            ScriptEntry(lead + dur),
        ]
        duration = lead + dur + _TAP_TAIL_MS
    elif kind == "double-tap":
        dur1 = rng.uniform(90.0, 110.0)
        gap = rng.uniform(250.0, 350.0)
        dur2 = rng.uniform(90.0, 110.0)
        t2 = lead + dur1 + gap
        entries = [
            ScriptEntry(0.0),
            ScriptEntry(lead, touch),
            ScriptEntry(lead + dur1),
            ScriptEntry(t2, touch),
            ScriptEntry(t2 + dur2),
        ]
        duration = t2 + dur2 + 200.0
    else:  # longpress
        dur = rng.uniform(1150.0, 1250.0)
        entries = [
            ScriptEntry(0.0),
            ScriptEntry(lead, touch),
            ScriptEntry(lead + dur),
        ]
        duration = lead + dur + 150.0
    return GestureScript(entries, label, duration)


def suite_trials(
    seed: int, per_class: int = 50, salt_prob: float = 0.0, dropout_prob: float = 0.0
) -> list[tuple[str, GestureScript, NoiseModel]]:
    trials = []
    for c_idx, label in enumerate(GESTURE_CLASSES):
        for i in range(per_class):
            rng = np.random.default_rng([seed, c_idx, i])
            script = build_gesture_script(label, rng)
            noise = NoiseModel(salt_prob, dropout_prob, int(rng.integers(0, 2**31)))
            trials.append((label, script, noise))
    return trials


def run_suite(
    seed: int,
    per_class: int = 50,
    salt_prob: float = 0.0,
    dropout_prob: float = 0.0,
    cfg: SessionConfig | None = None,
    backend=None,
):
    """Generate, recognize, and score the 12-class suite.

    Returns (ConfusionMatrix, [(label, predicted), ...]).
    """
    from .metrics import ConfusionMatrix, classify_events

    cm = ConfusionMatrix()
    results = []
    for label, script, noise in suite_trials(seed, per_class, salt_prob, dropout_prob):
        frames = script_to_stream(script, noise)
        events = gesture_events_for_frames(frames, cfg, backend)
        predicted = classify_events(events)
        cm.add(label, predicted)
        results.append((label, predicted))
    return cm, results
