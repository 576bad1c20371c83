"""Evaluation quantities: drawing error, completion time, accuracy, and
the gesture confusion matrix, plus the template-tracing test agents."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .commands import Command, CommandName
from .gestures import GestureEvent, GestureKind
from .sketch import Mode, new_document, apply_stroke_command

DEFAULT_SAMPLES = 256


class EmptySet(ValueError):
    pass


class EmptyLog(ValueError):
    pass


class EmptyMatrix(ValueError):
    pass


class DegeneratePolyline(ValueError):
    pass


def drawing_error(drawing: np.ndarray, template: np.ndarray) -> float:
    """Mean distance from each drawing sample to its nearest template sample."""
    d = np.asarray(drawing, dtype=float).reshape(-1, 2)
    t = np.asarray(template, dtype=float).reshape(-1, 2)
    if len(d) == 0 or len(t) == 0:
        raise EmptySet("both sample sets must be non-empty")
    diff = d[:, None, :] - t[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    return float(dist.min(axis=1).mean())


def resample_polyline(points, n: int, closed: bool = False) -> np.ndarray:
    """N points equally spaced by arc length.

    Open polylines include both endpoints; closed ones are walked as a
    loop with no duplicated endpoint, so a unit square at n=4 yields
    exactly its corners.
    """
    if n < 2:
        raise ValueError("need at least 2 samples")
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 2 and not closed:
        raise DegeneratePolyline("polyline needs at least 2 points")
    if closed and len(pts) >= 1 and not np.array_equal(pts[0], pts[-1]):
        pts = np.vstack([pts, pts[:1]])
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    total = float(seg.sum())
    if total == 0.0:
        raise DegeneratePolyline("polyline has zero length")
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    if closed:
        targets = np.arange(n) * total / n
    else:
        targets = np.linspace(0.0, total, n)
    return np.column_stack([np.interp(targets, cum, pts[:, 0]), np.interp(targets, cum, pts[:, 1])])


def completion_time(timestamps_ms) -> float:
    """Seconds between the first and last recorded points of a drawing."""
    stamps = list(timestamps_ms)
    if not stamps:
        raise EmptyLog("no point events recorded")
    return (stamps[-1] - stamps[0]) / 1000.0


# -- gesture classes and the confusion matrix -------------------------------

GESTURE_CLASSES = (
    "1f-left-tap",
    "1f-right-tap",
    "1f-top-tap",
    "1f-bottom-tap",
    "1f-left-longpress",
    "1f-right-longpress",
    "1f-top-longpress",
    "1f-bottom-longpress",
    "1f-double-tap",
    "2f-tap",
    "2f-left-longpress",
    "2f-right-longpress",
)

NO_GESTURE = "none"


def classify_events(events: list[GestureEvent]) -> str:
    """Reduce one trial's event stream to a predicted gesture class."""
    double = next((e for e in events if e.kind is GestureKind.DOUBLE_TAP), None)
    if double is not None and double.fingers == 1:
        return "1f-double-tap"
    press = next((e for e in events if e.kind is GestureKind.LONG_PRESS_START), None)
    if press is not None:
        if press.fingers == 2:
            return f"2f-{press.zone.value}-longpress"
        return f"1f-{press.zone.value}-longpress"
    tap = next((e for e in events if e.kind is GestureKind.TAP), None)
    if tap is not None:
        if tap.fingers == 2:
            return "2f-tap"
        return f"1f-{tap.zone.value}-tap"
    return NO_GESTURE


@dataclass
class ConfusionMatrix:
    labels: list[str] = field(default_factory=lambda: list(GESTURE_CLASSES))
    counts: dict = field(default_factory=dict)

    def add(self, true_label: str, predicted: str, n: int = 1) -> None:
        for label in (true_label, predicted):
            if label not in self.labels:
                self.labels.append(label)
        self.counts[(true_label, predicted)] = self.counts.get((true_label, predicted), 0) + n

    def total(self) -> int:
        return sum(self.counts.values())

    def correct(self) -> int:
        return sum(n for (t, p), n in self.counts.items() if t == p)

    def to_array(self) -> np.ndarray:
        idx = {label: i for i, label in enumerate(self.labels)}
        out = np.zeros((len(self.labels), len(self.labels)), dtype=int)
        for (t, p), n in self.counts.items():
            out[idx[t], idx[p]] += n
        return out

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "matrix": self.to_array().tolist(),
            "accuracy": accuracy(self),
        }

    def to_text(self) -> str:
        arr = self.to_array()
        width = max(len(label) for label in self.labels)
        cell = max(5, len(str(arr.max(initial=0))))
        lines = [" " * (width + 2) + " ".join(f"{i:>{cell}}" for i in range(len(self.labels)))]
        for i, label in enumerate(self.labels):
            row = " ".join(f"{n:>{cell}}" for n in arr[i])
            lines.append(f"{label:<{width}} |{row}")
        lines.append("")
        for i, label in enumerate(self.labels):
            lines.append(f"{i:>3}: {label}")
        return "\n".join(lines)


def accuracy(cm: ConfusionMatrix) -> float:
    total = cm.total()
    if total == 0:
        raise EmptyMatrix("confusion matrix has no trials")
    return cm.correct() / total


def two_finger_confusion_share(cm: ConfusionMatrix) -> float:
    """Fraction of all errors that read a two-finger gesture as one-finger."""
    errors = 0
    two_to_one = 0
    for (t, p), n in cm.counts.items():
        if t == p:
            continue
        errors += n
        if t.startswith("2f-") and p.startswith("1f-"):
            two_to_one += n
    if errors == 0:
        return 1.0
    return two_to_one / errors


# -- drawing templates -------------------------------------------------------

CANVAS_CENTER = (639.5, 359.5)


def template_polyline(name: str) -> tuple[np.ndarray, bool]:
    """Template shapes for the tracing tasks, centered on the canvas.

    Returns (vertices, closed).
    """
    cx, cy = CANVAS_CENTER
    if name in ("rect", "rectangle"):
        w, h = 600.0, 400.0
        pts = [
            (cx - w / 2, cy - h / 2),
            (cx + w / 2, cy - h / 2),
            (cx + w / 2, cy + h / 2),
            (cx - w / 2, cy + h / 2),
        ]
        return np.array(pts), True
    if name in ("tri", "triangle"):
        side = 500.0
        r = side / math.sqrt(3.0)
        pts = [
            (cx, cy - r),
            (cx + side / 2, cy + r / 2),
            (cx - side / 2, cy + r / 2),
        ]
        return np.array(pts), True
    if name == "circle":
        radius = 250.0
        angles = np.linspace(0.0, 2.0 * math.pi, 256, endpoint=False)
        pts = np.column_stack([cx + radius * np.cos(angles), cy + radius * np.sin(angles)])
        return pts, True
    raise ValueError(f"unknown template: {name!r}")


def template_samples(name: str, n: int = DEFAULT_SAMPLES) -> np.ndarray:
    pts, closed = template_polyline(name)
    return resample_polyline(pts, n, closed=closed)


# -- tracing agents ----------------------------------------------------------


def trace_template(
    name: str,
    tremor_sigma: float = 0.0,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    speed_units_s: float = 400.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Drive the pad along a template and return (drawn points, timestamps ms).

    The agent moves a real-valued touch position along the template at
    constant speed and feeds it through the stroke pipeline (pad
    coordinates in, canvas stroke out). Hand tremor is Gaussian per-axis
    noise of ``tremor_sigma`` canvas units added to the touch position.
    """
    pts, closed = template_polyline(name)
    path = resample_polyline(pts, samples, closed=closed)
    if closed:
        path = np.vstack([path, path[:1]])  # finish where we started
    total_len = float(np.linalg.norm(np.diff(path, axis=0), axis=1).sum())

    rng = np.random.default_rng([seed, 0x7E3])
    # tremor is specified in canvas units; convert per-axis to pad cells
    sx = tremor_sigma / (1279.0 / 39.0)
    sy = tremor_sigma / (719.0 / 39.0)

    commands = []
    times = []
    for i, (cx, cy) in enumerate(path):
        px = cx / 1279.0 * 39.0
        py = cy / 719.0 * 39.0
        if tremor_sigma > 0:
            px += rng.normal(0.0, sx)
            py += rng.normal(0.0, sy)
        px = min(max(px, 0.0), 39.0)
        py = min(max(py, 0.0), 39.0)
        t_ms = i / max(len(path) - 1, 1) * total_len / speed_units_s * 1000.0
        name_ = CommandName.STROKE_BEGIN if i == 0 else CommandName.STROKE_POINT
        commands.append(Command(name_, position=(px, py), t_ms=t_ms))
        times.append(t_ms)
    commands.append(Command(CommandName.STROKE_END, t_ms=times[-1]))

    doc = new_document()
    doc.mode = Mode.DRAW
    for cmd in commands:
        apply_stroke_command(doc, cmd)
    drawn = np.array(doc.assets[0].strokes[-1].points, dtype=float)
    return drawn, np.array(times)


def template_drawing_error(
    name: str,
    tremor_sigma: float = 0.0,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
) -> float:
    drawn, _ = trace_template(name, tremor_sigma, seed, samples)
    return drawing_error(
        resample_polyline(drawn, samples), template_samples(name, samples)
    )
