"""Blob detection, touch point extraction, and n-frame count voting."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .frames import PressureFrame

MIN_BLOB_CELLS = 5
DEFAULT_VOTE_WINDOW = 3


class EmptyWindow(ValueError):
    pass


@dataclass(frozen=True)
class Blob:
    cells: frozenset[tuple[int, int, int]]  # (x, y, pressure)
    peak: tuple[int, int, int]


@dataclass(frozen=True)
class TouchPoint:
    x: float
    y: float
    pressure: int


@dataclass(frozen=True)
class TouchObservation:
    finger_count: int
    points: tuple[TouchPoint, ...]
    window_seqs: tuple[int, ...]
    t_ms: int  # timestamp of the newest frame in the window


def detect_blobs(frame: PressureFrame, backend: kernels.Backend | None = None) -> list[Blob]:
    """Grow pressure blobs from the preprocessed frame.

    Seeds at the highest-pressure unclaimed cell, admits 8-neighbors with
    more than half the pressure of the cell they are reached from, and
    drops components smaller than MIN_BLOB_CELLS. Deterministic: output is
    ordered by peak pressure descending, ties by (y, x) of the peak.
    """
    label = (backend or kernels.active_backend()).label_blobs
    blobs = []
    for arr in label(frame.cells, MIN_BLOB_CELLS):
        cells = frozenset((int(x), int(y), int(p)) for x, y, p in arr)
        blobs.append(Blob(cells=cells, peak=_peak_of(cells)))
    return blobs


def _peak_of(cells: frozenset[tuple[int, int, int]]) -> tuple[int, int, int]:
    # highest pressure, ties broken by smallest (y, x)
    return max(cells, key=lambda c: (c[2], -c[1], -c[0]))


def touch_point_of(blob: Blob) -> TouchPoint:
    x, y, p = blob.peak
    return TouchPoint(float(x), float(y), p)


def observe(window: list[list[Blob]], window_seqs: list[int], t_ms: int = 0) -> TouchObservation:
    """Vote finger count and calibrate positions over one n-frame window.

    The count is the modal per-frame blob count (ties prefer the most
    recent frame's count); positions are per-finger means over exactly the
    modal frames, fingers matched across frames by nearest neighbor.
    """
    if not window:
        raise EmptyWindow("observation window is empty")
    counts = [len(blobs) for blobs in window]
    tally = Counter(counts)
    top = max(tally.values())
    tied = {c for c, n in tally.items() if n == top}
    if len(tied) == 1:
        mode = tied.pop()
    else:
        mode = next(c for c in reversed(counts) if c in tied)

    modal_frames = [blobs for blobs, c in zip(window, counts) if c == mode]
    if mode == 0:
        return TouchObservation(0, (), tuple(window_seqs), t_ms)

    reference = [touch_point_of(b) for b in modal_frames[0]]
    sums = [np.array([tp.x, tp.y], dtype=float) for tp in reference]
    pressures = [tp.pressure for tp in reference]
    for blobs in modal_frames[1:]:
        points = [touch_point_of(b) for b in blobs]
        for ref_idx, pt_idx in _match_fingers(reference, points):
            pt = points[pt_idx]
            sums[ref_idx] += (pt.x, pt.y)
            pressures[ref_idx] = max(pressures[ref_idx], pt.pressure)
    n = len(modal_frames)
    calibrated = tuple(
        TouchPoint(s[0] / n, s[1] / n, pressures[i]) for i, s in enumerate(sums)
    )
    return TouchObservation(mode, calibrated, tuple(window_seqs), t_ms)


def _match_fingers(ref: list[TouchPoint], pts: list[TouchPoint]) -> list[tuple[int, int]]:
    """Greedy closest-pair-first matching; exact for the <=2 finger case."""
    pairs = sorted(
        ((i, j) for i in range(len(ref)) for j in range(len(pts))),
        key=lambda ij: (
            (ref[ij[0]].x - pts[ij[1]].x) ** 2 + (ref[ij[0]].y - pts[ij[1]].y) ** 2,
            ij,
        ),
    )
    used_ref: set[int] = set()
    used_pts: set[int] = set()
    matches = []
    for i, j in pairs:
        if i in used_ref or j in used_pts:
            continue
        used_ref.add(i)
        used_pts.add(j)
        matches.append((i, j))
    return matches


@dataclass
class VotingWindow:
    """Sliding n-frame buffer feeding ``observe``."""

    n: int = DEFAULT_VOTE_WINDOW
    _blobs: deque = field(default_factory=deque)
    _seqs: deque = field(default_factory=deque)

    def push(self, frame_blobs: list[Blob], seq: int, t_ms: int) -> TouchObservation | None:
        """Add one frame's blobs; returns an observation once warm."""
        self._blobs.append(frame_blobs)
        self._seqs.append(seq)
        if len(self._blobs) > self.n:
            self._blobs.popleft()
            self._seqs.popleft()
        if len(self._blobs) < self.n:
            return None
        return observe(list(self._blobs), list(self._seqs), t_ms)
