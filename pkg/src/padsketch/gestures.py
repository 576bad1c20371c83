"""Timed gesture classification: tap, double tap, long press, drag.

The recognizer consumes voted touch observations in event time (no wall
clock), so replaying an identical observation stream yields an identical
event stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .touch import TouchObservation

PAD_MAX = 39.0


class OutOfRange(ValueError):
    pass


class Zone(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    TOP = "top"
    BOTTOM = "bottom"
    ANY = "any"


class GestureKind(str, Enum):
    TAP = "tap"
    DOUBLE_TAP = "double_tap"
    LONG_PRESS_START = "long_press_start"
    LONG_PRESS_HOLD = "long_press_hold"
    LONG_PRESS_END = "long_press_end"
    DRAG_START = "drag_start"
    DRAG_MOVE = "drag_move"
    DRAG_END = "drag_end"


def classify_zone(x: float, y: float) -> Zone:
    """Quadrant of the pad, split along its diagonals (y grows downward).

    Diagonal ties go to Left/Right by construction, so every position gets
    exactly one zone.
    """
    if not (0.0 <= x <= PAD_MAX and 0.0 <= y <= PAD_MAX):
        raise OutOfRange(f"pad position out of range: ({x}, {y})")
    dx = x - PAD_MAX / 2
    dy = y - PAD_MAX / 2
    if abs(dx) >= abs(dy):
        return Zone.LEFT if dx < 0 else Zone.RIGHT
    return Zone.TOP if dy < 0 else Zone.BOTTOM


@dataclass(frozen=True)
class GestureEvent:
    kind: GestureKind
    fingers: int
    zone: Zone
    x: float
    y: float
    t_start: float
    t_end: float

    def to_json(self) -> dict:
        return {
            "type": "gesture",
            "kind": self.kind.value,
            "fingers": self.fingers,
            "zone": self.zone.value,
            "x": self.x,
            "y": self.y,
            "t_start": self.t_start,
            "t_end": self.t_end,
        }


@dataclass(frozen=True)
class RecognizerConfig:
    tap_ms: float = 150.0
    double_window_ms: float = 500.0
    longpress_ms: float = 1000.0
    drag_cells: float = 2.0
    cycle_ms: float = 800.0

    def __post_init__(self) -> None:
        for name in ("tap_ms", "double_window_ms", "longpress_ms", "drag_cells", "cycle_ms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


class Phase(str, Enum):
    IDLE = "idle"
    TOUCHING = "touching"
    AWAIT_SECOND_TAP = "await_second_tap"
    PRESSING = "pressing"
    DRAGGING = "dragging"


@dataclass
class _PendingTap:
    t_start: float
    t_end: float
    fingers: int
    zone: Zone
    x: float
    y: float


@dataclass
class _Contact:
    t_start: float
    anchor: tuple[float, float]
    fingers: int
    zone: Zone
    last_pos: tuple[float, float]
    last_count: int
    max_disp: float = 0.0
    after_pending: bool = False
    pressing: bool = False
    dragging: bool = False
    next_hold_ms: float = 0.0


class Recognizer:
    """Contact lifecycle state machine over touch observations.

    Rules: a release under tap_ms is a tap candidate; two candidates whose
    second contact begins within double_window_ms of the first release
    merge into one double tap (suppressing both taps); a contact held past
    longpress_ms without moving more than drag_cells from its anchor emits
    a long press with hold ticks every cycle_ms; moving past drag_cells
    earlier turns the contact into a drag. A stationary release between
    tap_ms and longpress_ms emits nothing.
    """

    def __init__(self, config: RecognizerConfig | None = None):
        self.config = config or RecognizerConfig()
        self._contact: _Contact | None = None
        self._pending: _PendingTap | None = None
        self._last_now: float = 0.0

    @property
    def phase(self) -> Phase:
        if self._contact is not None:
            if self._contact.pressing:
                return Phase.PRESSING
            if self._contact.dragging:
                return Phase.DRAGGING
            return Phase.TOUCHING
        if self._pending is not None:
            return Phase.AWAIT_SECOND_TAP
        return Phase.IDLE

    def step(self, obs: TouchObservation, now: float | None = None) -> list[GestureEvent]:
        now = obs.t_ms if now is None else now
        self._last_now = now
        count = obs.finger_count
        events: list[GestureEvent] = []
        if self._contact is None:
            if count > 0:
                self._begin_contact(count, _mean_pos(obs), now, events)
            else:
                self._expire_pending(now, events)
        else:
            if count > 0:
                self._track_contact(count, _mean_pos(obs), now, events)
            else:
                self._release_contact(now, events)
        return events

    def finalize(self, now: float | None = None) -> list[GestureEvent]:
        """End of stream: treat as a release, then flush any pending tap."""
        now = self._last_now if now is None else now
        events: list[GestureEvent] = []
        if self._contact is not None:
            self._release_contact(now, events)
        if self._pending is not None:
            events.append(self._tap_event(self._pending))
            self._pending = None
        return events

    # -- contact lifecycle ------------------------------------------------

    def _begin_contact(self, count: int, pos, now: float, events: list) -> None:
        after_pending = False
        if self._pending is not None:
            if now - self._pending.t_end <= self.config.double_window_ms:
                after_pending = True
            else:
                events.append(self._tap_event(self._pending))
                self._pending = None
        self._contact = _Contact(
            t_start=now,
            anchor=pos,
            fingers=count,
            zone=classify_zone(*pos),
            last_pos=pos,
            last_count=count,
            after_pending=after_pending,
        )

    def _track_contact(self, count: int, pos, now: float, events: list) -> None:
        c = self._contact
        assert c is not None
        if count != c.last_count and not (c.pressing or c.dragging):
            # the finger set changed, so the combined position jumps by the
            # finger spacing; re-anchor so that jump never reads as motion.
            # A new maximum count also latches fingers and the zone (the
            # midpoint rule for two-finger gestures); once pressing or
            # dragging everything is frozen so flicker cannot reroute the
            # gesture.
            if count > c.fingers:
                c.fingers = count
                c.zone = classify_zone(*pos)
            c.anchor = pos
            c.max_disp = 0.0
        c.last_count = count
        c.last_pos = pos
        disp = math.dist(pos, c.anchor)
        c.max_disp = max(c.max_disp, disp)
        if c.pressing:
            while now >= c.next_hold_ms:
                events.append(self._event(GestureKind.LONG_PRESS_HOLD, c, pos, now))
                c.next_hold_ms += self.config.cycle_ms
        elif c.dragging:
            events.append(self._event(GestureKind.DRAG_MOVE, c, pos, now))
        else:
            held = now - c.t_start
            if disp > self.config.drag_cells and held < self.config.longpress_ms:
                self._start_drag(c, pos, now, events)
            elif held >= self.config.longpress_ms:
                if c.max_disp <= self.config.drag_cells:
                    c.pressing = True
                    c.next_hold_ms = now + self.config.cycle_ms
                    self._pending = None  # first tap can no longer pair up
                    events.append(self._event(GestureKind.LONG_PRESS_START, c, c.anchor, now))
                else:
                    # movement first seen at the longpress boundary
                    self._start_drag(c, pos, now, events)

    def _start_drag(self, c: _Contact, pos, now: float, events: list) -> None:
        c.dragging = True
        self._pending = None
        events.append(
            GestureEvent(GestureKind.DRAG_START, c.fingers, c.zone, c.anchor[0], c.anchor[1], c.t_start, now)
        )
        events.append(self._event(GestureKind.DRAG_MOVE, c, pos, now))

    def _release_contact(self, now: float, events: list) -> None:
        c = self._contact
        assert c is not None
        self._contact = None
        if c.pressing:
            events.append(self._event(GestureKind.LONG_PRESS_END, c, c.last_pos, now))
            return
        if c.dragging:
            events.append(self._event(GestureKind.DRAG_END, c, c.last_pos, now))
            return
        duration = now - c.t_start
        if duration < self.config.tap_ms:
            if c.after_pending and self._pending is not None:
                first = self._pending
                self._pending = None
                events.append(
                    GestureEvent(
                        GestureKind.DOUBLE_TAP,
                        max(first.fingers, c.fingers),
                        first.zone,
                        first.x,
                        first.y,
                        first.t_start,
                        now,
                    )
                )
            else:
                self._pending = _PendingTap(
                    c.t_start, now, c.fingers, c.zone, c.anchor[0], c.anchor[1]
                )
        else:
            # stationary release inside [tap_ms, longpress_ms): no gesture
            self._pending = None

    def _expire_pending(self, now: float, events: list) -> None:
        if self._pending is not None and now - self._pending.t_end > self.config.double_window_ms:
            events.append(self._tap_event(self._pending))
            self._pending = None

    def _tap_event(self, tap: _PendingTap) -> GestureEvent:
        return GestureEvent(GestureKind.TAP, tap.fingers, tap.zone, tap.x, tap.y, tap.t_start, tap.t_end)

    def _event(self, kind: GestureKind, c: _Contact, pos, now: float) -> GestureEvent:
        return GestureEvent(kind, c.fingers, c.zone, pos[0], pos[1], c.t_start, now)


def _mean_pos(obs: TouchObservation) -> tuple[float, float]:
    xs = sum(p.x for p in obs.points) / len(obs.points)
    ys = sum(p.y for p in obs.points) / len(obs.points)
    return (xs, ys)
