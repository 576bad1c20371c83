"""One interactive session: frames in, gestures/commands/document out.

Wires the whole pipeline (preprocess, blob detection, count voting,
gesture recognition, command mapping, menu machine, document and
animation state) behind a single frame-at-a-time interface that the CLI
and the serve protocol both drive.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, fields, replace

import numpy as np

from . import anim, sketch
from .commands import (
    ANIMATION_PANEL_ITEMS,
    DRAW_SUBMENU_ITEMS,
    MAIN_MENU_ITEMS,
    Command,
    CommandName,
    InteractionContext,
    MenuAction,
    MenuLevel,
    map_gesture,
    menu_step,
)
from .frames import GRID, PreprocessConfig, PressureFrame, preprocess
from .gestures import GestureEvent, GestureKind, Recognizer, RecognizerConfig
from .kernels import Backend
from .sketch import Mode, SketchDocument, new_document, pad_to_canvas
from .touch import VotingWindow, detect_blobs

log = logging.getLogger(__name__)

EMIT_TICK_S = anim.EMIT_TICK_S

_DRAG_KINDS = (GestureKind.DRAG_START, GestureKind.DRAG_MOVE, GestureKind.DRAG_END)


@dataclass(frozen=True)
class SessionConfig:
    threshold_tau: int = 16
    median_window: int = 3
    vote_n: int = 3
    tap_ms: float = 150.0
    double_window_ms: float = 500.0
    longpress_ms: float = 1000.0
    drag_cells: float = 2.0
    cycle_ms: float = 800.0
    erase_radius: float = sketch.DEFAULT_ERASE_RADIUS
    canvas: tuple[int, int] = (1280, 720)
    rng_seed: int = 0

    def __post_init__(self) -> None:
        for name in (
            "threshold_tau",
            "median_window",
            "vote_n",
            "tap_ms",
            "double_window_ms",
            "longpress_ms",
            "drag_cells",
            "cycle_ms",
            "erase_radius",
        ):
            if getattr(self, name) <= 0 and name != "threshold_tau":
                raise ValueError(f"{name} must be positive")
        if self.threshold_tau < 0:
            raise ValueError("threshold_tau must be >= 0")

    def recognizer_config(self) -> RecognizerConfig:
        return RecognizerConfig(
            self.tap_ms, self.double_window_ms, self.longpress_ms, self.drag_cells, self.cycle_ms
        )

    def preprocess_config(self) -> PreprocessConfig:
        return PreprocessConfig(self.threshold_tau, self.median_window)

    def to_json(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["canvas"] = list(self.canvas)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SessionConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "canvas" in data:
            data = dict(data)
            data["canvas"] = (data["canvas"][0], data["canvas"][1])
        return cls(**data)

    def updated(self, data: dict) -> "SessionConfig":
        if "canvas" in data:
            data = dict(data)
            data["canvas"] = (data["canvas"][0], data["canvas"][1])
        return replace(self, **data)


def gesture_events_for_frames(
    frames, cfg: SessionConfig | None = None, backend: Backend | None = None
) -> list[GestureEvent]:
    """Run just the recognition half of the pipeline over a frame list."""
    cfg = cfg or SessionConfig()
    pre = cfg.preprocess_config()
    window = VotingWindow(cfg.vote_n)
    recognizer = Recognizer(cfg.recognizer_config())
    events: list[GestureEvent] = []
    for frame in frames:
        blobs = detect_blobs(preprocess(frame, pre), backend)
        obs = window.push(blobs, frame.seq, frame.timestamp_ms)
        if obs is not None:
            events.extend(recognizer.step(obs))
    events.extend(recognizer.finalize())
    return events


class Session:
    def __init__(self, cfg: SessionConfig | None = None, backend: Backend | None = None):
        self.cfg = cfg or SessionConfig()
        self.backend = backend
        self.doc: SketchDocument = new_document()
        self.doc.canvas = self.cfg.canvas
        self._reset_pipeline()
        self.current_tool = "Draw"
        self.property_focus: tuple | None = None
        self.pending_geometry: tuple[str, list[list[tuple[float, float]]]] | None = None
        self.emit_states: dict[tuple[int, int], anim.EmitState] = {}
        self._drag_pad_points: list[tuple[float, float]] = []
        self.t_ms: float = 0.0

    def _reset_pipeline(self) -> None:
        self.pre = self.cfg.preprocess_config()
        self.window = VotingWindow(self.cfg.vote_n)
        self.recognizer = Recognizer(self.cfg.recognizer_config())

    # -- frame path --------------------------------------------------------

    def process_frame(self, frame: PressureFrame) -> list[dict]:
        msgs: list[dict] = []
        blobs = detect_blobs(preprocess(frame, self.pre), self.backend)
        obs = self.window.push(blobs, frame.seq, frame.timestamp_ms)
        if obs is not None:
            for ev in self.recognizer.step(obs):
                msgs.extend(self._handle_event(ev))
        self._tick_emitters()
        self.t_ms = float(frame.timestamp_ms)
        return msgs

    def finalize(self) -> list[dict]:
        msgs: list[dict] = []
        for ev in self.recognizer.finalize():
            msgs.extend(self._handle_event(ev))
        return msgs

    def _tick_emitters(self) -> None:
        live = set()
        for asset in self.doc.assets:
            for b_idx, binding in enumerate(asset.bindings):
                if isinstance(binding, anim.EmitBinding):
                    key = (asset.id, b_idx)
                    live.add(key)
                    state = self.emit_states.setdefault(key, anim.EmitState())
                    anim.step_emit(
                        binding,
                        state,
                        EMIT_TICK_S,
                        [self.cfg.rng_seed, asset.id, b_idx],
                        self.doc.canvas,
                    )
        for key in list(self.emit_states):
            if key not in live:
                del self.emit_states[key]

    # -- event and command handling -----------------------------------------

    def _handle_event(self, ev: GestureEvent) -> list[dict]:
        msgs: list[dict] = [ev.to_json()]
        if ev.kind in _DRAG_KINDS and ev.fingers == 1 and self.doc.mode is not Mode.DRAW:
            self._handle_tool_drag(ev)
            return msgs
        ctx = InteractionContext(
            menu_open=self.doc.menu.level is not MenuLevel.HIDDEN,
            property_editing=self.property_focus is not None,
            draw_mode=self.doc.mode is Mode.DRAW,
        )
        cmd = map_gesture(ev, ctx)
        if cmd is not None:
            msgs.append(cmd.to_json())
            msgs.extend(self._apply_command(cmd))
        return msgs

    def _handle_tool_drag(self, ev: GestureEvent) -> None:
        """Move and erase drags act on the document without a mapped command."""
        if ev.kind is GestureKind.DRAG_START:
            self._drag_pad_points = [(ev.x, ev.y)]
            return
        self._drag_pad_points.append((ev.x, ev.y))
        if ev.kind is not GestureKind.DRAG_END:
            return
        points = self._drag_pad_points
        self._drag_pad_points = []
        if self.doc.mode is Mode.MOVE:
            try:
                start = pad_to_canvas(*points[0], self.doc.canvas)
                end = pad_to_canvas(*points[-1], self.doc.canvas)
                sketch.move_asset(self.doc, (end[0] - start[0], end[1] - start[1]))
            except sketch.NoAsset:
                log.info("move drag ignored: no assets")
        elif self.doc.mode is Mode.ERASE:
            path = [pad_to_canvas(x, y, self.doc.canvas) for x, y in points]
            sketch.erase_path(self.doc, path, self.cfg.erase_radius)

    def _apply_command(self, cmd: Command) -> list[dict]:
        msgs: list[dict] = []
        name = cmd.name
        if name in (
            CommandName.ACTIVATE_MAIN_MENU,
            CommandName.ACTIVATE_SECONDARY_MENU,
            CommandName.ACTIVATE_TERTIARY_MENU,
            CommandName.SWITCH_MENU_ITEM,
            CommandName.RELEASE_MENU,
        ):
            self.doc.menu, actions = menu_step(self.doc.menu, cmd, items=self._menu_items_for(name))
            msgs.append(self.doc.menu.to_json())
            for action in actions:
                if action.kind == "invoke":
                    self._invoke_menu_item(action)
        elif name is CommandName.CONFIRM:
            self._confirm()
        elif name is CommandName.UNDO:
            sketch.undo(self.doc)
        elif name is CommandName.TOGGLE_MOVE_DRAW:
            sketch.toggle_move_draw(self.doc)
            self.current_tool = "Move" if self.doc.mode is Mode.MOVE else "Draw"
        elif name in (
            CommandName.PROPERTY_DEC,
            CommandName.PROPERTY_INC,
            CommandName.PROPERTY_DEC_REPEAT,
            CommandName.PROPERTY_INC_REPEAT,
        ):
            increase = name in (CommandName.PROPERTY_INC, CommandName.PROPERTY_INC_REPEAT)
            self._apply_property_step(increase, cmd)
        elif name in (CommandName.STROKE_BEGIN, CommandName.STROKE_POINT, CommandName.STROKE_END):
            self._apply_stroke(cmd)
        return msgs

    def _menu_items_for(self, name: CommandName) -> tuple[str, ...] | None:
        if name is CommandName.ACTIVATE_MAIN_MENU:
            return MAIN_MENU_ITEMS
        if name is CommandName.ACTIVATE_SECONDARY_MENU:
            if self.current_tool == "Draw":
                return DRAW_SUBMENU_ITEMS
            if self.current_tool == "Animation":
                return ANIMATION_PANEL_ITEMS
            return ()
        if name is CommandName.ACTIVATE_TERTIARY_MENU:
            if self.current_tool == "Draw":
                return ("Thickness",)
            if self.doc.assets:
                bindings = self.doc.assets[self.doc.active_asset].bindings
                if bindings:
                    return anim.property_names(bindings[-1])
            return ()
        return None

    def _invoke_menu_item(self, action: MenuAction) -> None:
        label = action.label
        if action.level is MenuLevel.MAIN:
            if label == "Move":
                sketch.set_mode(self.doc, Mode.MOVE)
                self.current_tool = "Move"
            elif label == "Draw":
                sketch.set_mode(self.doc, Mode.DRAW)
                self.current_tool = "Draw"
            elif label == "Erase":
                sketch.set_mode(self.doc, Mode.ERASE)
                self.current_tool = "Erase"
            elif label == "Create a New Asset":
                sketch.create_asset(self.doc)
            elif label == "Animation":
                self.current_tool = "Animation"
            elif label == "Delete":
                try:
                    sketch.delete_asset(self.doc)
                except sketch.NoAsset:
                    log.info("delete ignored: no assets")
        elif action.level is MenuLevel.SECONDARY:
            self._invoke_secondary(label)
        elif action.level is MenuLevel.TERTIARY:
            self._invoke_tertiary(label)

    def _invoke_secondary(self, label: str) -> None:
        doc = self.doc
        if self.current_tool == "Draw":
            if label == "Change Thickness":
                self.property_focus = ("thickness",)
            elif label == "Change Color":
                self.property_focus = ("picker",)
            elif label == "Mirror Brush":
                sketch.toggle_mirror(doc)
            return
        if self.current_tool != "Animation" or not doc.assets:
            log.info("submenu item %r ignored", label)
            return
        asset = doc.assets[doc.active_asset]
        if label == "Doodle":
            sketch.bind_animation(doc, anim.DoodleBinding())
        elif label == "Frame":
            snapshot = [sketch.stroke_from_json(sketch.stroke_to_json(s)) for s in asset.strokes]
            sketch.bind_animation(doc, anim.FrameBinding([snapshot]))
        elif label == "Rotate":
            sketch.bind_animation(doc, anim.RotateBinding())
        elif label == "Emit":
            self.pending_geometry = ("emit", [])
        elif label == "Move":
            self.pending_geometry = ("move", [])

    def _invoke_tertiary(self, label: str) -> None:
        if label == "Thickness":
            self.property_focus = ("thickness",)
            return
        if not self.doc.assets:
            return
        asset = self.doc.assets[self.doc.active_asset]
        if not asset.bindings:
            return
        b_idx = len(asset.bindings) - 1
        if label == "New resource":
            self.property_focus = ("frame_new_resource", asset.id, b_idx)
        else:
            self.property_focus = ("binding", asset.id, b_idx, label)

    def _confirm(self) -> None:
        """Finish the pending multi-step definition and leave property editing."""
        if self.pending_geometry is not None:
            kind, polylines = self.pending_geometry
            self.pending_geometry = None
            self._finalize_geometry(kind, polylines)
        elif self.property_focus is not None and self.property_focus[0] == "frame_new_resource":
            _, asset_id, b_idx = self.property_focus
            try:
                asset = next(a for a in self.doc.assets if a.id == asset_id)
                binding = asset.bindings[b_idx]
                if isinstance(binding, anim.FrameBinding):
                    snapshot = [
                        sketch.stroke_from_json(sketch.stroke_to_json(s)) for s in asset.strokes
                    ]
                    binding.resources.append(snapshot)
            except (StopIteration, IndexError):
                log.info("new-resource confirm ignored: binding gone")
        self.property_focus = None

    def _finalize_geometry(self, kind: str, polylines: list) -> None:
        try:
            if kind == "emit":
                if len(polylines) < 2 or len(polylines[1]) < 2:
                    log.info("emit binding needs an emitter line and a trajectory line")
                    return
                emitter = (polylines[0][0], polylines[0][-1])
                trajectory = (
                    polylines[1][-1][0] - polylines[1][0][0],
                    polylines[1][-1][1] - polylines[1][0][1],
                )
                sketch.bind_animation(self.doc, anim.EmitBinding(emitter, trajectory))
            elif kind == "move":
                if not polylines or len(polylines[0]) < 2:
                    log.info("move binding needs a trajectory line")
                    return
                sketch.bind_animation(self.doc, anim.MoveBinding(polylines[0]))
        except (anim.InvalidProperty, sketch.NoAsset) as exc:
            log.info("binding definition dropped: %s", exc)

    def _apply_property_step(self, increase: bool, cmd: Command) -> None:
        focus = self.property_focus
        if focus is None:
            return
        if focus[0] == "thickness":
            sketch.adjust_thickness(self.doc, 1.0 if increase else -1.0)
        elif focus[0] == "picker":
            if cmd.zone is not None:
                sketch.apply_picker_move(self.doc, cmd.zone)
        elif focus[0] == "binding":
            _, asset_id, b_idx, prop = focus
            try:
                sketch.adjust_binding_property(self.doc, asset_id, b_idx, prop, increase)
            except (anim.InvalidProperty, sketch.NoAsset, IndexError) as exc:
                log.info("property step ignored: %s", exc)

    def _apply_stroke(self, cmd: Command) -> None:
        if self.pending_geometry is not None:
            kind, polylines = self.pending_geometry
            point = pad_to_canvas(*cmd.position, self.doc.canvas) if cmd.position else None
            if cmd.name is CommandName.STROKE_BEGIN:
                polylines.append([point])
            elif cmd.name is CommandName.STROKE_POINT and polylines:
                polylines[-1].append(point)
            return
        try:
            sketch.apply_stroke_command(self.doc, cmd)
        except (sketch.NoAsset, sketch.PointWithoutBegin, sketch.StrokeAlreadyOpen) as exc:
            log.info("stroke command dropped: %s", exc)

    # -- scene -------------------------------------------------------------

    def live_scene(self) -> anim.SceneFrame:
        return anim.scene_frame(self.doc, self.t_ms / 1000.0, self.cfg.rng_seed, self.emit_states)

    def scene_at(self, t_s: float) -> anim.SceneFrame:
        return anim.scene_frame(self.doc, t_s, self.cfg.rng_seed)

    # -- protocol ----------------------------------------------------------

    def handle_message(self, msg: dict) -> list[dict]:
        kind = msg.get("type")
        if kind == "frame":
            frame = frame_from_message(msg)
            out = self.process_frame(frame)
            out.append(self.live_scene().to_json())
            return out
        if kind == "config":
            data = {k: v for k, v in msg.items() if k != "type"}
            try:
                self.cfg = self.cfg.updated(data)
            except (TypeError, ValueError) as exc:
                return [{"type": "error", "error": f"bad config: {exc}"}]
            self._reset_pipeline()
            return [{"type": "config_ok", "config": self.cfg.to_json()}]
        if kind == "get_document":
            return [{"type": "document", "document": sketch.document_to_json(self.doc)}]
        if kind == "scene_at":
            return [self.scene_at(float(msg.get("t", 0.0))).to_json()]
        if kind == "reset":
            self.doc = new_document()
            self.doc.canvas = self.cfg.canvas
            self._reset_pipeline()
            self.current_tool = "Draw"
            self.property_focus = None
            self.pending_geometry = None
            self.emit_states = {}
            self._drag_pad_points = []
            self.t_ms = 0.0
            return [{"type": "reset_ok"}]
        return [{"type": "error", "error": f"unknown message type: {kind!r}"}]


def frame_from_message(msg: dict) -> PressureFrame:
    cells = np.zeros((GRID, GRID), dtype=np.uint8)
    for x, y, p in msg.get("cells", []):
        if not (0 <= x < GRID and 0 <= y < GRID):
            raise ValueError(f"cell out of range: ({x}, {y})")
        cells[y, x] = p
    return PressureFrame(int(msg["seq"]), int(msg["t"]), cells)
