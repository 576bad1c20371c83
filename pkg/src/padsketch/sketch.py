"""Sketch document: assets, strokes, brush, modes, and the undo log.

Strokes are stored in asset-local coordinates (canvas position minus the
asset origin at draw time) so moving an asset is a pure origin change.
Every mutating operation pushes exactly one inverse entry onto the
document's bounded undo log.
"""

from __future__ import annotations

import copy
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .commands import Command, CommandName, MenuLevel, MenuState
from .gestures import OutOfRange, Zone

log = logging.getLogger(__name__)

CANVAS_W = 1280
CANVAS_H = 720
PAD_MAX = 39.0
THICKNESS_MIN = 1.0
THICKNESS_MAX = 32.0
UNDO_LIMIT = 100
PICKER_GRID = 16
DEFAULT_ERASE_RADIUS = 8.0

DOC_SCHEMA = "padsketch-document"
DOC_VERSION = 1


class PointWithoutBegin(RuntimeError):
    pass


class StrokeAlreadyOpen(RuntimeError):
    pass


class NoAsset(RuntimeError):
    pass


class Mode(str, Enum):
    DRAW = "draw"
    MOVE = "move"
    ERASE = "erase"


@dataclass
class Stroke:
    points: list[tuple[float, float]]
    color: tuple[float, float, float]
    thickness: float


@dataclass
class Brush:
    color: tuple[float, float, float] = (0.0, 1.0, 1.0)
    thickness: float = 4.0
    mirror: bool = False
    picker_pin: tuple[int, int] = (0, 15)  # (hue, saturation) indices


def picker_color(pin: tuple[int, int]) -> tuple[float, float, float]:
    # 16 distinct hues (cyclic, so 16/16 would alias 0), full saturation span
    return (pin[0] / PICKER_GRID, pin[1] / (PICKER_GRID - 1), 1.0)


_PIN_STEPS = {
    Zone.LEFT: (-1, 0),
    Zone.RIGHT: (1, 0),
    Zone.TOP: (0, 1),
    Zone.BOTTOM: (0, -1),
}


def move_picker_pin(brush: Brush, zone: Zone) -> Brush:
    """One pin step on the hue/saturation grid, clamped at the edges."""
    dh, ds = _PIN_STEPS[zone]
    h = min(max(brush.picker_pin[0] + dh, 0), PICKER_GRID - 1)
    s = min(max(brush.picker_pin[1] + ds, 0), PICKER_GRID - 1)
    pin = (h, s)
    return Brush(picker_color(pin), brush.thickness, brush.mirror, pin)


@dataclass
class Asset:
    id: int
    strokes: list[Stroke] = field(default_factory=list)
    origin: tuple[float, float] = (0.0, 0.0)
    bindings: list = field(default_factory=list)


@dataclass
class _OpenStroke:
    asset_id: int
    stroke: Stroke
    twin: Stroke | None


@dataclass
class SketchDocument:
    assets: list[Asset] = field(default_factory=list)
    active_asset: int = 0
    brush: Brush = field(default_factory=Brush)
    mode: Mode = Mode.DRAW
    menu: MenuState = field(default_factory=MenuState)
    canvas: tuple[int, int] = (CANVAS_W, CANVAS_H)
    undo_log: list[tuple] = field(default_factory=list)
    next_asset_id: int = 0
    open_stroke: _OpenStroke | None = None


def new_document() -> SketchDocument:
    doc = SketchDocument()
    doc.assets.append(Asset(id=0))
    doc.next_asset_id = 1
    return doc


def pad_to_canvas(x: float, y: float, canvas: tuple[int, int] = (CANVAS_W, CANVAS_H)) -> tuple[float, float]:
    if not (0.0 <= x <= PAD_MAX and 0.0 <= y <= PAD_MAX):
        raise OutOfRange(f"pad position out of range: ({x}, {y})")
    return (x / PAD_MAX * (canvas[0] - 1), y / PAD_MAX * (canvas[1] - 1))


def _push(doc: SketchDocument, entry: tuple) -> None:
    doc.undo_log.append(entry)
    if len(doc.undo_log) > UNDO_LIMIT:
        del doc.undo_log[0]


def _active(doc: SketchDocument) -> Asset:
    if not doc.assets:
        raise NoAsset("document has no assets")
    return doc.assets[doc.active_asset]


def _asset_by_id(doc: SketchDocument, asset_id: int) -> Asset:
    for asset in doc.assets:
        if asset.id == asset_id:
            return asset
    raise NoAsset(f"no asset with id {asset_id}")


# -- strokes ---------------------------------------------------------------


def begin_stroke(doc: SketchDocument, pad_pos: tuple[float, float]) -> None:
    if doc.open_stroke is not None:
        raise StrokeAlreadyOpen("a stroke is already open")
    asset = _active(doc)
    doc.open_stroke = _OpenStroke(
        asset.id,
        Stroke([_to_local(doc, asset, pad_pos)], doc.brush.color, doc.brush.thickness),
        Stroke([_to_local_mirrored(doc, asset, pad_pos)], doc.brush.color, doc.brush.thickness)
        if doc.brush.mirror
        else None,
    )


def add_stroke_point(doc: SketchDocument, pad_pos: tuple[float, float]) -> None:
    open_stroke = doc.open_stroke
    if open_stroke is None:
        raise PointWithoutBegin("stroke point with no open stroke")
    asset = _asset_by_id(doc, open_stroke.asset_id)
    open_stroke.stroke.points.append(_to_local(doc, asset, pad_pos))
    if open_stroke.twin is not None:
        open_stroke.twin.points.append(_to_local_mirrored(doc, asset, pad_pos))


def end_stroke(doc: SketchDocument) -> None:
    open_stroke = doc.open_stroke
    if open_stroke is None:
        raise PointWithoutBegin("stroke end with no open stroke")
    asset = _asset_by_id(doc, open_stroke.asset_id)
    asset.strokes.append(open_stroke.stroke)
    count = 1
    if open_stroke.twin is not None:
        asset.strokes.append(open_stroke.twin)
        count = 2
    doc.open_stroke = None
    _push(doc, ("pop_strokes", asset.id, count))


def apply_stroke_command(doc: SketchDocument, cmd: Command) -> None:
    if cmd.name is CommandName.STROKE_BEGIN:
        begin_stroke(doc, cmd.position)
    elif cmd.name is CommandName.STROKE_POINT:
        add_stroke_point(doc, cmd.position)
    elif cmd.name is CommandName.STROKE_END:
        end_stroke(doc)
    else:
        raise ValueError(f"not a stroke command: {cmd.name}")


def _to_local(doc: SketchDocument, asset: Asset, pad_pos) -> tuple[float, float]:
    cx, cy = pad_to_canvas(pad_pos[0], pad_pos[1], doc.canvas)
    return (cx - asset.origin[0], cy - asset.origin[1])


def _to_local_mirrored(doc: SketchDocument, asset: Asset, pad_pos) -> tuple[float, float]:
    cx, cy = pad_to_canvas(pad_pos[0], pad_pos[1], doc.canvas)
    return ((doc.canvas[0] - 1) - cx - asset.origin[0], cy - asset.origin[1])


# -- erase -----------------------------------------------------------------


def erase_at(doc: SketchDocument, canvas_pos: tuple[float, float], radius: float = DEFAULT_ERASE_RADIUS) -> None:
    erase_path(doc, [canvas_pos], radius)


def erase_path(doc: SketchDocument, canvas_positions, radius: float = DEFAULT_ERASE_RADIUS) -> None:
    """Remove every stroke point within radius of any cursor position.

    Strokes split at removed runs; emptied strokes are dropped. One undo
    entry covers the whole path.
    """
    affected: list[tuple[int, list[Stroke]]] = []
    for asset in doc.assets:
        new_strokes: list[Stroke] = []
        changed = False
        for stroke in asset.strokes:
            runs = _split_stroke(stroke, asset.origin, canvas_positions, radius)
            if len(runs) == 1 and runs[0] is stroke:
                new_strokes.append(stroke)
            else:
                changed = True
                new_strokes.extend(runs)
        if changed:
            affected.append((asset.id, asset.strokes))
            asset.strokes = new_strokes
    _push(doc, ("restore_strokes", affected))


def _split_stroke(stroke: Stroke, origin, positions, radius) -> list[Stroke]:
    keep = []
    for x, y in stroke.points:
        cx, cy = x + origin[0], y + origin[1]
        hit = any(math.dist((cx, cy), pos) <= radius for pos in positions)
        keep.append(not hit)
    if all(keep):
        return [stroke]
    runs: list[Stroke] = []
    run: list[tuple[float, float]] = []
    for point, kept in zip(stroke.points, keep):
        if kept:
            run.append(point)
        elif run:
            runs.append(Stroke(run, stroke.color, stroke.thickness))
            run = []
    if run:
        runs.append(Stroke(run, stroke.color, stroke.thickness))
    return runs


# -- assets ----------------------------------------------------------------


def move_asset(doc: SketchDocument, delta: tuple[float, float]) -> None:
    asset = _active(doc)
    old = asset.origin
    asset.origin = (old[0] + delta[0], old[1] + delta[1])
    _push(doc, ("set_origin", asset.id, old))


def create_asset(doc: SketchDocument) -> Asset:
    asset = Asset(id=doc.next_asset_id)
    doc.next_asset_id += 1
    old_active = doc.active_asset
    doc.assets.append(asset)
    doc.active_asset = len(doc.assets) - 1
    _push(doc, ("remove_asset", asset.id, old_active, asset.id))
    return asset


def delete_asset(doc: SketchDocument) -> None:
    if not doc.assets:
        raise NoAsset("nothing to delete")
    idx = doc.active_asset
    asset = doc.assets.pop(idx)
    old_active = idx
    doc.active_asset = max(0, min(idx, len(doc.assets) - 1))
    _push(doc, ("insert_asset", idx, asset, old_active))


def bind_animation(doc: SketchDocument, binding) -> None:
    from . import anim

    anim.validate_binding(binding)
    asset = _active(doc)
    asset.bindings.append(binding)
    _push(doc, ("pop_binding", asset.id))


def adjust_binding_property(doc: SketchDocument, asset_id: int, binding_idx: int, prop: str, increase: bool) -> None:
    from . import anim

    asset = _asset_by_id(doc, asset_id)
    binding = asset.bindings[binding_idx]
    old = copy.deepcopy(binding)
    anim.adjust_property(binding, prop, increase)
    _push(doc, ("set_binding", asset_id, binding_idx, old))


# -- modes and brush ---------------------------------------------------------


def set_mode(doc: SketchDocument, mode: Mode) -> None:
    _push(doc, ("set_mode", doc.mode))
    doc.mode = mode


def toggle_move_draw(doc: SketchDocument) -> None:
    set_mode(doc, Mode.MOVE if doc.mode is Mode.DRAW else Mode.DRAW)


def toggle_mirror(doc: SketchDocument) -> None:
    old = copy.deepcopy(doc.brush)
    doc.brush.mirror = not doc.brush.mirror
    _push(doc, ("set_brush", old))


def adjust_thickness(doc: SketchDocument, delta: float) -> None:
    old = copy.deepcopy(doc.brush)
    doc.brush.thickness = min(max(doc.brush.thickness + delta, THICKNESS_MIN), THICKNESS_MAX)
    _push(doc, ("set_brush", old))


def apply_picker_move(doc: SketchDocument, zone: Zone) -> None:
    old = doc.brush
    doc.brush = move_picker_pin(old, zone)
    _push(doc, ("set_brush", old))


# -- undo --------------------------------------------------------------------


def undo(doc: SketchDocument) -> bool:
    """Pop and apply the latest inverse; returns False on an empty log."""
    if not doc.undo_log:
        log.info("undo requested with empty log")
        return False
    entry = doc.undo_log.pop()
    tag = entry[0]
    if tag == "pop_strokes":
        _, asset_id, count = entry
        asset = _asset_by_id(doc, asset_id)
        del asset.strokes[len(asset.strokes) - count :]
    elif tag == "restore_strokes":
        for asset_id, strokes in entry[1]:
            _asset_by_id(doc, asset_id).strokes = strokes
    elif tag == "set_origin":
        _, asset_id, origin = entry
        _asset_by_id(doc, asset_id).origin = origin
    elif tag == "remove_asset":
        _, asset_id, old_active, old_next_id = entry
        doc.assets = [a for a in doc.assets if a.id != asset_id]
        doc.active_asset = old_active
        doc.next_asset_id = old_next_id
    elif tag == "insert_asset":
        _, idx, asset, old_active = entry
        doc.assets.insert(idx, asset)
        doc.active_asset = old_active
    elif tag == "pop_binding":
        _asset_by_id(doc, entry[1]).bindings.pop()
    elif tag == "set_binding":
        _, asset_id, binding_idx, binding = entry
        _asset_by_id(doc, asset_id).bindings[binding_idx] = binding
    elif tag == "set_mode":
        doc.mode = entry[1]
    elif tag == "set_brush":
        doc.brush = entry[1]
    else:
        raise ValueError(f"unknown undo entry: {tag}")
    return True


# -- serialization -----------------------------------------------------------


def stroke_to_json(stroke: Stroke) -> dict:
    return {
        "points": [[x, y] for x, y in stroke.points],
        "color": list(stroke.color),
        "thickness": stroke.thickness,
    }


def stroke_from_json(d: dict) -> Stroke:
    return Stroke([(p[0], p[1]) for p in d["points"]], tuple(d["color"]), d["thickness"])


def _brush_to_json(brush: Brush) -> dict:
    return {
        "color": list(brush.color),
        "thickness": brush.thickness,
        "mirror": brush.mirror,
        "picker_pin": list(brush.picker_pin),
    }


def _brush_from_json(d: dict) -> Brush:
    return Brush(tuple(d["color"]), d["thickness"], d["mirror"], tuple(d["picker_pin"]))


def _asset_to_json(asset: Asset) -> dict:
    from . import anim

    return {
        "id": asset.id,
        "origin": list(asset.origin),
        "strokes": [stroke_to_json(s) for s in asset.strokes],
        "bindings": [anim.binding_to_json(b) for b in asset.bindings],
    }


def _asset_from_json(d: dict) -> Asset:
    from . import anim

    return Asset(
        d["id"],
        [stroke_from_json(s) for s in d["strokes"]],
        (d["origin"][0], d["origin"][1]),
        [anim.binding_from_json(b) for b in d["bindings"]],
    )


def _undo_entry_to_json(entry: tuple) -> list:
    tag = entry[0]
    if tag == "restore_strokes":
        return [tag, [[aid, [stroke_to_json(s) for s in strokes]] for aid, strokes in entry[1]]]
    if tag == "insert_asset":
        return [tag, entry[1], _asset_to_json(entry[2]), entry[3]]
    if tag == "set_binding":
        from . import anim

        return [tag, entry[1], entry[2], anim.binding_to_json(entry[3])]
    if tag == "set_mode":
        return [tag, entry[1].value]
    if tag == "set_brush":
        return [tag, _brush_to_json(entry[1])]
    if tag == "set_origin":
        return [tag, entry[1], list(entry[2])]
    return list(entry)


def _undo_entry_from_json(data: list) -> tuple:
    tag = data[0]
    if tag == "restore_strokes":
        return (tag, [(aid, [stroke_from_json(s) for s in strokes]) for aid, strokes in data[1]])
    if tag == "insert_asset":
        return (tag, data[1], _asset_from_json(data[2]), data[3])
    if tag == "set_binding":
        from . import anim

        return (tag, data[1], data[2], anim.binding_from_json(data[3]))
    if tag == "set_mode":
        return (tag, Mode(data[1]))
    if tag == "set_brush":
        return (tag, _brush_from_json(data[1]))
    if tag == "set_origin":
        return (tag, data[1], (data[2][0], data[2][1]))
    return tuple(data)


def document_to_json(doc: SketchDocument) -> dict:
    open_stroke = None
    if doc.open_stroke is not None:
        open_stroke = {
            "asset_id": doc.open_stroke.asset_id,
            "stroke": stroke_to_json(doc.open_stroke.stroke),
            "twin": stroke_to_json(doc.open_stroke.twin) if doc.open_stroke.twin else None,
        }
    return {
        "schema": DOC_SCHEMA,
        "version": DOC_VERSION,
        "canvas": list(doc.canvas),
        "mode": doc.mode.value,
        "active_asset": doc.active_asset,
        "next_asset_id": doc.next_asset_id,
        "brush": _brush_to_json(doc.brush),
        "menu": {
            "level": doc.menu.level.value,
            "items": list(doc.menu.items),
            "selected": doc.menu.selected,
            "cycle_elapsed_ms": doc.menu.cycle_elapsed_ms,
        },
        "assets": [_asset_to_json(a) for a in doc.assets],
        "undo_log": [_undo_entry_to_json(e) for e in doc.undo_log],
        "open_stroke": open_stroke,
    }


def document_from_json(data: dict) -> SketchDocument:
    if data.get("schema") != DOC_SCHEMA:
        raise ValueError(f"not a {DOC_SCHEMA} file")
    if data.get("version") != DOC_VERSION:
        raise ValueError(f"unsupported document version {data.get('version')}")
    menu = data["menu"]
    doc = SketchDocument(
        assets=[_asset_from_json(a) for a in data["assets"]],
        active_asset=data["active_asset"],
        brush=_brush_from_json(data["brush"]),
        mode=Mode(data["mode"]),
        menu=MenuState(
            MenuLevel(menu["level"]), tuple(menu["items"]), menu["selected"], menu["cycle_elapsed_ms"]
        ),
        canvas=(data["canvas"][0], data["canvas"][1]),
        undo_log=[_undo_entry_from_json(e) for e in data["undo_log"]],
        next_asset_id=data["next_asset_id"],
    )
    if data.get("open_stroke"):
        raw = data["open_stroke"]
        doc.open_stroke = _OpenStroke(
            raw["asset_id"],
            stroke_from_json(raw["stroke"]),
            stroke_from_json(raw["twin"]) if raw["twin"] else None,
        )
    return doc


def save_document(path: str | Path, doc: SketchDocument) -> None:
    Path(path).write_text(json.dumps(document_to_json(doc), indent=2) + "\n")


def load_document(path: str | Path) -> SketchDocument:
    return document_from_json(json.loads(Path(path).read_text()))
