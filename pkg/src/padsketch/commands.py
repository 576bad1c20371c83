"""Gesture-to-command mapping and the hold-cycled menu state machine."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from .gestures import GestureEvent, GestureKind, Zone

log = logging.getLogger(__name__)

MAIN_MENU_ITEMS = ("Move", "Draw", "Erase", "Create a New Asset", "Animation", "Delete")
DRAW_SUBMENU_ITEMS = ("Change Thickness", "Change Color", "Mirror Brush")
ANIMATION_PANEL_ITEMS = ("Doodle", "Frame", "Emit", "Rotate", "Move")

DEFAULT_CYCLE_MS = 800.0


class CommandName(str, Enum):
    ACTIVATE_MAIN_MENU = "activate_main_menu"
    ACTIVATE_SECONDARY_MENU = "activate_secondary_menu"
    ACTIVATE_TERTIARY_MENU = "activate_tertiary_menu"
    SWITCH_MENU_ITEM = "switch_menu_item"
    RELEASE_MENU = "release_menu"
    CONFIRM = "confirm"
    UNDO = "undo"
    TOGGLE_MOVE_DRAW = "toggle_move_draw"
    PROPERTY_DEC = "property_dec"
    PROPERTY_INC = "property_inc"
    PROPERTY_DEC_REPEAT = "property_dec_repeat"
    PROPERTY_INC_REPEAT = "property_inc_repeat"
    STROKE_BEGIN = "stroke_begin"
    STROKE_POINT = "stroke_point"
    STROKE_END = "stroke_end"


@dataclass(frozen=True)
class Command:
    name: CommandName
    zone: Zone | None = None
    position: tuple[float, float] | None = None
    t_ms: float = 0.0

    def to_json(self) -> dict:
        out: dict = {"type": "command", "name": self.name.value, "t": self.t_ms}
        if self.zone is not None:
            out["zone"] = self.zone.value
        if self.position is not None:
            out["x"] = self.position[0]
            out["y"] = self.position[1]
        return out


@dataclass(frozen=True)
class InteractionContext:
    """The pieces of session state the gesture mapping is gated on."""

    menu_open: bool = False
    property_editing: bool = False
    draw_mode: bool = True


_DEC_ZONES = (Zone.LEFT, Zone.BOTTOM)


def map_gesture(ev: GestureEvent, ctx: InteractionContext) -> Command | None:
    """Resolve one gesture event to at most one interaction command.

    One-finger zone taps and long presses double as property -1/+1 when a
    property is being edited; the property context wins over menu
    activation for those gestures.
    """
    kind = ev.kind
    pos = (ev.x, ev.y)

    if kind is GestureKind.LONG_PRESS_HOLD:
        if ctx.menu_open:
            return Command(CommandName.SWITCH_MENU_ITEM, t_ms=ev.t_end)
        if ctx.property_editing and ev.fingers == 1:
            return _property_command(ev, repeat=True)
        return None

    if kind is GestureKind.LONG_PRESS_END:
        if ctx.menu_open:
            return Command(CommandName.RELEASE_MENU, t_ms=ev.t_end)
        return None

    if kind is GestureKind.LONG_PRESS_START:
        if ctx.property_editing and ev.fingers == 1:
            return _property_command(ev, repeat=True)
        table = {
            (1, Zone.LEFT): CommandName.ACTIVATE_MAIN_MENU,
            (2, Zone.LEFT): CommandName.ACTIVATE_SECONDARY_MENU,
            (1, Zone.RIGHT): CommandName.ACTIVATE_TERTIARY_MENU,
            (2, Zone.RIGHT): CommandName.TOGGLE_MOVE_DRAW,
        }
        name = table.get((ev.fingers, ev.zone))
        return Command(name, zone=ev.zone, position=pos, t_ms=ev.t_end) if name else None

    if kind is GestureKind.TAP:
        if ev.fingers == 2:
            return Command(CommandName.UNDO, t_ms=ev.t_end)
        if ctx.property_editing and ev.fingers == 1:
            return _property_command(ev, repeat=False)
        return None

    if kind is GestureKind.DOUBLE_TAP:
        if ev.fingers == 1:
            return Command(CommandName.CONFIRM, t_ms=ev.t_end)
        return None

    if ev.fingers == 1 and ctx.draw_mode and not ctx.menu_open:
        stroke = {
            GestureKind.DRAG_START: CommandName.STROKE_BEGIN,
            GestureKind.DRAG_MOVE: CommandName.STROKE_POINT,
            GestureKind.DRAG_END: CommandName.STROKE_END,
        }[kind]
        return Command(stroke, position=pos, t_ms=ev.t_end)
    return None


def _property_command(ev: GestureEvent, repeat: bool) -> Command:
    dec = ev.zone in _DEC_ZONES
    if repeat:
        name = CommandName.PROPERTY_DEC_REPEAT if dec else CommandName.PROPERTY_INC_REPEAT
    else:
        name = CommandName.PROPERTY_DEC if dec else CommandName.PROPERTY_INC
    return Command(name, zone=ev.zone, position=(ev.x, ev.y), t_ms=ev.t_end)


class MenuLevel(str, Enum):
    HIDDEN = "hidden"
    MAIN = "main"
    SECONDARY = "secondary"
    TERTIARY = "tertiary"


@dataclass
class MenuState:
    level: MenuLevel = MenuLevel.HIDDEN
    items: tuple[str, ...] = ()
    selected: int = 0
    cycle_elapsed_ms: float = 0.0

    def to_json(self) -> dict:
        return {
            "type": "menu",
            "level": self.level.value,
            "items": list(self.items),
            "selected": self.selected,
        }


@dataclass(frozen=True)
class MenuAction:
    kind: str  # "invoke" | "ignored_release" | "ignored_activate"
    level: MenuLevel
    label: str | None = None
    index: int | None = None


_ACTIVATIONS = {
    CommandName.ACTIVATE_MAIN_MENU: MenuLevel.MAIN,
    CommandName.ACTIVATE_SECONDARY_MENU: MenuLevel.SECONDARY,
    CommandName.ACTIVATE_TERTIARY_MENU: MenuLevel.TERTIARY,
}


def menu_step(
    state: MenuState,
    cmd: Command | None,
    dt_ms: float = 0.0,
    items: tuple[str, ...] | None = None,
) -> tuple[MenuState, list[MenuAction]]:
    """Advance the menu machine by one command and/or time slice.

    Selection advances one item per SWITCH_MENU_ITEM tick (the gesture
    layer emits one per hold cycle) and wraps; RELEASE_MENU commits the
    selected item and hides the menu. ``cycle_elapsed_ms`` tracks time
    since the last advance for progress display only.
    """
    if dt_ms < 0:
        raise ValueError("dt_ms must be >= 0")
    actions: list[MenuAction] = []
    state = MenuState(state.level, state.items, state.selected, state.cycle_elapsed_ms)
    if state.level is not MenuLevel.HIDDEN:
        state.cycle_elapsed_ms += dt_ms
    if cmd is None:
        return state, actions

    if cmd.name in _ACTIVATIONS:
        level = _ACTIVATIONS[cmd.name]
        menu_items = items
        if menu_items is None:
            menu_items = MAIN_MENU_ITEMS if level is MenuLevel.MAIN else ()
        if not menu_items:
            log.warning("activation of %s menu with no items ignored", level.value)
            actions.append(MenuAction("ignored_activate", level))
            return state, actions
        return MenuState(level, tuple(menu_items), 0, 0.0), actions

    if cmd.name is CommandName.SWITCH_MENU_ITEM:
        if state.level is MenuLevel.HIDDEN:
            log.debug("menu tick with no open menu ignored")
        else:
            state.selected = (state.selected + 1) % len(state.items)
            state.cycle_elapsed_ms = 0.0
        return state, actions

    if cmd.name is CommandName.RELEASE_MENU:
        if state.level is MenuLevel.HIDDEN:
            log.warning("menu release with no open menu ignored")
            actions.append(MenuAction("ignored_release", MenuLevel.HIDDEN))
            return state, actions
        actions.append(MenuAction("invoke", state.level, state.items[state.selected], state.selected))
        return MenuState(), actions

    return state, actions
