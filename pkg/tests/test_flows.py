"""Whole creative flows driven through the sensor pipeline: menus,
submenus, property editing, and multi-step animation definitions."""

import numpy as np
import pytest

from padsketch import anim, sketch
from padsketch.session import Session, SessionConfig
from padsketch.sketch import Mode
from padsketch.synth import (
    FingerModel,
    GestureScript,
    NoiseModel,
    ScriptEntry,
    script_to_stream,
)

LEFT = (5.0, 20.0)
RIGHT = (34.0, 20.0)
CENTER = (20.0, 20.0)

# menu item k commits when the press is released after LongPressStart
# plus k hold cycles: 1000 ms to start, 800 ms per tick, plus slack
def hold_ms_for_item(k):
    return 1000.0 + k * 800.0 + 350.0


class FlowBuilder:
    def __init__(self):
        self.entries = [ScriptEntry(0.0)]
        self.t = 100.0

    def _fingers(self, pos, two):
        if two:
            return (FingerModel(pos[0], pos[1] - 3), FingerModel(pos[0], pos[1] + 3))
        return (FingerModel(pos[0], pos[1]),)

    def press(self, pos, dur_ms, two=False):
        self.entries.append(ScriptEntry(self.t, self._fingers(pos, two)))
        self.entries.append(ScriptEntry(self.t + dur_ms))
        self.t += dur_ms + 700.0  # idle gap clears pending tap windows
        return self

    def menu_select(self, pos, item_index, two=False):
        return self.press(pos, hold_ms_for_item(item_index), two)

    def tap(self, pos, two=False):
        return self.press(pos, 100.0, two)

    def double_tap(self, pos):
        self.entries.append(ScriptEntry(self.t, self._fingers(pos, False)))
        self.entries.append(ScriptEntry(self.t + 100.0))
        self.entries.append(ScriptEntry(self.t + 400.0, self._fingers(pos, False)))
        self.entries.append(ScriptEntry(self.t + 500.0))
        self.t += 1200.0
        return self

    def drag(self, start, end, dur_ms=500.0):
        self.entries.append(ScriptEntry(self.t, self._fingers(start, False), lerp=True))
        self.entries.append(ScriptEntry(self.t + dur_ms, self._fingers(end, False)))
        self.entries.append(ScriptEntry(self.t + dur_ms + 30.0))
        self.t += dur_ms + 730.0
        return self

    def run(self, session=None):
        session = session or Session(SessionConfig())
        script = GestureScript(self.entries, duration_ms=self.t + 200.0)
        for frame in script_to_stream(script, NoiseModel()):
            session.process_frame(frame)
        session.finalize()
        return session


class TestMenuCreationFlows:
    def test_bind_doodle_through_menus(self):
        # main menu -> Animation (item 4), then animation panel -> Doodle
        session = (
            FlowBuilder()
            .menu_select(LEFT, 4)          # 1f left long press: main menu
            .menu_select(LEFT, 0, two=True)  # 2f left long press: panel, item 0
            .run()
        )
        assert session.current_tool == "Animation"
        bindings = session.doc.assets[0].bindings
        assert len(bindings) == 1
        assert isinstance(bindings[0], anim.DoodleBinding)

    def test_create_asset_then_delete_through_menus(self):
        session = FlowBuilder().menu_select(LEFT, 3).run()  # Create a New Asset
        assert len(session.doc.assets) == 2
        assert session.doc.active_asset == 1
        session2 = FlowBuilder().menu_select(LEFT, 5).run()  # Delete
        assert session2.doc.assets == []

    def test_rotate_property_editing(self):
        session = Session(SessionConfig())
        sketch.bind_animation(session.doc, anim.RotateBinding(angle_deg=90.0))
        session.current_tool = "Animation"
        (
            FlowBuilder()
            .menu_select(RIGHT, 0)  # tertiary menu: "Rotation angle"
            .tap(RIGHT)             # +15
            .tap(RIGHT)             # +15
            .tap(LEFT)              # -15
            .double_tap(CENTER)     # confirm: leave property editing
            .tap(RIGHT)             # no longer adjusts
            .run(session)
        )
        binding = session.doc.assets[0].bindings[0]
        assert binding.angle_deg == 105.0
        assert session.property_focus is None

    def test_color_picker_flow(self):
        # Draw submenu item 1 = Change Color, then zone taps move the pin
        session = (
            FlowBuilder()
            .menu_select(LEFT, 1, two=True)  # secondary menu of Draw
            .tap(RIGHT)                      # hue +1
            .tap(RIGHT)                      # hue +1
            .tap((20.0, 34.0))               # bottom: saturation -1
            .run()
        )
        assert session.property_focus == ("picker",)
        assert session.doc.brush.picker_pin == (2, 14)
        assert session.doc.brush.color == (2 / 16, 14 / 15, 1.0)

    def test_mirror_brush_toggle_via_menu(self):
        session = FlowBuilder().menu_select(LEFT, 2, two=True).run()
        assert session.doc.brush.mirror is True

    def test_thickness_repeat_steps(self):
        session = (
            FlowBuilder()
            .menu_select(LEFT, 0, two=True)       # Change Thickness
            .press(RIGHT, hold_ms_for_item(2))    # repeat inc: start + 2 ticks
            .run()
        )
        assert session.property_focus == ("thickness",)
        assert session.doc.brush.thickness == 7.0  # 4 + 3 steps

    def test_emit_definition_multi_step(self):
        session = Session(SessionConfig())
        session.current_tool = "Animation"
        (
            FlowBuilder()
            .menu_select(LEFT, 2, two=True)   # animation panel item 2: Emit
            .drag((10.0, 30.0), (30.0, 30.0))  # ejection segment
            .drag((20.0, 10.0), (25.0, 20.0))  # trajectory line
            .double_tap(CENTER)                # confirm finishes the binding
            .run(session)
        )
        bindings = session.doc.assets[0].bindings
        assert len(bindings) == 1
        binding = bindings[0]
        assert isinstance(binding, anim.EmitBinding)
        (x0, y0), (x1, y1) = binding.emitter
        assert y0 == pytest.approx(y1, abs=30.0)
        assert x1 - x0 > 400.0  # spans most of the drawn segment
        assert binding.trajectory[0] > 0 and binding.trajectory[1] > 0  # down-right
        # definition strokes were consumed, not drawn
        assert session.doc.assets[0].strokes == []
        assert session.pending_geometry is None

    def test_move_binding_definition(self):
        session = Session(SessionConfig())
        session.current_tool = "Animation"
        (
            FlowBuilder()
            .menu_select(LEFT, 4, two=True)    # animation panel item 4: Move
            .drag((5.0, 5.0), (35.0, 30.0))
            .double_tap(CENTER)
            .run(session)
        )
        bindings = session.doc.assets[0].bindings
        assert len(bindings) == 1
        assert isinstance(bindings[0], anim.MoveBinding)
        assert len(bindings[0].trajectory) > 10

    def test_frame_binding_snapshot_and_new_resource(self):
        session = Session(SessionConfig())
        sketch.begin_stroke(session.doc, (10, 10))
        sketch.add_stroke_point(session.doc, (20, 10))
        sketch.end_stroke(session.doc)
        session.current_tool = "Animation"
        (
            FlowBuilder()
            .menu_select(LEFT, 1, two=True)  # Frame
            .drag((10.0, 20.0), (20.0, 20.0))  # draw a second stroke... but tool context
            .run(session)
        )
        binding = session.doc.assets[0].bindings[0]
        assert isinstance(binding, anim.FrameBinding)
        assert len(binding.resources) == 1
        assert len(binding.resources[0]) == 1  # snapshot of the single stroke
        # select "New resource" from the tertiary panel, then confirm
        (
            FlowBuilder()
            .menu_select(RIGHT, 1)  # properties: Frame rate, New resource
            .double_tap(CENTER)
            .run(session)
        )
        assert len(binding.resources) == 2

    def test_undo_reverts_menu_invoked_mutation(self):
        session = (
            FlowBuilder()
            .menu_select(LEFT, 2)   # Erase mode (a set_mode mutation)
            .tap(CENTER, two=True)  # undo
            .run()
        )
        assert session.doc.mode is Mode.DRAW
