"""The five animation types and deterministic scene evaluation.

Evaluation is a pure function of (document, time, seed); only particle
emission carries state, and that state is advanced exclusively by
``step_emit`` at a fixed timestep, so any scene can be recomputed from
scratch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sketch import Asset, SketchDocument, Stroke, stroke_from_json, stroke_to_json

GRAVITY_UNITS_S2 = 200.0
ACCEL_PER_UNIT = 2.0  # trajectory length to acceleration magnitude
DOODLE_AMPLITUDE = 2.0
DOODLE_VARIANTS = 3
DOODLE_RATE_HZ = 8.0
EMIT_TICK_S = 1.0 / 60.0
_SPAWN_EPS = 1e-9  # absorbs fixed-timestep accumulation error


class InvalidProperty(ValueError):
    pass


class DegenerateTrajectory(ValueError):
    pass


@dataclass
class DoodleBinding:
    amplitude: float = DOODLE_AMPLITUDE


@dataclass
class FrameBinding:
    resources: list[list[Stroke]]
    frame_rate: float = 2.0


@dataclass
class EmitBinding:
    emitter: tuple[tuple[float, float], tuple[float, float]]
    trajectory: tuple[float, float]
    gravity: bool = True
    spawn_rate: float = 2.0
    initial_speed: float = 120.0
    accel_per_unit: float = ACCEL_PER_UNIT


@dataclass
class RotateBinding:
    angle_deg: float = 360.0
    period_s: float = 4.0
    center: tuple[float, float] | None = None  # None: asset vertex centroid


@dataclass
class MoveBinding:
    trajectory: list[tuple[float, float]]
    period_s: float = 4.0


AnimationBinding = DoodleBinding | FrameBinding | EmitBinding | RotateBinding | MoveBinding


def validate_binding(binding: AnimationBinding) -> None:
    if isinstance(binding, DoodleBinding):
        if binding.amplitude < 0:
            raise InvalidProperty("doodle amplitude must be >= 0")
    elif isinstance(binding, FrameBinding):
        if not binding.resources:
            raise InvalidProperty("frame animation needs at least one resource")
        if binding.frame_rate <= 0:
            raise InvalidProperty("frame_rate must be > 0")
    elif isinstance(binding, EmitBinding):
        if binding.spawn_rate < 0:
            raise InvalidProperty("spawn_rate must be >= 0")
        if binding.initial_speed < 0:
            raise InvalidProperty("initial_speed must be >= 0")
        if math.hypot(*binding.trajectory) == 0.0:
            raise InvalidProperty("emit trajectory vector must be nonzero")
    elif isinstance(binding, RotateBinding):
        if binding.period_s <= 0:
            raise InvalidProperty("rotation time must be > 0")
    elif isinstance(binding, MoveBinding):
        if binding.period_s <= 0:
            raise InvalidProperty("movement time must be > 0")
        if len(binding.trajectory) < 2:
            raise InvalidProperty("movement trajectory needs >= 2 points")
    else:
        raise InvalidProperty(f"unknown binding type: {type(binding).__name__}")


def bind(asset: Asset, binding: AnimationBinding) -> Asset:
    """Append a validated binding; bindings stack and apply in kind order
    (frame selection, doodle jitter, rotate, move) at evaluation time."""
    validate_binding(binding)
    asset.bindings.append(binding)
    return asset


# -- per-kind evaluation -------------------------------------------------------


def eval_frame(binding: FrameBinding, t: float) -> int:
    k = len(binding.resources)
    return int(t * binding.frame_rate) % k


def doodle_offsets(seed_parts: list[int], variant: int, count: int, amplitude: float) -> np.ndarray:
    rng = np.random.default_rng(seed_parts + [0xD0D0, variant])
    return rng.uniform(-amplitude, amplitude, size=(count, 2))


def eval_doodle(
    point_lists: list[list[tuple[float, float]]],
    t: float,
    seed_parts: list[int],
    amplitude: float = DOODLE_AMPLITUDE,
) -> list[list[tuple[float, float]]]:
    """Cycle through three precomputed jitter variants at 8 Hz."""
    variant = int(t * DOODLE_RATE_HZ) % DOODLE_VARIANTS
    total = sum(len(pts) for pts in point_lists)
    offsets = doodle_offsets(seed_parts, variant, total, amplitude)
    out = []
    i = 0
    for pts in point_lists:
        jittered = [(x + offsets[i + j, 0], y + offsets[i + j, 1]) for j, (x, y) in enumerate(pts)]
        i += len(pts)
        out.append(jittered)
    return out


def eval_rotate(binding: RotateBinding, t: float, default_center: tuple[float, float]) -> tuple[float, tuple[float, float]]:
    """Rotation angle (degrees) and center at time t; one full property
    cycle every period."""
    frac = (t % binding.period_s) / binding.period_s
    center = binding.center if binding.center is not None else default_center
    return binding.angle_deg * frac, center


def rotate_points(points, angle_deg: float, center: tuple[float, float]):
    a = math.radians(angle_deg)
    c, s = math.cos(a), math.sin(a)
    cx, cy = center
    return [(cx + (x - cx) * c - (y - cy) * s, cy + (x - cx) * s + (y - cy) * c) for x, y in points]


def vertex_centroid(point_lists) -> tuple[float, float]:
    xs = [x for pts in point_lists for x, _ in pts]
    ys = [y for pts in point_lists for _, y in pts]
    if not xs:
        return (0.0, 0.0)
    return (sum(xs) / len(xs), sum(ys) / len(ys))


def eval_move(binding: MoveBinding, t: float) -> tuple[float, float]:
    """Looping arc-length position along the trajectory at time t."""
    pts = np.asarray(binding.trajectory, dtype=float)
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    total = float(seg.sum())
    if total == 0.0:
        raise DegenerateTrajectory("movement trajectory has zero length")
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    target = (t % binding.period_s) / binding.period_s * total
    return (float(np.interp(target, cum, pts[:, 0])), float(np.interp(target, cum, pts[:, 1])))


# -- emit --------------------------------------------------------------------


@dataclass
class Particle:
    x: float
    y: float
    vx: float
    vy: float
    birth_t: float


@dataclass
class EmitState:
    time: float = 0.0
    spawned: int = 0
    particles: list[Particle] = field(default_factory=list)


def emit_accel(binding: EmitBinding) -> tuple[float, float]:
    """Trajectory force decomposed into horizontal and vertical parts."""
    tx, ty = binding.trajectory
    length = math.hypot(tx, ty)
    mag = binding.accel_per_unit * length
    return (mag * tx / length, mag * ty / length)


def step_emit(
    binding: EmitBinding,
    state: EmitState,
    dt: float,
    seed_parts: list[int],
    canvas: tuple[int, int] = (1280, 720),
) -> EmitState:
    """Advance the particle stream one timestep.

    Particle k spawns at emitter time (k+1)/spawn_rate at a seeded-uniform
    point of the ejection segment, launched along the trajectory direction;
    the spawn position depends only on (seed, k), never on the step size.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    state.time += dt
    if binding.spawn_rate > 0:
        target = int(state.time * binding.spawn_rate + _SPAWN_EPS)
        tx, ty = binding.trajectory
        length = math.hypot(tx, ty)
        ux, uy = tx / length, ty / length
        (ax0, ay0), (ax1, ay1) = binding.emitter
        while state.spawned < target:
            k = state.spawned
            u = float(np.random.default_rng(seed_parts + [0xE317, k]).random())
            state.particles.append(
                Particle(
                    ax0 + u * (ax1 - ax0),
                    ay0 + u * (ay1 - ay0),
                    binding.initial_speed * ux,
                    binding.initial_speed * uy,
                    (k + 1) / binding.spawn_rate,
                )
            )
            state.spawned += 1
    ax, ay = emit_accel(binding)
    gy = GRAVITY_UNITS_S2 if binding.gravity else 0.0
    alive = []
    for p in state.particles:
        p.vx += ax * dt
        p.vy += (ay + gy) * dt
        p.x += p.vx * dt
        p.y += p.vy * dt
        if 0.0 <= p.x <= canvas[0] and 0.0 <= p.y <= canvas[1]:
            alive.append(p)
    state.particles = alive
    return state


def emit_particles_at(
    binding: EmitBinding,
    t: float,
    seed_parts: list[int],
    canvas: tuple[int, int] = (1280, 720),
) -> list[Particle]:
    """Recompute the particle population at absolute time t from scratch
    by stepping the canonical fixed timestep."""
    state = EmitState()
    steps = int(round(t / EMIT_TICK_S))
    for _ in range(steps):
        step_emit(binding, state, EMIT_TICK_S, seed_parts, canvas)
    return state.particles


# -- property panel ------------------------------------------------------------

PROPERTY_NAMES = {
    DoodleBinding: (),
    FrameBinding: ("Frame rate", "New resource"),
    EmitBinding: ("Spawn rate", "Initial speed", "Gravity"),
    RotateBinding: ("Rotation angle", "Rotation time"),
    MoveBinding: ("Movement time",),
}

# property -> (attribute, step, low, high)
_NUMERIC_STEPS = {
    "frame rate": ("frame_rate", 1.0, 1.0, 30.0),
    "rotation angle": ("angle_deg", 15.0, 15.0, 360.0),
    "rotation time": ("period_s", 0.5, 0.5, 30.0),
    "movement time": ("period_s", 0.5, 0.5, 30.0),
    "spawn rate": ("spawn_rate", 0.5, 0.5, 20.0),
    "initial speed": ("initial_speed", 10.0, 0.0, 1000.0),
}


def property_names(binding: AnimationBinding) -> tuple[str, ...]:
    return PROPERTY_NAMES[type(binding)]


def adjust_property(binding: AnimationBinding, prop: str, increase: bool) -> AnimationBinding:
    """Apply one +/- step to the focused property, clamped to its range."""
    key = prop.lower()
    if key == "gravity":
        if not isinstance(binding, EmitBinding):
            raise InvalidProperty("gravity only applies to emit animations")
        binding.gravity = increase
        return binding
    if key not in _NUMERIC_STEPS:
        raise InvalidProperty(f"property {prop!r} is not adjustable")
    attr, step, low, high = _NUMERIC_STEPS[key]
    if not hasattr(binding, attr):
        raise InvalidProperty(f"{type(binding).__name__} has no property {prop!r}")
    value = getattr(binding, attr) + (step if increase else -step)
    setattr(binding, attr, min(max(value, low), high))
    return binding


# -- scene -----------------------------------------------------------------


@dataclass(frozen=True)
class RenderedStroke:
    points: tuple[tuple[float, float], ...]
    color: tuple[float, float, float]
    thickness: float


@dataclass(frozen=True)
class SceneFrame:
    t: float
    strokes: tuple[RenderedStroke, ...]
    particles: tuple[tuple[float, float], ...]
    frame_indices: dict

    def to_json(self) -> dict:
        return {
            "type": "scene",
            "t": self.t,
            "strokes": [
                {"points": [[x, y] for x, y in s.points], "color": list(s.color), "thickness": s.thickness}
                for s in self.strokes
            ],
            "particles": [[x, y] for x, y in self.particles],
            "frame_indices": {str(k): v for k, v in self.frame_indices.items()},
        }


def scene_frame(
    doc: SketchDocument,
    t: float,
    seed: int,
    emit_states: dict | None = None,
) -> SceneFrame:
    """Evaluate every asset's binding stack at time t.

    When ``emit_states`` is None the emit populations are recomputed from
    scratch (pure evaluation); a live session passes its stepped states,
    keyed by (asset_id, binding_index).
    """
    rendered: list[RenderedStroke] = []
    frame_indices: dict[int, int] = {}
    all_particles: list[tuple[float, float]] = []
    for asset in doc.assets:
        strokes = asset.strokes
        for binding in asset.bindings:
            if isinstance(binding, FrameBinding):
                idx = eval_frame(binding, t)
                frame_indices[asset.id] = idx
                strokes = binding.resources[idx]
        points = [list(s.points) for s in strokes]
        for binding in asset.bindings:
            if isinstance(binding, DoodleBinding):
                points = eval_doodle(points, t, [seed, asset.id], binding.amplitude)
        for binding in asset.bindings:
            if isinstance(binding, RotateBinding):
                angle, center = eval_rotate(binding, t, vertex_centroid(points))
                points = [rotate_points(pts, angle, center) for pts in points]
        origin = asset.origin
        for binding in asset.bindings:
            if isinstance(binding, MoveBinding):
                origin = eval_move(binding, t)
        for stroke, pts in zip(strokes, points):
            rendered.append(
                RenderedStroke(
                    tuple((x + origin[0], y + origin[1]) for x, y in pts),
                    stroke.color,
                    stroke.thickness,
                )
            )
        if doc.open_stroke is not None and doc.open_stroke.asset_id == asset.id:
            # live feedback for the stroke being drawn; no animation applied
            for live in (doc.open_stroke.stroke, doc.open_stroke.twin):
                if live is not None:
                    rendered.append(
                        RenderedStroke(
                            tuple((x + origin[0], y + origin[1]) for x, y in live.points),
                            live.color,
                            live.thickness,
                        )
                    )
        for b_idx, binding in enumerate(asset.bindings):
            if isinstance(binding, EmitBinding):
                if emit_states is not None:
                    state = emit_states.get((asset.id, b_idx))
                    pop = state.particles if state is not None else []
                else:
                    pop = emit_particles_at(binding, t, [seed, asset.id, b_idx], doc.canvas)
                all_particles.extend((p.x, p.y) for p in pop)
    return SceneFrame(t, tuple(rendered), tuple(all_particles), frame_indices)


# -- serialization ---------------------------------------------------------


def binding_to_json(binding: AnimationBinding) -> dict:
    if isinstance(binding, DoodleBinding):
        return {"kind": "doodle", "amplitude": binding.amplitude}
    if isinstance(binding, FrameBinding):
        return {
            "kind": "frame",
            "resources": [[stroke_to_json(s) for s in res] for res in binding.resources],
            "frame_rate": binding.frame_rate,
        }
    if isinstance(binding, EmitBinding):
        return {
            "kind": "emit",
            "emitter": [list(binding.emitter[0]), list(binding.emitter[1])],
            "trajectory": list(binding.trajectory),
            "gravity": binding.gravity,
            "spawn_rate": binding.spawn_rate,
            "initial_speed": binding.initial_speed,
            "accel_per_unit": binding.accel_per_unit,
        }
    if isinstance(binding, RotateBinding):
        return {
            "kind": "rotate",
            "angle_deg": binding.angle_deg,
            "period_s": binding.period_s,
            "center": list(binding.center) if binding.center is not None else None,
        }
    if isinstance(binding, MoveBinding):
        return {
            "kind": "move",
            "trajectory": [[x, y] for x, y in binding.trajectory],
            "period_s": binding.period_s,
        }
    raise InvalidProperty(f"unknown binding type: {type(binding).__name__}")


def binding_from_json(data: dict) -> AnimationBinding:
    kind = data["kind"]
    if kind == "doodle":
        return DoodleBinding(data["amplitude"])
    if kind == "frame":
        return FrameBinding(
            [[stroke_from_json(s) for s in res] for res in data["resources"]],
            data["frame_rate"],
        )
    if kind == "emit":
        return EmitBinding(
            ((data["emitter"][0][0], data["emitter"][0][1]), (data["emitter"][1][0], data["emitter"][1][1])),
            (data["trajectory"][0], data["trajectory"][1]),
            data["gravity"],
            data["spawn_rate"],
            data["initial_speed"],
            data["accel_per_unit"],
        )
    if kind == "rotate":
        center = data["center"]
        return RotateBinding(data["angle_deg"], data["period_s"], tuple(center) if center else None)
    if kind == "move":
        return MoveBinding([(x, y) for x, y in data["trajectory"]], data["period_s"])
    raise InvalidProperty(f"unknown binding kind: {kind!r}")
