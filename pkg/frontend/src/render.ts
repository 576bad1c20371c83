// Scene and menu messages to drawing primitives. Pure functions so the
// rendering decisions are testable without a DOM canvas.

import type { MenuMessage, SceneMessage } from "./protocol.js";

export type DrawOp =
  | { kind: "stroke"; points: [number, number][]; color: string; width: number }
  | { kind: "particle"; x: number; y: number };

export function hsvToRgb(h: number, s: number, v: number): [number, number, number] {
  const i = Math.floor(h * 6);
  const f = h * 6 - i;
  const p = v * (1 - s);
  const q = v * (1 - f * s);
  const t = v * (1 - (1 - f) * s);
  const [r, g, b] = [
    [v, t, p],
    [q, v, p],
    [p, v, t],
    [p, q, v],
    [t, p, v],
    [v, p, q],
  ][((i % 6) + 6) % 6];
  return [Math.round(r * 255), Math.round(g * 255), Math.round(b * 255)];
}

export function cssColor(hsv: [number, number, number]): string {
  const [r, g, b] = hsvToRgb(hsv[0], hsv[1], hsv[2]);
  return `rgb(${r},${g},${b})`;
}

function isPointList(v: unknown): v is [number, number][] {
  return (
    Array.isArray(v) &&
    v.every((p) => Array.isArray(p) && p.length >= 2 && p.every((n) => typeof n === "number"))
  );
}

/** Validate a scene message and lower it to draw ops; null if malformed. */
export function sceneToOps(msg: unknown): DrawOp[] | null {
  const scene = msg as SceneMessage;
  if (!scene || scene.type !== "scene" || !Array.isArray(scene.strokes) || !Array.isArray(scene.particles)) {
    return null;
  }
  const ops: DrawOp[] = [];
  for (const stroke of scene.strokes) {
    if (!stroke || !isPointList(stroke.points) || !Array.isArray(stroke.color)) {
      return null;
    }
    ops.push({
      kind: "stroke",
      points: stroke.points,
      color: cssColor(stroke.color as [number, number, number]),
      width: typeof stroke.thickness === "number" ? stroke.thickness : 2,
    });
  }
  for (const particle of scene.particles) {
    if (!Array.isArray(particle) || particle.length < 2) {
      return null;
    }
    ops.push({ kind: "particle", x: particle[0], y: particle[1] });
  }
  return ops;
}

export interface MenuOverlay {
  level: string;
  items: string[];
  selected: number;
}

export function menuFromMessage(msg: unknown): MenuOverlay | null {
  const menu = msg as MenuMessage;
  if (
    !menu ||
    menu.type !== "menu" ||
    typeof menu.level !== "string" ||
    !Array.isArray(menu.items) ||
    typeof menu.selected !== "number"
  ) {
    return null;
  }
  return { level: menu.level, items: menu.items, selected: menu.selected };
}

/** Heat shading for the pad view: cold blue through hot red. */
export function pressureColor(p: number): string {
  const u = Math.min(Math.max(p / 255, 0), 1);
  const r = Math.round(255 * Math.min(1, u * 2));
  const g = Math.round(96 * u);
  const b = Math.round(255 * Math.max(0, 1 - u * 2));
  return `rgb(${r},${g},${b})`;
}
