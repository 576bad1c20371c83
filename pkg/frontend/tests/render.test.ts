import { describe, expect, it } from "vitest";

import { cssColor, hsvToRgb, menuFromMessage, pressureColor, sceneToOps } from "../src/render.js";

describe("hsvToRgb", () => {
  it("hits the primaries", () => {
    expect(hsvToRgb(0, 1, 1)).toEqual([255, 0, 0]);
    expect(hsvToRgb(1 / 3, 1, 1)).toEqual([0, 255, 0]);
    expect(hsvToRgb(2 / 3, 1, 1)).toEqual([0, 0, 255]);
    expect(hsvToRgb(0, 0, 1)).toEqual([255, 255, 255]);
  });
});

describe("sceneToOps", () => {
  const scene = {
    type: "scene",
    t: 1.0,
    strokes: [{ points: [[0, 0], [10, 5]], color: [0, 1, 1], thickness: 4 }],
    particles: [[100, 200]],
    frame_indices: {},
  };

  it("lowers strokes and particles", () => {
    const ops = sceneToOps(scene)!;
    expect(ops).toHaveLength(2);
    expect(ops[0]).toEqual({
      kind: "stroke",
      points: [[0, 0], [10, 5]],
      color: "rgb(255,0,0)",
      width: 4,
    });
    expect(ops[1]).toEqual({ kind: "particle", x: 100, y: 200 });
  });

  it("rejects malformed messages instead of throwing", () => {
    expect(sceneToOps(null)).toBeNull();
    expect(sceneToOps({ type: "scene" })).toBeNull();
    expect(sceneToOps({ ...scene, strokes: [{ points: "nope", color: [0, 1, 1] }] })).toBeNull();
    expect(sceneToOps({ ...scene, particles: [["x"]] })).toBeNull();
  });
});

describe("menuFromMessage", () => {
  it("parses a menu overlay", () => {
    const menu = menuFromMessage({ type: "menu", level: "main", items: ["Move", "Draw"], selected: 1 });
    expect(menu).toEqual({ level: "main", items: ["Move", "Draw"], selected: 1 });
  });

  it("rejects malformed menus", () => {
    expect(menuFromMessage({ type: "menu", level: 3, items: [], selected: 0 })).toBeNull();
    expect(menuFromMessage({ type: "scene" })).toBeNull();
  });
});

describe("pressureColor", () => {
  it("maps low pressure cold and high pressure hot", () => {
    expect(pressureColor(0)).toBe("rgb(0,0,255)");
    expect(pressureColor(255)).toBe("rgb(255,96,0)");
  });
});

describe("cssColor", () => {
  it("formats hsv triples", () => {
    expect(cssColor([0, 1, 1])).toBe("rgb(255,0,0)");
  });
});
