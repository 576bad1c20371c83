// End-to-end: scripted pointer paths through the real server.

import { ChildProcess, spawn } from "node:child_process";
import readline from "node:readline";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import { sceneToOps } from "../src/render.js";
import { FrameStreamer, PointerState, TAIL_TICKS } from "../src/streamer.js";

let proc: ChildProcess;
let port: number;

beforeAll(async () => {
  proc = spawn("python3", ["-m", "padsketch.cli", "serve", "--port", "0"], {
    stdio: ["ignore", "pipe", "inherit"],
  });
  port = await new Promise<number>((resolve, reject) => {
    const rl = readline.createInterface({ input: proc.stdout! });
    rl.once("line", (line) => resolve(JSON.parse(line).port));
    proc.once("exit", () => reject(new Error("server exited before ready")));
  });
}, 30000);

afterAll(() => {
  proc.kill();
});

interface Received {
  msg: Record<string, any>;
  at: number; // ms, performance.now at receipt
}

class Driver {
  private ws!: WebSocket;
  private inbox: Received[] = [];
  private waiters: (() => void)[] = [];
  all: Received[] = [];

  async connect(): Promise<void> {
    this.ws = new WebSocket(`ws://127.0.0.1:${port}`);
    await new Promise<void>((resolve, reject) => {
      this.ws.once("open", () => resolve());
      this.ws.once("error", reject);
    });
    this.ws.on("message", (data) => {
      const rec = { msg: JSON.parse(data.toString()), at: performance.now() };
      this.inbox.push(rec);
      this.all.push(rec);
      this.waiters.splice(0).forEach((w) => w());
    });
  }

  close(): void {
    this.ws.close();
  }

  private async nextMessage(): Promise<Received> {
    while (this.inbox.length === 0) {
      await new Promise<void>((resolve) => this.waiters.push(resolve));
    }
    return this.inbox.shift()!;
  }

  /** Send one frame; collect replies through the trailing scene message. */
  async frame(msg: Record<string, unknown>): Promise<Received[]> {
    this.ws.send(JSON.stringify(msg));
    const batch: Received[] = [];
    for (;;) {
      const rec = await this.nextMessage();
      batch.push(rec);
      if (rec.msg.type === "scene" || rec.msg.type === "error") {
        return batch;
      }
    }
  }

  async request(msg: Record<string, unknown>, type: string): Promise<Record<string, any>> {
    this.ws.send(JSON.stringify(msg));
    for (;;) {
      const rec = await this.nextMessage();
      if (rec.msg.type === type || rec.msg.type === "error") {
        return rec.msg;
      }
    }
  }

  /** Run a pointer script: one PointerState per 60 FPS tick. */
  async run(states: PointerState[]): Promise<void> {
    const streamer = new FrameStreamer();
    for (const state of states) {
      const frame = streamer.next(state);
      if (frame !== null) {
        await this.frame(frame);
      }
    }
  }
}

const down = (x: number, y: number, twoFinger = false): PointerState => ({ down: true, x, y, twoFinger });
const up = (): PointerState => ({ down: false, x: 0, y: 0, twoFinger: false });

function pressScript(x: number, y: number, ticks: number): PointerState[] {
  return [
    ...Array.from({ length: ticks }, () => down(x, y)),
    ...Array.from({ length: TAIL_TICKS + 1 }, () => up()),
  ];
}

describe("server round trips", () => {
  it("a 1.2 s left press opens the main menu within 200 ms of the long press", { timeout: 30000 }, async () => {
    const driver = new Driver();
    await driver.connect();
    await driver.run(pressScript(5, 20, 75));
    const pressAt = driver.all.find(
      (r) => r.msg.type === "gesture" && r.msg.kind === "long_press_start",
    );
    expect(pressAt).toBeDefined();
    const menuAt = driver.all.find((r) => r.msg.type === "menu" && r.msg.level === "main");
    expect(menuAt).toBeDefined();
    expect(menuAt!.at - pressAt!.at).toBeLessThanOrEqual(200);
    expect(menuAt!.msg.selected).toBe(0);
    expect(menuAt!.msg.items[0]).toBe("Move");
    driver.close();
  });

  it("a quick tap stays a tap: no menu activation", { timeout: 30000 }, async () => {
    const driver = new Driver();
    await driver.connect();
    await driver.run(pressScript(5, 20, 6));
    const kinds = driver.all.filter((r) => r.msg.type === "gesture").map((r) => r.msg.kind);
    expect(kinds).toContain("tap");
    const commands = driver.all.filter((r) => r.msg.type === "command").map((r) => r.msg.name);
    expect(commands).not.toContain("activate_main_menu");
    driver.close();
  });

  it("a drag in draw mode draws the same polyline the document holds", { timeout: 30000 }, async () => {
    const driver = new Driver();
    await driver.connect();
    const moveTicks = 36;
    const script: PointerState[] = [];
    for (let i = 0; i <= moveTicks; i++) {
      script.push(down(8 + (22 * i) / moveTicks, 8));
    }
    script.push(down(30, 8), down(30, 8));
    for (let i = 0; i < TAIL_TICKS + 1; i++) {
      script.push(up());
    }
    await driver.run(script);

    const doc = (await driver.request({ type: "get_document" }, "document")).document;
    expect(doc.mode).toBe("draw");
    const strokes = doc.assets[0].strokes;
    expect(strokes.length).toBe(1);
    const docPoints = strokes[0].points;
    expect(docPoints.length).toBeGreaterThan(10);

    const scenes = driver.all.filter((r) => r.msg.type === "scene");
    const lastScene = scenes[scenes.length - 1].msg;
    const ops = sceneToOps(lastScene)!;
    const sceneStrokes = ops.filter((op) => op.kind === "stroke");
    expect(sceneStrokes.length).toBe(1);
    expect((sceneStrokes[0] as { points: number[][] }).points).toEqual(docPoints);
    driver.close();
  });
});
