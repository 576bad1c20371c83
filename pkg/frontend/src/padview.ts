// The virtual 40x40 pressure pad: pointer handling, heat shading, and the
// 60 FPS frame stream. Hold Shift for a second synthetic finger.

import { GRID } from "./finger.js";
import type { FrameMessage, SparseCell } from "./protocol.js";
import { pressureColor } from "./render.js";
import { FRAME_MS, FrameStreamer, PointerState } from "./streamer.js";

export class PadView {
  private ctx: CanvasRenderingContext2D;
  private state: PointerState = { down: false, x: 0, y: 0, twoFinger: false };
  private streamer = new FrameStreamer();
  private timer: number | undefined;
  private cellPx: number;

  constructor(
    private canvas: HTMLCanvasElement,
    private sendFrame: (msg: FrameMessage) => void,
  ) {
    const ctx = canvas.getContext("2d");
    if (!ctx) {
      throw new Error("2d canvas context unavailable");
    }
    this.ctx = ctx;
    this.cellPx = canvas.width / GRID;
    canvas.addEventListener("pointerdown", (ev) => {
      canvas.setPointerCapture(ev.pointerId);
      this.updatePointer(ev, true);
    });
    canvas.addEventListener("pointermove", (ev) => this.updatePointer(ev, this.state.down));
    canvas.addEventListener("pointerup", (ev) => this.updatePointer(ev, false));
    canvas.addEventListener("pointercancel", (ev) => this.updatePointer(ev, false));
    this.paint([]);
  }

  start(): void {
    this.timer = window.setInterval(() => this.tick(), FRAME_MS);
  }

  stop(): void {
    if (this.timer !== undefined) {
      window.clearInterval(this.timer);
    }
  }

  private updatePointer(ev: PointerEvent, down: boolean): void {
    const rect = this.canvas.getBoundingClientRect();
    // pixel center of cell k maps to pad coordinate k
    const x = ((ev.clientX - rect.left) / rect.width) * GRID - 0.5;
    const y = ((ev.clientY - rect.top) / rect.height) * GRID - 0.5;
    this.state = { down, x, y, twoFinger: ev.shiftKey };
  }

  private tick(): void {
    const msg = this.streamer.next(this.state);
    if (msg !== null) {
      this.sendFrame(msg);
      this.paint(msg.cells);
    }
  }

  private paint(cells: SparseCell[]): void {
    this.ctx.fillStyle = "#10141c";
    this.ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
    this.ctx.strokeStyle = "#1f2630";
    this.ctx.lineWidth = 1;
    for (let i = 0; i <= GRID; i++) {
      const v = i * this.cellPx;
      this.ctx.beginPath();
      this.ctx.moveTo(v, 0);
      this.ctx.lineTo(v, this.canvas.height);
      this.ctx.moveTo(0, v);
      this.ctx.lineTo(this.canvas.width, v);
      this.ctx.stroke();
    }
    for (const [x, y, p] of cells) {
      this.ctx.fillStyle = pressureColor(p);
      this.ctx.fillRect(x * this.cellPx, y * this.cellPx, this.cellPx, this.cellPx);
    }
  }
}
