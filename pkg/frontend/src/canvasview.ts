// The 1280x720 scene canvas: strokes, particles, menu overlay, current
// tool. Holds no document state; it paints whatever the server last sent.

import type { DrawOp } from "./render.js";
import type { MenuOverlay } from "./render.js";

export class CanvasView {
  private ctx: CanvasRenderingContext2D;
  private ops: DrawOp[] = [];
  private menu: MenuOverlay | null = null;
  private tool = "Draw";
  private connected = false;

  constructor(private canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) {
      throw new Error("2d canvas context unavailable");
    }
    this.ctx = ctx;
    this.repaint();
  }

  setScene(ops: DrawOp[]): void {
    this.ops = ops;
    this.repaint();
  }

  setMenu(menu: MenuOverlay): void {
    this.menu = menu.level === "hidden" ? null : menu;
    this.repaint();
  }

  setTool(tool: string): void {
    this.tool = tool;
    this.repaint();
  }

  setConnected(connected: boolean): void {
    this.connected = connected;
    this.repaint();
  }

  private repaint(): void {
    const { width, height } = this.canvas;
    this.ctx.fillStyle = "#ffffff";
    this.ctx.fillRect(0, 0, width, height);
    for (const op of this.ops) {
      if (op.kind === "stroke") {
        if (op.points.length === 1) {
          const [x, y] = op.points[0];
          this.ctx.fillStyle = op.color;
          this.ctx.beginPath();
          this.ctx.arc(x, y, op.width / 2, 0, Math.PI * 2);
          this.ctx.fill();
          continue;
        }
        this.ctx.strokeStyle = op.color;
        this.ctx.lineWidth = op.width;
        this.ctx.lineJoin = "round";
        this.ctx.lineCap = "round";
        this.ctx.beginPath();
        this.ctx.moveTo(op.points[0][0], op.points[0][1]);
        for (const [x, y] of op.points.slice(1)) {
          this.ctx.lineTo(x, y);
        }
        this.ctx.stroke();
      } else {
        this.ctx.fillStyle = "#3478f6";
        this.ctx.beginPath();
        this.ctx.arc(op.x, op.y, 3, 0, Math.PI * 2);
        this.ctx.fill();
      }
    }
    this.paintChrome();
  }

  private paintChrome(): void {
    // current tool badge: always visible
    this.ctx.font = "20px sans-serif";
    this.ctx.fillStyle = "#222";
    this.ctx.fillText(`Tool: ${this.tool}`, 16, 28);
    if (!this.connected) {
      this.ctx.fillStyle = "rgba(180, 30, 30, 0.85)";
      this.ctx.fillRect(0, this.canvas.height - 36, this.canvas.width, 36);
      this.ctx.fillStyle = "#fff";
      this.ctx.fillText("disconnected - input suppressed", 16, this.canvas.height - 11);
    }
    if (this.menu) {
      const itemH = 34;
      const w = 320;
      const h = this.menu.items.length * itemH + 44;
      const x0 = (this.canvas.width - w) / 2;
      const y0 = 60;
      this.ctx.fillStyle = "rgba(24, 28, 38, 0.92)";
      this.ctx.fillRect(x0, y0, w, h);
      this.ctx.fillStyle = "#9ab";
      this.ctx.fillText(`${this.menu.level} menu`, x0 + 14, y0 + 28);
      this.menu.items.forEach((item, i) => {
        const y = y0 + 44 + i * itemH;
        if (i === this.menu!.selected) {
          this.ctx.fillStyle = "#3478f6";
          this.ctx.fillRect(x0 + 6, y - 24, w - 12, itemH - 4);
        }
        this.ctx.fillStyle = "#fff";
        this.ctx.fillText(item, x0 + 14, y);
      });
    }
  }
}
