// Pointer state to frame messages at the sensor cadence.
//
// While a pointer is down we emit one frame per 60 FPS tick; after release
// we keep emitting empty frames for a short settling tail (the double-tap
// window plus the vote window) so the server can resolve releases and
// pending taps, then go silent. Stream time keeps advancing while idle so
// gesture timing stays correct across pauses.

import { rasterizeFingers } from "./finger.js";
import type { FrameMessage, SparseCell } from "./protocol.js";

export const FRAME_MS = 1000 / 60;
export const SECOND_FINGER_OFFSET = 6; // cells, horizontal
export const TAIL_TICKS = Math.ceil(500 / FRAME_MS) + 3;

export interface PointerState {
  down: boolean;
  x: number; // pad coordinates, 0..39
  y: number;
  twoFinger: boolean;
}

const clamp = (v: number, lo: number, hi: number) => Math.min(Math.max(v, lo), hi);

export class FrameStreamer {
  private seq = 0;
  private tick = 0;
  private tail = 0;

  /** Advance one tick; returns the frame message to send, if any. */
  next(state: PointerState): FrameMessage | null {
    const t = Math.round(this.tick * FRAME_MS);
    this.tick += 1;
    let cells: SparseCell[] | null = null;
    if (state.down) {
      const x = clamp(state.x, 0, 39);
      const y = clamp(state.y, 0, 39);
      const fingers = [{ x, y }];
      if (state.twoFinger) {
        fingers.push({ x: clamp(x + SECOND_FINGER_OFFSET, 0, 39), y });
      }
      cells = rasterizeFingers(fingers);
      this.tail = TAIL_TICKS;
    } else if (this.tail > 0) {
      this.tail -= 1;
      cells = [];
    }
    if (cells === null) {
      return null;
    }
    const msg: FrameMessage = { type: "frame", seq: this.seq % 65536, t, cells };
    this.seq += 1;
    return msg;
  }
}
