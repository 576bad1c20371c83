// Client-side Gaussian finger rasterization, matching the server's
// synthetic finger defaults so the virtual pad feels like the real film.

import type { SparseCell } from "./protocol.js";

export const GRID = 40;
export const DEFAULT_PEAK = 160;
export const DEFAULT_SIGMA = 0.9;

export interface Finger {
  x: number;
  y: number;
  peak?: number;
  sigma?: number;
}

/** Rasterize fingers into a sparse, saturating-additive cell list.
 *  Deterministic: cells come out sorted by (y, x). */
export function rasterizeFingers(fingers: Finger[]): SparseCell[] {
  const acc = new Map<number, number>();
  for (const f of fingers) {
    const peak = f.peak ?? DEFAULT_PEAK;
    const sigma = f.sigma ?? DEFAULT_SIGMA;
    if (peak <= 0) continue;
    const r = Math.ceil(4 * sigma);
    const x0 = Math.max(0, Math.floor(f.x) - r);
    const x1 = Math.min(GRID - 1, Math.ceil(f.x) + r);
    const y0 = Math.max(0, Math.floor(f.y) - r);
    const y1 = Math.min(GRID - 1, Math.ceil(f.y) + r);
    for (let y = y0; y <= y1; y++) {
      for (let x = x0; x <= x1; x++) {
        const d2 = (x - f.x) ** 2 + (y - f.y) ** 2;
        const bump = Math.round(peak * Math.exp(-d2 / (2 * sigma * sigma)));
        if (bump > 0) {
          const key = y * GRID + x;
          acc.set(key, Math.min(255, (acc.get(key) ?? 0) + bump));
        }
      }
    }
  }
  const cells: SparseCell[] = [];
  for (const [key, p] of acc) {
    cells.push([key % GRID, Math.floor(key / GRID), p]);
  }
  cells.sort((a, b) => a[1] - b[1] || a[0] - b[0]);
  return cells;
}
