"""Shared fixtures and independent oracles.

The oracles here deliberately reimplement behavior with plain Python data
structures so kernel bugs cannot hide behind shared code.
"""

from __future__ import annotations

import numpy as np
import pytest

from padsketch.kernels import available_backends


@pytest.fixture(params=[b.name for b in available_backends()])
def backend(request):
    for b in available_backends():
        if b.name == request.param:
            return b
    raise RuntimeError(f"backend {request.param} vanished")


def median_filter_oracle(cells: np.ndarray, window: int) -> np.ndarray:
    h, w = cells.shape
    r = window // 2
    out = np.zeros_like(cells)
    for y in range(h):
        for x in range(w):
            vals = []
            for dy in range(-r, r + 1):
                for dx in range(-r, r + 1):
                    cy = min(max(y + dy, 0), h - 1)
                    cx = min(max(x + dx, 0), w - 1)
                    vals.append(int(cells[cy][cx]))
            vals.sort()
            out[y, x] = vals[len(vals) // 2]
    return out


def blob_oracle(cells: np.ndarray, min_cells: int = 5) -> list[set[tuple[int, int, int]]]:
    """Brute-force region growing with the same admit rule.

    Uses a plain dict/set worklist (depth-first, unlike the breadth-first
    implementation) to demonstrate the grown set is traversal-independent.
    """
    h, w = cells.shape
    pressure = {
        (x, y): int(cells[y, x]) for y in range(h) for x in range(w) if cells[y, x] > 0
    }
    unassigned = set(pressure)
    comps = []
    while unassigned:
        seed = max(unassigned, key=lambda c: (pressure[c], -c[1], -c[0]))
        comp = {seed}
        frontier = [seed]
        while frontier:
            cur = frontier.pop()
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    if dx == 0 and dy == 0:
                        continue
                    nb = (cur[0] + dx, cur[1] + dy)
                    if nb in unassigned and nb not in comp and 2 * pressure[nb] > pressure[cur]:
                        comp.add(nb)
                        frontier.append(nb)
        unassigned -= comp
        if len(comp) >= min_cells:
            comps.append(comp)

    def peak(comp):
        return max(comp, key=lambda c: (pressure[c], -c[1], -c[0]))

    comps.sort(key=lambda comp: (-pressure[peak(comp)], peak(comp)[1], peak(comp)[0]))
    return [{(x, y, pressure[(x, y)]) for x, y in comp} for comp in comps]


def random_test_frame(rng: np.random.Generator) -> np.ndarray:
    """Frames spanning sparse finger-like input to dense adversarial noise."""
    from padsketch.synth import FingerModel, render_finger

    cells = np.zeros((40, 40), dtype=np.uint8)
    mode = int(rng.integers(0, 4))
    if mode in (0, 1):
        for _ in range(int(rng.integers(0, 5))):
            render_finger(
                cells,
                FingerModel(
                    float(rng.uniform(0, 39)),
                    float(rng.uniform(0, 39)),
                    int(rng.integers(40, 256)),
                    float(rng.uniform(0.6, 2.5)),
                ),
            )
        if mode == 1:
            cells = np.maximum(cells, rng.integers(0, 30, (40, 40)).astype(np.uint8))
    elif mode == 2:
        x0, y0 = rng.integers(0, 30, 2)
        wdt, hgt = rng.integers(4, 10, 2)
        cells[y0 : y0 + hgt, x0 : x0 + wdt] = rng.integers(0, 256, (hgt, wdt))
    else:
        mask = rng.random((40, 40)) < 0.05
        cells[mask] = rng.integers(1, 256, int(mask.sum()))
    return cells
