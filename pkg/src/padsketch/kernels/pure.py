"""Numpy fallback implementations of the per-frame kernels."""

from __future__ import annotations

from collections import deque

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

MIN_BLOB_CELLS = 5

_NEIGHBORS = ((-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1))


def apply_threshold(cells: np.ndarray, tau: int) -> np.ndarray:
    out = cells.copy()
    out[cells < tau] = 0
    return out


def median_filter(cells: np.ndarray, window: int) -> np.ndarray:
    if window < 1 or window % 2 == 0:
        raise ValueError(f"median window must be odd and >= 1, got {window}")
    if window == 1:
        return cells.copy()
    r = window // 2
    padded = np.pad(cells, r, mode="edge")
    view = sliding_window_view(padded, (window, window))
    # odd sample count, so the median is an exact grid value
    return np.median(view, axis=(2, 3)).astype(cells.dtype)


def label_blobs(cells: np.ndarray, min_cells: int = MIN_BLOB_CELLS) -> list[np.ndarray]:
    """Seed-grown connected components of a pressure grid.

    Repeatedly seeds at the highest-pressure unclaimed cell (ties: smallest
    (y, x)) and grows over 8-neighbors whose pressure exceeds half the
    pressure of the cell they are reached from. Components smaller than
    ``min_cells`` are consumed but not reported.

    Returns one (k, 3) int32 array per kept blob with columns (x, y, p),
    cells sorted by (y, x); blobs sorted by peak pressure descending, ties
    by (y, x) of the peak.
    """
    h, w = cells.shape
    avail = np.where(cells > 0, cells.astype(np.int32), -1)
    blobs = []
    while True:
        flat = int(np.argmax(avail))
        if avail.flat[flat] <= 0:
            break
        sy, sx = divmod(flat, w)
        comp = [(sx, sy)]
        avail[sy, sx] = -1
        queue = deque(comp)
        while queue:
            x, y = queue.popleft()
            pm = int(cells[y, x])
            for dx, dy in _NEIGHBORS:
                nx, ny = x + dx, y + dy
                if 0 <= nx < w and 0 <= ny < h and avail[ny, nx] > 0:
                    if 2 * int(cells[ny, nx]) > pm:
                        avail[ny, nx] = -1
                        comp.append((nx, ny))
                        queue.append((nx, ny))
        if len(comp) >= min_cells:
            comp.sort(key=lambda c: (c[1], c[0]))
            arr = np.array(
                [(x, y, int(cells[y, x])) for x, y in comp], dtype=np.int32
            )
            blobs.append(arr)

    def peak_key(arr: np.ndarray) -> tuple[int, int, int]:
        idx = max(range(len(arr)), key=lambda i: (arr[i, 2], -arr[i, 1], -arr[i, 0]))
        return (-int(arr[idx, 2]), int(arr[idx, 1]), int(arr[idx, 0]))

    blobs.sort(key=peak_key)
    return blobs
