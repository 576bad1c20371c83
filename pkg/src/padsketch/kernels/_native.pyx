# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled implementations of the per-frame kernels.

Must stay bit-identical to ``padsketch.kernels.pure``; the test suite
cross-checks both backends against the same oracles.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

MIN_BLOB_CELLS = 5

cdef int[8] _NX = [-1, 0, 1, -1, 1, -1, 0, 1]
cdef int[8] _NY = [-1, -1, -1, 0, 0, 1, 1, 1]

DEF MAX_MEDIAN_SAMPLES = 225  # window 15


def apply_threshold(object cells, int tau):
    arr = np.ascontiguousarray(cells, dtype=np.uint8)
    out = arr.copy()
    cdef cnp.uint8_t[:, ::1] dst = out
    cdef Py_ssize_t h = dst.shape[0], w = dst.shape[1], x, y
    for y in range(h):
        for x in range(w):
            if dst[y, x] < tau:
                dst[y, x] = 0
    return out


def median_filter(object cells, int window):
    if window < 1 or window % 2 == 0:
        raise ValueError(f"median window must be odd and >= 1, got {window}")
    arr = np.ascontiguousarray(cells, dtype=np.uint8)
    if window == 1:
        return arr.copy()
    if window * window > MAX_MEDIAN_SAMPLES:
        raise ValueError(f"median window too large: {window}")
    cdef cnp.uint8_t[:, ::1] src = arr
    out = np.empty_like(arr)
    cdef cnp.uint8_t[:, ::1] dst = out
    cdef Py_ssize_t h = src.shape[0], w = src.shape[1], x, y
    cdef int r = window // 2
    cdef int n = window * window
    cdef int buf[MAX_MEDIAN_SAMPLES]
    cdef Py_ssize_t cx, cy
    cdef int dx, dy, i, j, v
    for y in range(h):
        for x in range(w):
            i = 0
            for dy in range(-r, r + 1):
                cy = y + dy
                if cy < 0:
                    cy = 0
                elif cy >= h:
                    cy = h - 1
                for dx in range(-r, r + 1):
                    cx = x + dx
                    if cx < 0:
                        cx = 0
                    elif cx >= w:
                        cx = w - 1
                    v = src[cy, cx]
                    j = i
                    while j > 0 and buf[j - 1] > v:
                        buf[j] = buf[j - 1]
                        j -= 1
                    buf[j] = v
                    i += 1
            dst[y, x] = <cnp.uint8_t> buf[n // 2]
    return out


def _peak_key(arr):
    idx = max(range(len(arr)), key=lambda i: (arr[i, 2], -arr[i, 1], -arr[i, 0]))
    return (-int(arr[idx, 2]), int(arr[idx, 1]), int(arr[idx, 0]))


def label_blobs(object cells, int min_cells=MIN_BLOB_CELLS):
    arr = np.ascontiguousarray(cells, dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] p = arr
    cdef Py_ssize_t h = p.shape[0], w = p.shape[1]
    avail_arr = np.where(arr > 0, arr.astype(np.int32), np.int32(-1))
    cdef cnp.int32_t[:, ::1] avail = avail_arr
    queue_arr = np.empty(h * w, dtype=np.int64)
    cdef cnp.int64_t[::1] queue = queue_arr
    comp_arr = np.empty(h * w, dtype=np.int64)
    cdef cnp.int64_t[::1] comp = comp_arr
    blobs = []
    cdef Py_ssize_t x, y, bx, by, nx, ny, qh, qt, ncomp
    cdef cnp.int64_t code
    cdef int best, pm, d
    while True:
        best = 0
        bx = -1
        by = -1
        for y in range(h):
            for x in range(w):
                if avail[y, x] > best:
                    best = avail[y, x]
                    by = y
                    bx = x
        if best <= 0:
            break
        avail[by, bx] = -1
        queue[0] = by * w + bx
        comp[0] = by * w + bx
        qh = 0
        qt = 1
        ncomp = 1
        while qh < qt:
            code = queue[qh]
            qh += 1
            y = code // w
            x = code - y * w
            pm = p[y, x]
            for d in range(8):
                nx = x + _NX[d]
                ny = y + _NY[d]
                if 0 <= nx < w and 0 <= ny < h and avail[ny, nx] > 0:
                    if 2 * <int> p[ny, nx] > pm:
                        avail[ny, nx] = -1
                        queue[qt] = ny * w + nx
                        qt += 1
                        comp[ncomp] = ny * w + nx
                        ncomp += 1
        if ncomp >= min_cells:
            codes = np.sort(np.asarray(comp_arr[:ncomp]))
            ys = (codes // w).astype(np.int32)
            xs = (codes - ys * w).astype(np.int32)
            out = np.empty((ncomp, 3), dtype=np.int32)
            out[:, 0] = xs
            out[:, 1] = ys
            out[:, 2] = arr[ys, xs]
            blobs.append(out)
    blobs.sort(key=_peak_key)
    return blobs
