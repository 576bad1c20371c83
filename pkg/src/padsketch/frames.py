"""Pressure frame model, replay codecs, and preprocessing.

A frame is a 40x40 grid of pressure bytes. Two on-disk formats exist:

* ``.wsk``  -- binary, fixed 1608-byte records: magic ``A5 5A``, u16 LE
  sequence number, u32 LE timestamp in ms, 1600 cell bytes row-major.
* ``.wskx`` -- text, one frame per line: ``seq,timestamp_ms,<3200 hex>``
  with two uppercase hex chars per cell, row-major.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from . import kernels

GRID = 40
CELL_COUNT = GRID * GRID
MAGIC = b"\xa5\x5a"
RECORD_SIZE = 2 + 2 + 4 + CELL_COUNT
_HEADER = struct.Struct("<2sHI")

DEFAULT_THRESHOLD = 16
DEFAULT_MEDIAN_WINDOW = 3


class FrameCodecError(Exception):
    """Base for replay-format decode failures."""


class BadMagic(FrameCodecError):
    pass


class Truncated(FrameCodecError):
    pass


class EvenWindow(ValueError):
    pass


@dataclass
class PressureFrame:
    seq: int
    timestamp_ms: int
    cells: np.ndarray = field(default_factory=lambda: np.zeros((GRID, GRID), np.uint8))

    def __post_init__(self) -> None:
        arr = np.asarray(self.cells)
        if arr.shape != (GRID, GRID):
            raise ValueError(f"cells must be {GRID}x{GRID}, got {arr.shape}")
        if arr.dtype != np.uint8:
            if arr.min(initial=0) < 0 or arr.max(initial=0) > 255:
                raise ValueError("cell values must be in [0, 255]")
            arr = arr.astype(np.uint8)
        self.cells = np.ascontiguousarray(arr)
        if not 0 <= self.seq <= 0xFFFF:
            raise ValueError(f"seq must fit u16, got {self.seq}")
        if not 0 <= self.timestamp_ms <= 0xFFFFFFFF:
            raise ValueError(f"timestamp_ms must fit u32, got {self.timestamp_ms}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PressureFrame):
            return NotImplemented
        return (
            self.seq == other.seq
            and self.timestamp_ms == other.timestamp_ms
            and np.array_equal(self.cells, other.cells)
        )


@dataclass(frozen=True)
class PreprocessConfig:
    threshold_tau: int = DEFAULT_THRESHOLD
    median_window: int = DEFAULT_MEDIAN_WINDOW

    def __post_init__(self) -> None:
        if self.threshold_tau < 0:
            raise ValueError("threshold_tau must be >= 0")
        if self.median_window < 1 or self.median_window % 2 == 0:
            raise EvenWindow(f"median_window must be odd and >= 1, got {self.median_window}")


def encode_frame(frame: PressureFrame) -> bytes:
    header = _HEADER.pack(MAGIC, frame.seq, frame.timestamp_ms)
    return header + frame.cells.tobytes()


def parse_frame_record(data: bytes) -> PressureFrame:
    if len(data) < RECORD_SIZE:
        raise Truncated(f"need {RECORD_SIZE} bytes, got {len(data)}")
    magic, seq, t_ms = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadMagic(f"bad record magic {magic.hex()}")
    cells = np.frombuffer(data, np.uint8, CELL_COUNT, _HEADER.size).reshape(GRID, GRID)
    return PressureFrame(seq, t_ms, cells.copy())


def write_wsk(path: str | Path, frames: Iterable[PressureFrame]) -> None:
    with open(path, "wb") as fh:
        for frame in frames:
            fh.write(encode_frame(frame))


def read_wsk(path: str | Path) -> list[PressureFrame]:
    data = Path(path).read_bytes()
    if len(data) % RECORD_SIZE != 0:
        raise Truncated(f"file size {len(data)} is not a multiple of {RECORD_SIZE}")
    frames = [
        parse_frame_record(data[off : off + RECORD_SIZE])
        for off in range(0, len(data), RECORD_SIZE)
    ]
    _check_seq_order(frames)
    return frames


def write_wskx(path: str | Path, frames: Iterable[PressureFrame]) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for frame in frames:
            hexcells = frame.cells.tobytes().hex().upper()
            fh.write(f"{frame.seq},{frame.timestamp_ms},{hexcells}\n")


def read_wskx(path: str | Path) -> list[PressureFrame]:
    frames = []
    for lineno, line in enumerate(Path(path).read_text(encoding="ascii").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            seq_s, t_s, hexcells = line.split(",")
            if len(hexcells) != 2 * CELL_COUNT:
                raise ValueError(f"expected {2 * CELL_COUNT} hex chars")
            cells = np.frombuffer(bytes.fromhex(hexcells), np.uint8).reshape(GRID, GRID)
            frames.append(PressureFrame(int(seq_s), int(t_s), cells.copy()))
        except ValueError as exc:
            raise FrameCodecError(f"{path}:{lineno}: {exc}") from exc
    _check_seq_order(frames)
    return frames


def read_stream(path: str | Path) -> list[PressureFrame]:
    """Load a replay file, picking the codec from the extension."""
    if str(path).endswith(".wskx"):
        return read_wskx(path)
    return read_wsk(path)


def _check_seq_order(frames: list[PressureFrame]) -> None:
    for prev, cur in zip(frames, frames[1:]):
        if cur.seq <= prev.seq:
            raise FrameCodecError(f"seq must strictly increase: {prev.seq} -> {cur.seq}")


def apply_threshold(frame: PressureFrame, tau: int) -> PressureFrame:
    return PressureFrame(frame.seq, frame.timestamp_ms, kernels.apply_threshold(frame.cells, tau))


def median_filter(frame: PressureFrame, window: int) -> PressureFrame:
    if window < 1 or window % 2 == 0:
        raise EvenWindow(f"median window must be odd and >= 1, got {window}")
    return PressureFrame(frame.seq, frame.timestamp_ms, kernels.median_filter(frame.cells, window))


def preprocess(frame: PressureFrame, cfg: PreprocessConfig) -> PressureFrame:
    """Threshold first, then median-filter; the order is load-bearing."""
    return median_filter(apply_threshold(frame, cfg.threshold_tau), cfg.median_window)
