"""Hot per-frame kernels: threshold, 2D median filter, blob labeling.

Two interchangeable backends exist: a compiled Cython extension
(``_native``) and a numpy implementation (``pure``). The native one is
preferred when importable; set ``PADSKETCH_PURE_KERNELS=1`` to force the
fallback. Both produce bit-identical results.
"""

from __future__ import annotations

import os
from typing import Callable, NamedTuple

import numpy as np


class Backend(NamedTuple):
    name: str
    apply_threshold: Callable[[np.ndarray, int], np.ndarray]
    median_filter: Callable[[np.ndarray, int], np.ndarray]
    label_blobs: Callable[..., list]


def _pure_backend() -> Backend:
    from . import pure

    return Backend("pure", pure.apply_threshold, pure.median_filter, pure.label_blobs)


def _native_backend() -> Backend:
    from . import _native

    return Backend(
        "native", _native.apply_threshold, _native.median_filter, _native.label_blobs
    )


def available_backends() -> list[Backend]:
    backends = []
    try:
        backends.append(_native_backend())
    except ImportError:
        pass
    backends.append(_pure_backend())
    return backends


if os.environ.get("PADSKETCH_PURE_KERNELS"):
    _active = _pure_backend()
else:
    try:
        _active = _native_backend()
    except ImportError:
        _active = _pure_backend()


def active_backend() -> Backend:
    return _active


def get_backend(name: str | None = None) -> Backend:
    if name is None:
        return _active
    for backend in available_backends():
        if backend.name == name:
            return backend
    raise ValueError(f"unknown kernel backend: {name!r}")


apply_threshold = _active.apply_threshold
median_filter = _active.median_filter
label_blobs = _active.label_blobs
