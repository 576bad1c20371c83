"""padsketch: a pressure-pad interaction pipeline.

Turns 40x40 pressure-frame streams into touch points, gestures, and
interaction commands, and drives a dynamic 2D sketch document with five
animation types.
"""

from .frames import PreprocessConfig, PressureFrame, preprocess
from .gestures import GestureEvent, GestureKind, Recognizer, RecognizerConfig, Zone, classify_zone
from .session import Session, SessionConfig
from .sketch import SketchDocument, new_document
from .touch import Blob, TouchObservation, TouchPoint, detect_blobs, observe

__version__ = "0.1.0"

__all__ = [
    "Blob",
    "GestureEvent",
    "GestureKind",
    "PreprocessConfig",
    "PressureFrame",
    "Recognizer",
    "RecognizerConfig",
    "Session",
    "SessionConfig",
    "SketchDocument",
    "TouchObservation",
    "TouchPoint",
    "Zone",
    "classify_zone",
    "detect_blobs",
    "new_document",
    "observe",
    "preprocess",
    "__version__",
]
