"""Exact pulse schedules for qubit and qutrit gates on few-level atoms."""

from .propagators import AtomSpec, DriveKind, DriveParams, TwoLevelAtom
from .schedule import CompositionMode, PulseSchedule, Segment, compose
from .synthesis import GateTarget, SynthesisMode, synthesize

__version__ = "0.1.0"

__all__ = [
    "AtomSpec",
    "CompositionMode",
    "DriveKind",
    "DriveParams",
    "GateTarget",
    "PulseSchedule",
    "Segment",
    "SynthesisMode",
    "TwoLevelAtom",
    "compose",
    "synthesize",
]
