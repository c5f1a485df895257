"""Pulse schedules: ordered rectangular drive segments and their composition.

Segments store durations, not absolute times; absolute times are cumulative
sums.  Segments are kept earliest-first and composed by left multiplication,
so the last segment ends up leftmost in the product.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources

import jsonschema
import numpy as np

from .propagators import (
    AtomSpec,
    DriveKind,
    DriveParams,
    TwoLevelAtom,
    driven_transitions,
    frame_transform,
    segment_propagator,
)


class CompositionMode(str, Enum):
    PAPER_LITERAL = "PaperLiteral"
    LAB = "Lab"


class ScheduleFormatError(ValueError):
    """Schedule text that fails to parse or violates the schema.

    ``location`` is a ``"line L, column C"`` string for syntax errors or a
    field path such as ``segments[2].kind`` for schema violations.
    """

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


@dataclass(frozen=True)
class Segment:
    kind: DriveKind
    duration: float
    params: DriveParams = field(default_factory=DriveParams)

    def __post_init__(self):
        object.__setattr__(self, "kind", DriveKind(self.kind))
        if not (math.isfinite(self.duration) and self.duration >= 0):
            raise ValueError(f"segment duration must be finite and >= 0, got {self.duration}")

    @property
    def closed_form(self) -> bool:
        """False when composition falls back to a numerical exponential."""
        if self.kind is not DriveKind.TYPE_VII:
            return True
        return self.params.has_equal_couplings(self.kind) and self.params.phase_condition_holds()


@dataclass(frozen=True)
class PulseSchedule:
    atom: AtomSpec | TwoLevelAtom
    segments: tuple[Segment, ...] = ()
    mode: CompositionMode = CompositionMode.PAPER_LITERAL

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "mode", CompositionMode(self.mode))

    @property
    def dimension(self) -> int:
        return self.atom.dimension

    @property
    def total_duration(self) -> float:
        return math.fsum(s.duration for s in self.segments)

    def end_times(self) -> list[float]:
        out, acc = [], 0.0
        for s in self.segments:
            acc += s.duration
            out.append(acc)
        return out

    def __add__(self, other: "PulseSchedule") -> "PulseSchedule":
        if other.atom != self.atom or other.mode != self.mode:
            raise ValueError("can only concatenate schedules on the same atom and mode")
        return PulseSchedule(self.atom, self.segments + other.segments, self.mode)


@dataclass
class ScheduleDiagnostics:
    frequencies: list[dict[str, float]]
    end_times: list[float]
    warnings: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


_OMEGA_NAMES = {(0, 1): "omega1", (1, 2): "omega2", (0, 2): "omega3"}


def validate(schedule: PulseSchedule) -> ScheduleDiagnostics:
    """Report derived drive frequencies, cumulative times and problems.

    Hard errors (``errors``) make the schedule impossible to compose.
    Advisory findings (``warnings``) cover the level-spacing assumption and
    TypeVII segments that cannot use the closed form.
    """
    atom = schedule.atom
    freqs: list[dict[str, float]] = []
    diag = ScheduleDiagnostics(freqs, schedule.end_times())
    if atom.dimension == 3 and not atom.spacing_ok:
        diag.warnings.append(
            f"advisory: E1-E0 = {atom.delta1:g} does not exceed E2-E1 = "
            f"{atom.delta2 - atom.delta1:g}"
        )
    for i, seg in enumerate(schedule.segments):
        if seg.kind.dimension != atom.dimension:
            diag.errors.append(
                f"segments[{i}]: {seg.kind.value} needs a {seg.kind.dimension}-level atom, "
                f"schedule atom has {atom.dimension} levels"
            )
            freqs.append({})
            continue
        if atom.dimension == 2:
            f = {"omega": atom.delta} if seg.kind is DriveKind.TWO_LEVEL_U else {}
        else:
            table = dict(zip(_OMEGA_NAMES.values(), atom.frequencies()))
            f = {_OMEGA_NAMES[tr]: table[_OMEGA_NAMES[tr]] for tr in driven_transitions(seg.kind)}
            if seg.kind is DriveKind.TYPE_VII:
                w1, w2, w3 = atom.frequencies()
                if not math.isclose(w3, w1 + w2, rel_tol=1e-12, abs_tol=1e-12):
                    diag.errors.append(f"segments[{i}]: omega3 != omega1 + omega2")
                if not seg.closed_form:
                    diag.warnings.append(
                        f"segments[{i}]: closed form unavailable, numeric path "
                        "(unequal couplings or phi3 != phi1 + phi2)"
                    )
        freqs.append(f)
    return diag


def segment_matrix(schedule: PulseSchedule, seg: Segment) -> np.ndarray:
    u = segment_propagator(seg.kind, schedule.atom, seg.params, seg.duration)
    if schedule.mode is CompositionMode.LAB:
        u = u @ frame_transform(seg.kind, schedule.atom, seg.params, 0.0)
    return u


def compose(schedule: PulseSchedule) -> np.ndarray:
    """Multiply segment propagators in time order, last segment leftmost."""
    diag = validate(schedule)
    if not diag.ok:
        raise ValueError("; ".join(diag.errors))
    out = np.eye(schedule.dimension, dtype=complex)
    for seg in schedule.segments:
        out = segment_matrix(schedule, seg) @ out
    return out


# -- serialization -----------------------------------------------------------

_PARAM_FIELDS = ("phi1", "phi2", "phi3", "g1", "g2", "g3")


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("rabiqudit").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def _fmt(x) -> str:
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot serialize non-finite number {x}")
        return format(x, ".17g")
    if isinstance(x, str):
        return json.dumps(x)
    raise TypeError(type(x))


def dump_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dump_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_fmt(v) for v in obj) + "]"
        items = [inner + dump_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _fmt(obj)


def schedule_to_dict(schedule: PulseSchedule) -> dict:
    atom = schedule.atom
    if isinstance(atom, TwoLevelAtom):
        atom_doc = {"E0": float(atom.E0), "delta": float(atom.delta)}
    else:
        atom_doc = {"E0": float(atom.E0), "E1": float(atom.E1), "E2": float(atom.E2)}
    segs = []
    for s in schedule.segments:
        d = {"kind": s.kind.value, "duration": float(s.duration)}
        d.update({f: float(getattr(s.params, f)) for f in _PARAM_FIELDS})
        segs.append(d)
    return {"atom": atom_doc, "mode": schedule.mode.value, "segments": segs}


def serialize(schedule: PulseSchedule) -> str:
    if not validate(schedule).ok:
        raise ValueError("refusing to serialize an invalid schedule")
    return dump_json(schedule_to_dict(schedule)) + "\n"


def _reject_constant(name: str):
    raise ValueError(f"non-finite number {name} is not allowed")


def _path(error: jsonschema.ValidationError) -> str:
    out = ""
    for part in error.absolute_path:
        out += f"[{part}]" if isinstance(part, int) else (f".{part}" if out else str(part))
    return out or "<document>"


def parse_json(text: str):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ScheduleFormatError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    except ValueError as exc:
        raise ScheduleFormatError("<document>", str(exc)) from None


def check_schema(doc, name: str) -> None:
    validator = jsonschema.Draft202012Validator(load_schema(name))
    error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if error is not None:
        raise ScheduleFormatError(_path(error), error.message)


def schedule_from_dict(doc: dict) -> PulseSchedule:
    check_schema(doc, "schedule")
    a = doc["atom"]
    try:
        atom = TwoLevelAtom(a["E0"], a["delta"]) if "delta" in a else AtomSpec(a["E0"], a["E1"], a["E2"])
    except ValueError as exc:
        raise ScheduleFormatError("atom", str(exc)) from None
    segments = []
    for i, s in enumerate(doc["segments"]):
        try:
            params = DriveParams(**{f: float(s[f]) for f in _PARAM_FIELDS})
            segments.append(Segment(DriveKind(s["kind"]), float(s["duration"]), params))
        except ValueError as exc:
            raise ScheduleFormatError(f"segments[{i}]", str(exc)) from None
    return PulseSchedule(atom, tuple(segments), CompositionMode(doc["mode"]))


def deserialize(text: str) -> PulseSchedule:
    """Parse schedule JSON; raises :class:`ScheduleFormatError` with a location."""
    return schedule_from_dict(parse_json(text))
