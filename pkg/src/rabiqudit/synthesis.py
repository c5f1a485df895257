"""Compile catalog gates into pulse schedules.

Each construction fixes segment durations from Rabi-angle conditions
(:func:`solve_time`, smallest positive branch) and then picks the free laser
phases so the accumulated diagonal phases hit their targets
(:func:`solve_phase`).  The accumulated phase of every construction is written
out as a linear expression in the segment durations.

In ``Strict`` mode a free-evolution padding segment stretches the total time
``T`` to the next ``E0 T = 2 pi k``, which removes the global factor
``exp(-i E0 T)`` and makes the schedule reproduce the target entrywise.
``Projective`` mode skips the padding and matches the target up to a global
phase.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import algebra
from .propagators import AtomSpec, DriveKind, DriveParams, TwoLevelAtom
from .schedule import CompositionMode, PulseSchedule, Segment, compose

TWO_PI = 2 * math.pi
STRICT_TOL = 1e-8
PROJECTIVE_TOL = 1e-9


class SynthesisMode(str, Enum):
    STRICT = "Strict"
    PROJECTIVE = "Projective"


class UnsupportedTarget(ValueError):
    pass


def solve_phase(accumulated: float, target: complex) -> float:
    """Phase ``phi`` in ``[0, 2 pi)`` with ``exp(-i(accumulated + phi)) = target``."""
    if abs(abs(target) - 1) > 1e-10:
        raise ValueError(f"target must have unit modulus, got |{target}| = {abs(target)}")
    phi = (-cmath.phase(target) - accumulated) % TWO_PI
    return 0.0 if phi >= TWO_PI else phi


def solve_time(rate: float, target_angle: float, branch: int = 0) -> float:
    """Duration ``(target_angle + 2 pi branch) / rate``."""
    if not rate > 0:
        raise ValueError(f"rate must be positive, got {rate}")
    if branch < 0 or int(branch) != branch:
        raise ValueError(f"branch must be a non-negative integer, got {branch}")
    return (target_angle + TWO_PI * branch) / rate


def padding_duration(E0: float, elapsed: float) -> float:
    """Smallest ``pad >= 0`` with ``E0 (elapsed + pad) = 2 pi k``, ``k`` integer."""
    k = math.ceil(E0 * elapsed / TWO_PI)
    return max(0.0, TWO_PI * k / E0 - elapsed)


@dataclass(frozen=True, eq=False)
class GateTarget:
    """A catalog gate, or ``Custom`` wrapping an arbitrary unitary."""

    name: str
    theta: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    unitary: np.ndarray | None = None

    def __post_init__(self):
        if self.name not in CATALOG and self.name != "Custom":
            raise ValueError(f"unknown target {self.name!r}")
        if self.name == "Custom" and self.unitary is None:
            raise ValueError("Custom targets carry a unitary")

    @classmethod
    def sigma_theta(cls, theta: float) -> "GateTarget":
        return cls("SigmaTheta", theta=theta)

    @classmethod
    def diag_phases(cls, alpha: float, beta: float) -> "GateTarget":
        return cls("DiagPhases", alpha=alpha, beta=beta)

    @classmethod
    def custom(cls, u) -> "GateTarget":
        return cls("Custom", unitary=algebra.check_unitary(u))

    @property
    def dimension(self) -> int:
        if self.name == "Custom":
            return self.unitary.shape[0]
        return 2 if self.name in TWO_LEVEL_TARGETS else 3

    def matrix(self) -> np.ndarray:
        s = algebra.primitive_root(3)
        table = {
            "Sigma1_2lvl": lambda: algebra.pauli_two_level()["sigma1"],
            "SigmaTheta": lambda: np.diag([1.0, cmath.exp(1j * self.theta)]),
            "W2": lambda: algebra.walsh_hadamard(2),
            "Perm01": lambda: algebra.transposition(3, 0, 1),
            "Perm02": lambda: algebra.transposition(3, 0, 2),
            "Sigma1_3": lambda: algebra.sigma_generators(3)[0],
            "K3": lambda: algebra.exchange_matrix(3),
            "Sigma3_3": lambda: np.diag([1, s, s * s]),
            "DiagPhases": lambda: algebra.diag_phases(self.alpha, self.beta),
            "MatrixI": algebra.matrix_i,
            "MatrixF": algebra.matrix_f,
            "W3": lambda: algebra.walsh_hadamard(3),
            "Custom": lambda: self.unitary,
        }
        return np.asarray(table[self.name](), dtype=complex)


TWO_LEVEL_TARGETS = ("Sigma1_2lvl", "SigmaTheta", "W2")
CATALOG = TWO_LEVEL_TARGETS + (
    "Perm01",
    "Perm02",
    "Sigma1_3",
    "K3",
    "Sigma3_3",
    "DiagPhases",
    "MatrixI",
    "MatrixF",
    "W3",
)


@dataclass
class SynthesisResult:
    schedule: PulseSchedule
    target: np.ndarray
    mode: SynthesisMode
    realized: np.ndarray = field(init=False)
    fidelity: float = field(init=False)
    max_error: float = field(init=False)
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.realized = compose(self.schedule)
        self.fidelity = algebra.fidelity(self.realized, self.target)
        self.max_error = algebra.max_abs(self.realized - self.target)

    @property
    def elapsed_total(self) -> float:
        return self.schedule.total_duration


# -- constructions -------------------------------------------------------------
#
# Each builder returns the segment list for one gate.  ``pad`` is a callable
# mapping the elapsed time of the fixed segments to the padding duration
# (identically zero in Projective mode, in which case no padding is emitted).


def _seg(kind, duration, **params) -> Segment:
    return Segment(kind, duration, DriveParams(**params))


def _two_level_sigma1(atom: TwoLevelAtom, g: float, pad) -> list[Segment]:
    d = atom.delta
    t1 = solve_time(d, 1.5 * math.pi)
    t2 = solve_time(g, 0.5 * math.pi)
    tp = pad(t1 + t2)
    phi = solve_phase(d * (t2 + tp), 1j)
    segs = [_seg(DriveKind.TWO_LEVEL_V, t1), _seg(DriveKind.TWO_LEVEL_U, t2, g1=g, phi1=phi)]
    return segs + _padding(DriveKind.TWO_LEVEL_V, tp, pad)


def _two_level_sigma_theta(atom: TwoLevelAtom, g: float, theta: float, pad) -> list[Segment]:
    d = atom.delta
    t1 = solve_time(g, 0.0, branch=1)
    tp = pad(t1)
    phi = solve_phase(d * (t1 + tp), cmath.exp(1j * theta))
    segs = [_seg(DriveKind.TWO_LEVEL_U, t1, g1=g, phi1=phi)]
    return segs + _padding(DriveKind.TWO_LEVEL_V, tp, pad)


def _two_level_w(atom: TwoLevelAtom, g: float, pad) -> list[Segment]:
    d = atom.delta
    t1 = solve_time(d, 1.5 * math.pi)
    t2 = solve_time(g, 0.25 * math.pi)
    t3 = solve_time(d, 1.5 * math.pi)
    tp = pad(t1 + t2 + t3)
    phi = solve_phase(d * (tp + t2), 1.0)
    segs = [
        _seg(DriveKind.TWO_LEVEL_V, t1),
        _seg(DriveKind.TWO_LEVEL_U, t2, g1=g, phi1=phi),
        _seg(DriveKind.TWO_LEVEL_V, t3),
    ]
    return segs + _padding(DriveKind.TWO_LEVEL_V, tp, pad)


def _perm01(atom: AtomSpec, g: float, pad) -> list[Segment]:
    d1, d2 = atom.delta1, atom.delta2
    w1, _, w3 = atom.frequencies()
    a = solve_time(d1, 1.5 * math.pi)
    b = solve_time(g, 0.5 * math.pi)
    c = solve_time(d1, 1.5 * math.pi)
    d = solve_time(g, 0.0, branch=1)
    e = pad(a + b + c + d)
    phi1 = solve_phase(w1 * b + d1 * (d + e), 1.0)
    phi3 = solve_phase(w3 * d + d2 * (e + a + b + c), 1.0)
    return [
        _seg(DriveKind.FREE0, a),
        _seg(DriveKind.TYPE_I, b, g1=g, phi1=phi1),
        _seg(DriveKind.FREE0, c),
        _seg(DriveKind.TYPE_III, d, g3=g, phi3=phi3),
    ] + _padding(DriveKind.FREE0, e, pad)


def _perm02(atom: AtomSpec, g: float, pad) -> list[Segment]:
    d1, d2 = atom.delta1, atom.delta2
    w1, _, w3 = atom.frequencies()
    a = solve_time(d2, 1.5 * math.pi)
    b = solve_time(g, 0.5 * math.pi)
    c = solve_time(d2, 1.5 * math.pi)
    d = solve_time(g, 0.0, branch=1)
    e = pad(a + b + c + d)
    phi1 = solve_phase(w1 * d + d1 * (e + a + b + c), 1.0)
    phi3 = solve_phase(w3 * b + d2 * (d + e), 1.0)
    return [
        _seg(DriveKind.FREE0, a),
        _seg(DriveKind.TYPE_III, b, g3=g, phi3=phi3),
        _seg(DriveKind.FREE0, c),
        _seg(DriveKind.TYPE_I, d, g1=g, phi1=phi1),
    ] + _padding(DriveKind.FREE0, e, pad)


def _diag_phases(atom: AtomSpec, g: float, alpha: float, beta: float, pad) -> list[Segment]:
    d1, d2 = atom.delta1, atom.delta2
    w1, _, w3 = atom.frequencies()
    a = solve_time(g, 0.0, branch=1)
    b = solve_time(g, 0.0, branch=1)
    c = pad(a + b)
    phi1 = solve_phase(d1 * (b + c) + w1 * a, cmath.exp(1j * alpha))
    phi3 = solve_phase(w3 * b + d2 * (c + a), cmath.exp(1j * beta))
    return [
        _seg(DriveKind.TYPE_I, a, g1=g, phi1=phi1),
        _seg(DriveKind.TYPE_III, b, g3=g, phi3=phi3),
    ] + _padding(DriveKind.FREE0, c, pad)


def _matrix_f(atom: AtomSpec, g: float, pad) -> list[Segment]:
    d1, d2 = atom.delta1, atom.delta2
    w1, w2, _ = atom.frequencies()
    a = solve_time(g, 0.25 * math.pi)
    b = solve_time(g, 0.0, branch=1)
    c = pad(a + b)
    eighth = cmath.exp(0.25j * math.pi)
    phi1 = solve_phase(d1 * (c + a) + w1 * b, eighth)
    phi2 = solve_phase(d2 * (b + c) + (w2 + d1) * a, eighth)
    return [
        _seg(DriveKind.TYPE_II, a, g2=g, phi2=phi2),
        _seg(DriveKind.TYPE_I, b, g1=g, phi1=phi1),
    ] + _padding(DriveKind.FREE0, c, pad)


def _type_v_block(atom: AtomSpec, g: float, pad) -> list[Segment]:
    """TypeV pulse with cos(sqrt2 g t) = 1/sqrt3, then free padding."""
    d1, d2 = atom.delta1, atom.delta2
    w1, _, w3 = atom.frequencies()
    a = solve_time(math.sqrt(2) * g, math.acos(1 / math.sqrt(3)))
    b = pad(a)
    phi1 = solve_phase(d1 * b + w1 * a, 1.0)
    phi3 = solve_phase(d2 * b + w3 * a, 1.0)
    segs = [_seg(DriveKind.TYPE_V, a, g1=g, g3=g, phi1=phi1, phi3=phi3)]
    return segs + _padding(DriveKind.FREE0, b, pad)


def _padding(kind: DriveKind, duration: float, pad) -> list[Segment]:
    return [] if pad is _no_pad else [_seg(kind, duration)]


def _no_pad(elapsed: float) -> float:
    return 0.0


def _build(name: str, target: GateTarget, atom, g: float, pad) -> list[Segment]:
    third = TWO_PI / 3
    if name == "Sigma1_2lvl":
        return _two_level_sigma1(atom, g, pad)
    if name == "SigmaTheta":
        return _two_level_sigma_theta(atom, g, target.theta, pad)
    if name == "W2":
        return _two_level_w(atom, g, pad)
    if name == "Perm01":
        return _perm01(atom, g, pad)
    if name == "Perm02":
        return _perm02(atom, g, pad)
    if name == "Sigma1_3":
        # Sigma1 = Perm02 Perm01: Perm01 acts first
        return _perm01(atom, g, pad) + _perm02(atom, g, pad)
    if name == "K3":
        return _perm02(atom, g, pad) + _perm01(atom, g, pad) + _perm02(atom, g, pad)
    if name == "Sigma3_3":
        return _diag_phases(atom, g, third, 2 * third, pad)
    if name == "DiagPhases":
        return _diag_phases(atom, g, target.alpha, target.beta, pad)
    if name == "MatrixI":
        return _diag_phases(atom, g, math.pi / 2, math.pi / 2, pad)
    if name == "MatrixF":
        return _matrix_f(atom, g, pad)
    if name == "W3":
        # W = F . I . (U0 U5) . I, rightmost first
        i_gate = _diag_phases(atom, g, math.pi / 2, math.pi / 2, pad)
        return i_gate + _type_v_block(atom, g, pad) + i_gate + _matrix_f(atom, g, pad)
    raise UnsupportedTarget(name)  # pragma: no cover


def synthesize(
    target: GateTarget,
    atom: AtomSpec | TwoLevelAtom,
    g: float,
    mode: SynthesisMode | str = SynthesisMode.STRICT,
) -> SynthesisResult:
    """Emit the pulse schedule realizing a catalog gate.

    Raises :class:`UnsupportedTarget` for ``Custom`` targets.  A Strict request
    on an atom with ``E0 <= 0`` cannot be padded and is downgraded to
    Projective; the result then carries a warning.
    """
    mode = SynthesisMode(mode)
    if target.name == "Custom":
        raise UnsupportedTarget("Custom targets are not compiled; only catalog gates are supported")
    if target.dimension != atom.dimension:
        raise ValueError(
            f"{target.name} acts on {target.dimension} levels, atom has {atom.dimension}"
        )
    if not (g > 0 and math.isfinite(g)):
        raise ValueError(f"coupling g must be positive, got {g}")
    notes = []
    if mode is SynthesisMode.STRICT and atom.E0 <= 0:
        msg = f"E0 = {atom.E0:g} <= 0: global phase cannot be padded away, using Projective"
        warnings.warn(msg, stacklevel=2)
        notes.append(msg)
        mode = SynthesisMode.PROJECTIVE
    if mode is SynthesisMode.STRICT:
        def pad(elapsed):
            return padding_duration(atom.E0, elapsed)
    else:
        pad = _no_pad
    segments = _build(target.name, target, atom, g, pad)
    schedule = PulseSchedule(atom, tuple(segments), CompositionMode.PAPER_LITERAL)
    result = SynthesisResult(schedule, target.matrix(), mode, warnings=notes)
    if mode is SynthesisMode.STRICT and result.max_error > STRICT_TOL:
        raise RuntimeError(f"{target.name}: strict synthesis error {result.max_error:.3e}")
    if result.fidelity < 1 - PROJECTIVE_TOL:
        raise RuntimeError(f"{target.name}: fidelity {result.fidelity!r} below tolerance")
    return result
