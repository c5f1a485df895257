"""Closed-form Rabi propagators for resonantly driven two- and three-level atoms.

Conventions (hbar = 1, angular-frequency units):

* A three-level atom has energies ``E0 < E1 < E2`` with ``delta1 = E1 - E0``
  and ``delta2 = E2 - E0``.  Drive frequencies are never stored; they follow
  from resonance: ``omega1 = delta1`` (0-1), ``omega2 = delta2 - delta1``
  (1-2), ``omega3 = delta2`` (0-2).
* Coupling/phase pairs are tied to transitions: ``(g1, phi1)`` drives 0-1,
  ``(g2, phi2)`` drives 1-2, ``(g3, phi3)`` drives 0-2.  A two-level drive
  uses ``(g1, phi1)``.
* The lab Hamiltonian carries ``g exp(+i(phi + omega t))`` above the diagonal.

For every kind a diagonal frame ``D(t)`` turns the lab Schroedinger equation
into ``i dPhi/dt = Ht Phi`` with a constant generator ``Ht``, where
``Phi = D(t) Psi``.  :func:`analytic_propagator` returns ``D(t)^-1 exp(-i t Ht)``,
the matrix taking ``Phi(0)`` to ``Psi(t)``.  The lab propagator
``Psi(0) -> Psi(t)`` is that matrix times ``D(0)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .algebra import expm_hermitian

PHASE_TOL = 1e-12


class DriveKind(str, Enum):
    FREE0 = "Free0"
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    TYPE_III = "TypeIII"
    TYPE_IV = "TypeIV"
    TYPE_V = "TypeV"
    TYPE_VI = "TypeVI"
    TYPE_VII = "TypeVII"
    TWO_LEVEL_U = "TwoLevelU"
    TWO_LEVEL_V = "TwoLevelV"

    @property
    def dimension(self) -> int:
        return 2 if self in (DriveKind.TWO_LEVEL_U, DriveKind.TWO_LEVEL_V) else 3


THREE_LEVEL_KINDS = tuple(k for k in DriveKind if k.dimension == 3)
TWO_LEVEL_KINDS = (DriveKind.TWO_LEVEL_U, DriveKind.TWO_LEVEL_V)

# transition -> (coupling attr, phase attr); levels (a, b) with a < b
_TRANSITIONS = {
    (0, 1): ("g1", "phi1"),
    (1, 2): ("g2", "phi2"),
    (0, 2): ("g3", "phi3"),
}

_DRIVEN = {
    DriveKind.FREE0: (),
    DriveKind.TYPE_I: ((0, 1),),
    DriveKind.TYPE_II: ((1, 2),),
    DriveKind.TYPE_III: ((0, 2),),
    DriveKind.TYPE_IV: ((0, 1), (1, 2)),
    DriveKind.TYPE_V: ((0, 1), (0, 2)),
    DriveKind.TYPE_VI: ((0, 2), (1, 2)),
    DriveKind.TYPE_VII: ((0, 1), (1, 2), (0, 2)),
    DriveKind.TWO_LEVEL_U: ((0, 1),),
    DriveKind.TWO_LEVEL_V: (),
}


def driven_transitions(kind: DriveKind) -> tuple[tuple[int, int], ...]:
    return _DRIVEN[DriveKind(kind)]


@dataclass(frozen=True)
class AtomSpec:
    """Three-level atom with energies ``E0 < E1 < E2``."""

    E0: float
    E1: float
    E2: float

    def __post_init__(self):
        vals = (self.E0, self.E1, self.E2)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"energies must be finite, got {vals}")
        if not self.E0 < self.E1 < self.E2:
            raise ValueError(f"need E0 < E1 < E2, got {vals}")
        if not self.spacing_ok:
            warnings.warn(
                f"level spacing E1-E0={self.delta1:g} does not exceed "
                f"E2-E1={self.delta2 - self.delta1:g}",
                stacklevel=3,
            )

    dimension = 3

    @property
    def delta1(self) -> float:
        return self.E1 - self.E0

    @property
    def delta2(self) -> float:
        return self.E2 - self.E0

    @property
    def spacing_ok(self) -> bool:
        return self.delta1 > self.delta2 - self.delta1

    def frequencies(self) -> tuple[float, float, float]:
        """Resonant drive frequencies ``(omega1, omega2, omega3)``."""
        return self.delta1, self.delta2 - self.delta1, self.delta2


@dataclass(frozen=True)
class TwoLevelAtom:
    """Two-level atom: ground energy ``E0`` and splitting ``delta > 0``."""

    E0: float
    delta: float

    def __post_init__(self):
        if not (math.isfinite(self.E0) and math.isfinite(self.delta)):
            raise ValueError("energies must be finite")
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")

    dimension = 2

    @property
    def E1(self) -> float:
        return self.E0 + self.delta

    def frequencies(self) -> tuple[float]:
        return (self.delta,)


Atom = AtomSpec | TwoLevelAtom


@dataclass(frozen=True)
class DriveParams:
    g1: float = 0.0
    g2: float = 0.0
    g3: float = 0.0
    phi1: float = 0.0
    phi2: float = 0.0
    phi3: float = 0.0

    def __post_init__(self):
        for name in ("g1", "g2", "g3", "phi1", "phi2", "phi3"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        for name in ("g1", "g2", "g3"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    @classmethod
    def uniform(cls, g: float, phi1: float = 0.0, phi2: float = 0.0, phi3: float = 0.0):
        return cls(g, g, g, phi1, phi2, phi3)

    def phase_condition_holds(self, tol: float = PHASE_TOL) -> bool:
        """``phi3 = phi1 + phi2`` modulo ``2 pi``."""
        r = math.remainder(self.phi3 - self.phi1 - self.phi2, 2 * math.pi)
        return abs(r) <= tol

    def couplings_for(self, kind: DriveKind) -> tuple[float, ...]:
        return tuple(getattr(self, _TRANSITIONS[tr][0]) for tr in driven_transitions(kind))

    def has_equal_couplings(self, kind: DriveKind) -> bool:
        gs = self.couplings_for(kind)
        return all(g == gs[0] for g in gs)


def _check_atom(kind: DriveKind, atom) -> None:
    kind = DriveKind(kind)
    if kind.dimension != atom.dimension:
        raise ValueError(f"{kind.value} acts on {kind.dimension} levels, atom has {atom.dimension}")


def _check_time(t: float) -> None:
    if not (t >= 0 and math.isfinite(t)):
        raise ValueError(f"time must be finite and >= 0, got {t}")


def _frame_angles(kind: DriveKind, atom, p: DriveParams, t: float) -> np.ndarray:
    """Angles ``theta`` with ``D(t) = diag(exp(i theta))``."""
    if kind is DriveKind.FREE0:
        return np.zeros(3)
    if kind is DriveKind.TWO_LEVEL_V:
        return np.zeros(2)
    e0 = atom.E0 * t
    if kind is DriveKind.TWO_LEVEL_U:
        return np.array([e0, e0 + p.phi1 + atom.delta * t])
    w1, w2, w3 = atom.frequencies()
    d1, d2 = atom.delta1, atom.delta2
    if kind is DriveKind.TYPE_I:
        rel = (0.0, p.phi1 + w1 * t, d2 * t)
    elif kind is DriveKind.TYPE_II:
        rel = (0.0, d1 * t, p.phi2 + (w2 + d1) * t)
    elif kind is DriveKind.TYPE_III:
        rel = (0.0, d1 * t, p.phi3 + w3 * t)
    elif kind in (DriveKind.TYPE_IV, DriveKind.TYPE_VII):
        rel = (0.0, p.phi1 + w1 * t, p.phi1 + p.phi2 + (w1 + w2) * t)
    elif kind is DriveKind.TYPE_V:
        rel = (0.0, p.phi1 + w1 * t, p.phi3 + w3 * t)
    elif kind is DriveKind.TYPE_VI:
        rel = (0.0, p.phi3 - p.phi2 + (w3 - w2) * t, p.phi3 + w3 * t)
    else:  # pragma: no cover
        raise ValueError(kind)
    return e0 + np.array(rel)


def frame_transform(kind: DriveKind, atom, params: DriveParams, t: float) -> np.ndarray:
    """Diagonal frame ``D(t)`` with ``Phi = D(t) Psi``."""
    kind = DriveKind(kind)
    _check_atom(kind, atom)
    return np.diag(np.exp(1j * _frame_angles(kind, atom, params, t)))


def rotating_generator(kind: DriveKind, atom, params: DriveParams) -> np.ndarray:
    """Constant generator ``Ht`` of the frame equation under resonance."""
    kind = DriveKind(kind)
    _check_atom(kind, atom)
    if kind is DriveKind.FREE0:
        return np.diag([atom.E0, atom.E1, atom.E2]).astype(complex)
    if kind is DriveKind.TWO_LEVEL_V:
        return np.diag([atom.E0, atom.E1]).astype(complex)
    h = np.zeros((kind.dimension, kind.dimension), dtype=complex)
    for a, b in driven_transitions(kind):
        g = getattr(params, _TRANSITIONS[(a, b)][0])
        h[a, b] = h[b, a] = g
    if kind is DriveKind.TYPE_VII:
        # residual phase survives only when phi3 != phi1 + phi2
        z = params.g3 * np.exp(1j * (params.phi3 - params.phi1 - params.phi2))
        h[0, 2], h[2, 0] = z, np.conj(z)
    return h


def _rabi(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _embed(block: np.ndarray, levels: tuple[int, int]) -> np.ndarray:
    u = np.eye(3, dtype=complex)
    u[np.ix_(levels, levels)] = block
    return u


def _interior_equal(kind: DriveKind, g: float, t: float) -> np.ndarray:
    """Interior rotations of the single-coupling closed forms."""
    if kind in (DriveKind.TYPE_I, DriveKind.TYPE_II, DriveKind.TYPE_III):
        levels = {DriveKind.TYPE_I: (0, 1), DriveKind.TYPE_II: (1, 2), DriveKind.TYPE_III: (0, 2)}
        return _embed(_rabi(g * t), levels[kind])
    if kind is DriveKind.TYPE_VII:
        e = np.exp(-3j * g * t)
        diag, off = (2 + e) / 3, (-1 + e) / 3
        return np.exp(1j * g * t) * np.array(
            [[diag, off, off], [off, diag, off], [off, off, diag]]
        )
    r2 = math.sqrt(2.0)
    c, s = math.cos(r2 * g * t), math.sin(r2 * g * t)
    p, m, q = (1 + c) / 2, (-1 + c) / 2, -1j * s / r2
    if kind is DriveKind.TYPE_IV:
        return np.array([[p, q, m], [q, c, q], [m, q, p]])
    if kind is DriveKind.TYPE_V:
        return np.array([[c, q, q], [q, p, m], [q, m, p]])
    if kind is DriveKind.TYPE_VI:
        return np.array([[p, m, q], [m, p, q], [q, q, c]])
    raise ValueError(kind)  # pragma: no cover


def _interior_hub(hub: int, a: int, ga: float, b: int, gb: float, t: float) -> np.ndarray:
    """exp(-i t Ht) for a level ``hub`` coupled to ``a`` and ``b`` (ga, gb)."""
    G = math.hypot(ga, gb)
    c, s = math.cos(G * t), math.sin(G * t)
    u = np.zeros((3, 3), dtype=complex)
    u[hub, hub] = c
    u[hub, a] = u[a, hub] = -1j * ga * s / G
    u[hub, b] = u[b, hub] = -1j * gb * s / G
    u[a, a] = (ga * ga * c + gb * gb) / (G * G)
    u[b, b] = (gb * gb * c + ga * ga) / (G * G)
    u[a, b] = u[b, a] = ga * gb * (c - 1) / (G * G)
    return u


def _to_lab(kind, atom, params, t, interior) -> np.ndarray:
    angles = _frame_angles(kind, atom, params, t)
    return np.exp(-1j * angles)[:, None] * interior


def analytic_propagator(kind: DriveKind, atom, params: DriveParams, t: float) -> np.ndarray:
    """Closed-form ``U_k(t, 0)``: frame factor times interior rotation.

    The result maps the frame state ``Phi(0)`` to ``Psi(t)``.  Kinds IV-VI
    need their two couplings equal (see
    :func:`analytic_propagator_two_couplings` otherwise) and TypeVII needs
    ``g1 = g2 = g3`` with ``phi3 = phi1 + phi2`` (see :func:`vii_exponential`).
    """
    kind = DriveKind(kind)
    _check_atom(kind, atom)
    _check_time(t)
    p = params
    if kind is DriveKind.FREE0:
        return np.diag(np.exp(-1j * t * np.array([atom.E0, atom.E1, atom.E2])))
    if kind is DriveKind.TWO_LEVEL_V:
        return np.diag(np.exp(-1j * t * np.array([atom.E0, atom.E1])))
    if kind is DriveKind.TWO_LEVEL_U:
        return _to_lab(kind, atom, p, t, _rabi(p.g1 * t))
    if not p.has_equal_couplings(kind):
        if kind is DriveKind.TYPE_VII:
            raise ValueError("TypeVII closed form needs g1 = g2 = g3; use vii_exponential")
        raise ValueError(
            f"{kind.value} closed form needs equal couplings; "
            "use analytic_propagator_two_couplings"
        )
    if kind is DriveKind.TYPE_VII and not p.phase_condition_holds():
        raise ValueError("TypeVII closed form needs phi3 = phi1 + phi2; use vii_exponential")
    g = p.couplings_for(kind)[0]
    return _to_lab(kind, atom, p, t, _interior_equal(kind, g, t))


def analytic_propagator_two_couplings(
    kind: DriveKind, atom: AtomSpec, params: DriveParams, t: float
) -> np.ndarray:
    """Propagators of kinds IV, V, VI with independent couplings.

    The effective Rabi frequency is ``sqrt(ga^2 + gb^2)``.  When both couplings
    vanish nothing drives the atom and the free propagator is returned.
    """
    kind = DriveKind(kind)
    if kind not in (DriveKind.TYPE_IV, DriveKind.TYPE_V, DriveKind.TYPE_VI):
        raise ValueError(f"two-coupling forms exist for TypeIV/V/VI, not {kind.value}")
    _check_atom(kind, atom)
    _check_time(t)
    p = params
    if kind is DriveKind.TYPE_IV:
        hub, (a, ga), (b, gb) = 1, (0, p.g1), (2, p.g2)
    elif kind is DriveKind.TYPE_V:
        hub, (a, ga), (b, gb) = 0, (1, p.g1), (2, p.g3)
    else:
        hub, (a, ga), (b, gb) = 2, (0, p.g3), (1, p.g2)
    if ga == 0 and gb == 0:
        return analytic_propagator(DriveKind.FREE0, atom, p, t)
    return _to_lab(kind, atom, p, t, _interior_hub(hub, a, ga, b, gb, t))


def vii_exponential(
    atom: AtomSpec,
    g1: float,
    g2: float,
    g3: float,
    phi1: float,
    phi2: float,
    phi3: float,
    t: float,
) -> np.ndarray:
    """Three-coupling TypeVII propagator from a numerical exponential.

    ``Ht`` has zero diagonal and off-diagonals ``g1``, ``g2`` and
    ``g3 exp(i(phi3 - phi1 - phi2))``; no closed form is used.
    """
    _check_time(t)
    p = DriveParams(g1, g2, g3, phi1, phi2, phi3)
    kind = DriveKind.TYPE_VII
    _check_atom(kind, atom)
    interior = expm_hermitian(rotating_generator(kind, atom, p), t)
    return _to_lab(kind, atom, p, t, interior)


def segment_propagator(kind: DriveKind, atom, params: DriveParams, t: float) -> np.ndarray:
    """Dispatch to whichever closed form (or numeric path) fits the parameters."""
    kind = DriveKind(kind)
    if kind in (DriveKind.TYPE_IV, DriveKind.TYPE_V, DriveKind.TYPE_VI):
        if not params.has_equal_couplings(kind):
            return analytic_propagator_two_couplings(kind, atom, params, t)
    if kind is DriveKind.TYPE_VII and not (
        params.has_equal_couplings(kind) and params.phase_condition_holds()
    ):
        p = params
        return vii_exponential(atom, p.g1, p.g2, p.g3, p.phi1, p.phi2, p.phi3, t)
    return analytic_propagator(kind, atom, params, t)


@dataclass(frozen=True)
class HarmonicHamiltonian:
    """``H(t) = static + sum_j (C_j e^{i nu_j t} + h.c.)``."""

    static: np.ndarray
    amplitudes: tuple[np.ndarray, ...] = field(default=())
    frequencies: tuple[float, ...] = field(default=())

    def __call__(self, t: float) -> np.ndarray:
        h = np.array(self.static, dtype=complex)
        for c, nu in zip(self.amplitudes, self.frequencies):
            term = c * np.exp(1j * nu * t)
            h += term + term.conj().T
        return h

    @property
    def dimension(self) -> int:
        return self.static.shape[0]

    def norm_bound(self) -> float:
        """Upper bound on the spectral norm of ``H(t)`` over all ``t``."""
        bound = np.linalg.norm(self.static, 2)
        for c in self.amplitudes:
            bound += 2 * np.linalg.norm(c, 2)
        return float(bound)


def lab_hamiltonian_terms(kind: DriveKind, atom, params: DriveParams) -> HarmonicHamiltonian:
    kind = DriveKind(kind)
    _check_atom(kind, atom)
    n = kind.dimension
    energies = [atom.E0, atom.E1] if n == 2 else [atom.E0, atom.E1, atom.E2]
    static = np.diag(energies).astype(complex)
    freqs = dict(zip([(0, 1), (1, 2), (0, 2)], atom.frequencies())) if n == 3 else {
        (0, 1): atom.delta
    }
    amps, nus = [], []
    for a, b in driven_transitions(kind):
        gname, phname = _TRANSITIONS[(a, b)]
        c = np.zeros((n, n), dtype=complex)
        c[a, b] = getattr(params, gname) * np.exp(1j * getattr(params, phname))
        amps.append(c)
        nus.append(freqs[(a, b)])
    return HarmonicHamiltonian(static, tuple(amps), tuple(nus))


def lab_frame_hamiltonian(kind: DriveKind, atom, params: DriveParams, t: float) -> np.ndarray:
    """Lab-frame (RWA) Hamiltonian ``H(t)`` of the given drive kind."""
    return lab_hamiltonian_terms(kind, atom, params)(t)
