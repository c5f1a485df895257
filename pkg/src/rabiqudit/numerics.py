"""Brute-force checks: fixed-step RK4 on the lab-frame Schroedinger equation.

``integrate`` solves ``d psi/dt = -i H(t) psi`` with the classical
fourth-order Runge--Kutta scheme and never renormalizes, so the norm drift
is an honest diagnostic of the step size.  Hamiltonians of the form
``static + sum_j (C_j e^{i nu_j t} + h.c.)`` (every drive in this package)
take a compiled fast path; any other callable runs through plain numpy.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numba import njit

from .propagators import (
    DriveKind,
    DriveParams,
    HarmonicHamiltonian,
    TwoLevelAtom,
    frame_transform,
    lab_hamiltonian_terms,
    segment_propagator,
)

NORM_TOL = 1e-10
STEP_NORM = 0.01


@njit(cache=True)
def _apply(static, amps, freqs, t, psi, out):
    # out = -i H(t) psi, written without temporaries
    n, k = psi.shape
    m = freqs.shape[0]
    for i in range(n):
        for c in range(k):
            acc = 0j
            for j in range(n):
                acc += static[i, j] * psi[j, c]
            out[i, c] = acc
    for q in range(m):
        e = np.exp(1j * freqs[q] * t)
        ec = np.conj(e)
        for i in range(n):
            for j in range(n):
                a = amps[q, i, j]
                b = np.conj(amps[q, j, i])
                if a == 0 and b == 0:
                    continue
                coef = a * e + b * ec
                for c in range(k):
                    out[i, c] += coef * psi[j, c]
    for i in range(n):
        for c in range(k):
            out[i, c] *= -1j


@njit(cache=True)
def _rk4_harmonic(static, amps, freqs, psi, h, steps):
    k1 = np.empty_like(psi)
    k2 = np.empty_like(psi)
    k3 = np.empty_like(psi)
    k4 = np.empty_like(psi)
    tmp = np.empty_like(psi)
    for s in range(steps):
        t = s * h
        _apply(static, amps, freqs, t, psi, k1)
        tmp[:, :] = psi + 0.5 * h * k1
        _apply(static, amps, freqs, t + 0.5 * h, tmp, k2)
        tmp[:, :] = psi + 0.5 * h * k2
        _apply(static, amps, freqs, t + 0.5 * h, tmp, k3)
        tmp[:, :] = psi + h * k3
        _apply(static, amps, freqs, t + h, tmp, k4)
        psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return psi


def _rk4_generic(hamiltonian, psi, h, steps):
    for s in range(steps):
        t = s * h
        k1 = -1j * (hamiltonian(t) @ psi)
        hmid = hamiltonian(t + 0.5 * h)
        k2 = -1j * (hmid @ (psi + 0.5 * h * k1))
        k3 = -1j * (hmid @ (psi + 0.5 * h * k2))
        k4 = -1j * (hamiltonian(t + h) @ (psi + h * k3))
        psi = psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return psi


def integrate(
    hamiltonian: HarmonicHamiltonian | Callable[[float], np.ndarray],
    psi0: np.ndarray,
    t_final: float,
    steps: int,
) -> np.ndarray:
    """Propagate ``psi0`` from 0 to ``t_final`` in ``steps`` RK4 steps.

    Parameters
    ----------
    hamiltonian
        Either a :class:`HarmonicHamiltonian` (compiled path) or any callable
        returning the hermitian matrix ``H(t)``.
    psi0
        Normalized state vector, or a matrix whose columns are normalized
        states; columns are propagated together.
    t_final
        End time, ``>= 0``.
    steps
        Number of equal steps, ``>= 1``.
    """
    if int(steps) != steps or steps < 1:
        raise ValueError(f"steps must be an integer >= 1, got {steps!r}")
    if not (math.isfinite(t_final) and t_final >= 0):
        raise ValueError(f"t_final must be finite and >= 0, got {t_final}")
    psi = np.array(psi0, dtype=complex)
    norms = np.linalg.norm(psi.reshape(psi.shape[0], -1), axis=0)
    if np.any(np.abs(norms - 1) > NORM_TOL):
        raise ValueError(f"initial state is not normalized (norms {norms})")
    h = t_final / steps
    steps = int(steps)
    if isinstance(hamiltonian, HarmonicHamiltonian):
        n = hamiltonian.dimension
        amps = np.array(hamiltonian.amplitudes, dtype=complex).reshape(-1, n, n)
        freqs = np.array(hamiltonian.frequencies, dtype=float)
        static = np.ascontiguousarray(hamiltonian.static, dtype=complex)
        cols = psi.reshape(n, -1)
        out = _rk4_harmonic(static, amps, freqs, np.ascontiguousarray(cols), h, steps)
        return out.reshape(psi.shape)
    return _rk4_generic(hamiltonian, psi, h, steps)


def norm_drift(states: np.ndarray) -> float:
    """Largest ``| ||psi|| - 1 |`` over the columns of ``states``."""
    cols = np.asarray(states).reshape(states.shape[0], -1)
    return float(np.max(np.abs(np.linalg.norm(cols, axis=0) - 1)))


@dataclass(frozen=True)
class IntegrationReport:
    kind: DriveKind
    max_state_error: float
    norm_drift: float
    steps: int
    step_norm: float  # max ||H(t)|| * h, upper bound

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        for v in (self.max_state_error, self.norm_drift, self.step_norm):
            if not math.isfinite(v):
                raise ValueError("report fields must be finite")


def verify_kind(kind: DriveKind, atom, params: DriveParams, t: float, steps: int) -> IntegrationReport:
    """Compare the closed-form propagator of ``kind`` against RK4.

    The lab-frame Hamiltonian is integrated from ``Psi(0) = D(0)^{-1} Phi(0)``
    for the three (or two) basis vectors ``Phi(0)``; the result is compared
    column by column with ``U_k(t, 0) Phi(0)``.
    """
    kind = DriveKind(kind)
    ham = lab_hamiltonian_terms(kind, atom, params)
    d0 = frame_transform(kind, atom, params, 0.0)
    psi0 = d0.conj().T  # columns D(0)^{-1} e_j
    numeric = integrate(ham, psi0, t, steps)
    exact = segment_propagator(kind, atom, params, t)
    err = float(np.max(np.abs(numeric - exact)))
    return IntegrationReport(kind, err, norm_drift(numeric), int(steps), ham.norm_bound() * t / steps)


def steps_for(hamiltonian: HarmonicHamiltonian, t: float, step_norm: float = STEP_NORM) -> int:
    """Smallest step count with ``||H|| h <= step_norm``."""
    return max(1, math.ceil(hamiltonian.norm_bound() * t / step_norm))


@dataclass(frozen=True)
class RwaScanPoint:
    g: float
    g_over_omega: float
    infidelity: float

    def __post_init__(self):
        if self.g_over_omega < 0 or self.infidelity < 0:
            raise ValueError("scan values must be non-negative")


def full_cosine_hamiltonian(atom: TwoLevelAtom, g: float, phi: float) -> HarmonicHamiltonian:
    """``diag(E0, E1) + 2 g cos(omega t + phi) sigma1`` with ``omega = Delta``.

    The factor 2 makes the rotating-wave limit coincide with the drive
    ``g e^{+-i(omega t + phi)}`` used by the closed-form propagators.
    """
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    static = np.diag([atom.E0, atom.E1]).astype(complex)
    return HarmonicHamiltonian(static, (g * np.exp(1j * phi) * s1,), (atom.delta,))


def rwa_error_scan(
    atom: TwoLevelAtom,
    g_values: Sequence[float],
    phi: float = 0.0,
    t_final: float | None = None,
    step_norm: float = 0.002,
) -> list[RwaScanPoint]:
    """Infidelity of the rotating-wave solution against the full cosine drive.

    For each ``g`` the state ``(1, 0)`` is evolved under
    :func:`full_cosine_hamiltonian` by RK4 and under the closed-form
    TwoLevelU propagator; the point records ``1 - |<psi_full|psi_rwa>|^2``.
    With ``t_final=None`` each ``g`` uses its own pi/2 pulse, ``t = pi/(2g)``.
    ``g = 0`` gives exactly 0: ``(1, 0)`` is then stationary in both models.
    """
    if not isinstance(atom, TwoLevelAtom):
        raise TypeError("the RWA scan runs on a TwoLevelAtom")
    omega = atom.delta
    psi0 = np.array([1.0, 0.0], dtype=complex)
    out = []
    for g in g_values:
        g = float(g)
        if not (math.isfinite(g) and g >= 0):
            raise ValueError(f"g must be finite and >= 0, got {g}")
        if g == 0:
            out.append(RwaScanPoint(0.0, 0.0, 0.0))
            continue
        t = math.pi / (2 * g) if t_final is None else float(t_final)
        full = full_cosine_hamiltonian(atom, g, phi)
        psi_full = integrate(full, psi0, t, steps_for(full, t, step_norm))
        params = DriveParams(g1=g, phi1=phi)
        lab = segment_propagator(DriveKind.TWO_LEVEL_U, atom, params, t) @ frame_transform(
            DriveKind.TWO_LEVEL_U, atom, params, 0.0
        )
        psi_rwa = lab @ psi0
        infid = 1.0 - abs(np.vdot(psi_full, psi_rwa)) ** 2
        out.append(RwaScanPoint(g, g / omega, max(0.0, float(infid))))
    return out


def scan_to_csv(points: Sequence[RwaScanPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["g", "g_over_omega", "infidelity"])
    for p in points:
        w.writerow([format(p.g, ".17g"), format(p.g_over_omega, ".17g"), format(p.infidelity, ".17g")])
    return buf.getvalue()
