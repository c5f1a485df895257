"""Eight-angle Euler map onto SU(3) and a multi-start inverse fit.

``U = e^{i a L3} e^{i b L2} e^{i c L3} e^{i t L5} e^{i A L3} e^{i B L2}
e^{i C L3} e^{i f L8}`` with Gell-Mann matrices ``L2, L3, L5, L8``.  Each
factor has a short closed form, so :func:`su3_euler` never calls a generic
matrix exponential.

Canonical domains (documented, the fit only wraps the periodic angles):

==========================  ==================
``alpha, gamma, a, c``      ``[0, 2 pi)``
``beta, theta, b``          ``[0, pi]``
``phi``                     ``[0, sqrt(3) pi)``
==========================  ==================
"""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass

import numpy as np
from numba import njit
from scipy.optimize import minimize

from . import algebra

ANGLE_NAMES = ("alpha", "beta", "gamma", "theta", "a", "b", "c", "phi")
_PERIODIC = (0, 2, 4, 6)
_SPAN = np.array([2 * np.pi, np.pi, 2 * np.pi, np.pi, 2 * np.pi, np.pi, 2 * np.pi, math.sqrt(3) * np.pi])


@dataclass(frozen=True)
class EulerAngles:
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    theta: float = 0.0
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        for name, v in zip(ANGLE_NAMES, astuple(self)):
            if not math.isfinite(v):
                raise ValueError(f"Euler angle {name} must be finite, got {v}")

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, x) -> "EulerAngles":
        return cls(*(float(v) for v in x))


def _su2_block(alpha, beta, gamma) -> np.ndarray:
    """``e^{i alpha L3} e^{i beta L2} e^{i gamma L3}`` embedded in levels 0, 1."""
    cb, sb = math.cos(beta), math.sin(beta)
    out = np.eye(3, dtype=complex)
    out[0, 0] = np.exp(1j * (alpha + gamma)) * cb
    out[0, 1] = np.exp(1j * (alpha - gamma)) * sb
    out[1, 0] = -np.exp(-1j * (alpha - gamma)) * sb
    out[1, 1] = np.exp(-1j * (alpha + gamma)) * cb
    return out


def factor_matrices(angles: EulerAngles) -> list[np.ndarray]:
    """The eight one-parameter factors, leftmost first."""
    x = angles
    r3 = math.sqrt(3)
    e3 = lambda t: np.diag([np.exp(1j * t), np.exp(-1j * t), 1.0])  # noqa: E731
    e2 = lambda t: _su2_block(0.0, t, 0.0)  # noqa: E731
    ct, st = math.cos(x.theta), math.sin(x.theta)
    e5 = np.array([[ct, 0, st], [0, 1, 0], [-st, 0, ct]], dtype=complex)
    e8 = np.diag(np.exp(1j * x.phi * np.array([1 / r3, 1 / r3, -2 / r3])))
    return [e3(x.alpha), e2(x.beta), e3(x.gamma), e5, e3(x.a), e2(x.b), e3(x.c), e8]


def su3_euler(angles: EulerAngles) -> np.ndarray:
    """Special unitary matrix for the eight Euler angles."""
    x = angles
    r3 = math.sqrt(3)
    left = _su2_block(x.alpha, x.beta, x.gamma)
    right = _su2_block(x.a, x.b, x.c)
    ct, st = math.cos(x.theta), math.sin(x.theta)
    mid = np.array([[ct, 0, st], [0, 1, 0], [-st, 0, ct]], dtype=complex)
    phases = np.exp(1j * x.phi * np.array([1 / r3, 1 / r3, -2 / r3]))
    return (left @ mid @ right) * phases


def u3_extend(su3: np.ndarray, epsilon: float, delta: float) -> np.ndarray:
    """``diag(1, e^{i epsilon}, e^{i delta}) U`` for ``U`` in SU(3)."""
    return algebra.diag_phases(epsilon, delta) @ _check_special(su3)


def _check_special(u) -> np.ndarray:
    u = algebra.check_unitary(u, tol=1e-9)
    if u.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got {u.shape}")
    det = np.linalg.det(u)
    if abs(det - 1) > 1e-9:
        raise ValueError(f"matrix is not special unitary (det = {det:.6g})")
    return u


@dataclass
class EulerFit:
    angles: EulerAngles
    residual: float
    converged: bool
    starts: int


@njit(cache=True)
def _objective(x, target_h):
    # 1 - |tr(T^dag U)| / 3, same product as su3_euler written out by hand
    al, be, ga, th, a, b, c, ph = x
    left = np.zeros((3, 3), dtype=np.complex128)
    left[0, 0] = np.exp(1j * (al + ga)) * np.cos(be)
    left[0, 1] = np.exp(1j * (al - ga)) * np.sin(be)
    left[1, 0] = -np.exp(-1j * (al - ga)) * np.sin(be)
    left[1, 1] = np.exp(-1j * (al + ga)) * np.cos(be)
    left[2, 2] = 1.0
    right = np.zeros((3, 3), dtype=np.complex128)
    right[0, 0] = np.exp(1j * (a + c)) * np.cos(b)
    right[0, 1] = np.exp(1j * (a - c)) * np.sin(b)
    right[1, 0] = -np.exp(-1j * (a - c)) * np.sin(b)
    right[1, 1] = np.exp(-1j * (a + c)) * np.cos(b)
    right[2, 2] = 1.0
    mid = np.zeros((3, 3), dtype=np.complex128)
    mid[0, 0] = np.cos(th)
    mid[0, 2] = np.sin(th)
    mid[1, 1] = 1.0
    mid[2, 0] = -np.sin(th)
    mid[2, 2] = np.cos(th)
    u = left @ mid @ right
    r3 = np.sqrt(3.0)
    w = np.array([1 / r3, 1 / r3, -2 / r3])
    tr = 0j
    for i in range(3):
        for k in range(3):
            tr += target_h[k, i] * u[i, k] * np.exp(1j * ph * w[k])
    return 1.0 - abs(tr) / 3.0


def fit_su3_angles(
    u: np.ndarray,
    seed: int = 0,
    n_starts: int = 16,
    tol: float = 1e-8,
) -> EulerFit:
    """Recover Euler angles reproducing ``u`` up to a global phase.

    Runs Nelder-Mead from ``n_starts`` seeded starting points (the first one
    at the origin) and keeps the lowest residual, breaking ties
    lexicographically on the angle vector.  Stops early once a start reaches
    ``residual <= tol**2 / 10``.  ``converged`` reports whether the best
    residual satisfies ``1 - fidelity <= tol``.
    """
    u = _check_special(u)
    target_h = u.conj().T
    rng = np.random.default_rng(seed)
    starts = [np.zeros(8)] + [rng.uniform(0, _SPAN) for _ in range(n_starts - 1)]
    best_key, best_x, used = None, None, 0
    stop = tol * tol / 10
    for x0 in starts:
        used += 1
        f0 = _objective(x0, target_h)
        x, f = (x0, f0) if f0 <= stop else _polish(x0, target_h)
        key = (f, tuple(x))
        if best_key is None or key < best_key:
            best_key, best_x = key, x
        if f <= stop:
            break
    x = best_x.copy()
    x[list(_PERIODIC)] %= 2 * np.pi
    residual = max(0.0, float(_objective(x, target_h)))
    return EulerFit(EulerAngles.from_array(x), residual, residual <= tol, used)


def _polish(x0, target_h, rounds: int = 4):
    """Nelder-Mead with restarts from the previous optimum."""
    x, f = np.asarray(x0, dtype=float), math.inf
    for _ in range(rounds):
        res = minimize(
            _objective,
            x,
            args=(target_h,),
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-16, "maxfev": 8000, "adaptive": True},
        )
        improved = res.fun < f - 1e-18
        x, f = res.x, float(res.fun)
        if f < 1e-17 or not improved:
            break
    return x, f
