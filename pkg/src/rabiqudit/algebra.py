"""Fixed gate matrices and dense complex-matrix helpers.

Every matrix is a plain ``numpy.ndarray`` of dtype ``complex128``.  The
generalized Pauli pair (shift ``Sigma1`` and clock ``Sigma3``), the
Vandermonde Walsh--Hadamard matrix, the exchange matrix, the two-level Pauli
set and the Gell-Mann subset used by the SU(3) Euler map live here, together
with the matrix exponential and the global-phase-insensitive fidelity that the
other modules build on.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

UNITARY_TOL = 1e-12
HERMITIAN_TOL = 1e-10


def primitive_root(n: int) -> complex:
    """Return ``exp(2 pi i / n)``."""
    _require_dim(n)
    return cmath.exp(2j * math.pi / n)


def _require_dim(n: int) -> None:
    if int(n) != n or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")


def max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def unitarity_error(u: np.ndarray) -> float:
    """Max-entry deviation of ``u^dagger u`` from the identity."""
    u = np.asarray(u)
    return max_abs(u.conj().T @ u - np.eye(u.shape[0]))


def check_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    """Validate a square, finite, unitary matrix and return it as complex128."""
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise ValueError("matrix has non-finite entries")
    err = unitarity_error(u)
    if err > tol:
        raise ValueError(f"matrix is not unitary (|U^dag U - 1|_max = {err:.3e})")
    return u


def sigma_generators(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Generalized Pauli matrices ``(Sigma1, Sigma3)`` of dimension ``n``.

    ``Sigma1`` is the cyclic shift with ones on the subdiagonal and in the
    top-right corner, so ``Sigma1 e_k = e_{k+1 mod n}``.  ``Sigma3`` is the
    clock ``diag(1, s, ..., s^(n-1))`` with ``s = exp(2 pi i / n)``.
    """
    _require_dim(n)
    shift = np.roll(np.eye(n, dtype=complex), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(n) / n))
    return shift, clock


def walsh_hadamard(n: int) -> np.ndarray:
    """Generalized Walsh--Hadamard (Vandermonde) matrix.

    Row 0 is all ones and row ``j >= 1`` holds the powers of ``s^(n-j)``,
    i.e. ``W[j, k] = s^(-j k) / sqrt(n)``.  With this row order
    ``W Sigma3 W^dagger = Sigma1`` and ``W^2`` is the exchange matrix.
    """
    _require_dim(n)
    j, k = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    # reduce the exponent mod n before exponentiating; keeps entries exact-ish
    expo = (-(j * k)) % n
    return np.exp(2j * np.pi * expo / n) / np.sqrt(n)


def exchange_matrix(n: int) -> np.ndarray:
    """Permutation fixing index 0 and reversing indices ``1..n-1``."""
    _require_dim(n)
    perm = [0] + list(range(n - 1, 0, -1))
    return permutation_matrix(perm)


def permutation_matrix(images: list[int]) -> np.ndarray:
    """Matrix sending basis vector ``e_k`` to ``e_{images[k]}``."""
    n = len(images)
    if sorted(images) != list(range(n)):
        raise ValueError(f"not a permutation: {images}")
    p = np.zeros((n, n), dtype=complex)
    p[images, np.arange(n)] = 1.0
    return p


def transposition(n: int, a: int, b: int) -> np.ndarray:
    images = list(range(n))
    images[a], images[b] = b, a
    return permutation_matrix(images)


def pauli_two_level() -> dict[str, np.ndarray]:
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    return {
        "sigma1": s1,
        "sigma2": s2,
        "sigma3": s3,
        "sigma_plus": (s1 + 1j * s2) / 2,
        "sigma_minus": (s1 - 1j * s2) / 2,
    }


def gell_mann_subset() -> dict[str, np.ndarray]:
    """The Gell-Mann matrices lambda2, lambda3, lambda5, lambda8."""
    return {
        "lambda2": np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]], dtype=complex),
        "lambda3": np.diag([1, -1, 0]).astype(complex),
        "lambda5": np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]], dtype=complex),
        "lambda8": np.diag([1, 1, -2]).astype(complex) / np.sqrt(3),
    }


def matrix_i() -> np.ndarray:
    """``diag(1, i, i)``, the auxiliary phase gate used to build W3."""
    return np.diag([1, 1j, 1j])


def matrix_f() -> np.ndarray:
    """``1 (+) e^{i pi/4} R`` with ``R = [[cos, -i sin], [-i sin, cos]](pi/4)``."""
    c = math.cos(math.pi / 4)
    block = cmath.exp(1j * math.pi / 4) * np.array([[c, -1j * c], [-1j * c, c]])
    f = np.eye(3, dtype=complex)
    f[1:, 1:] = block
    return f


def diag_phases(alpha: float, beta: float) -> np.ndarray:
    return np.diag([1.0, cmath.exp(1j * alpha), cmath.exp(1j * beta)])


def sigma_factorization(n: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Factor ``Sigma1(n)`` and ``Sigma3(n)`` into elementary gates.

    ``Sigma1`` becomes a product of transpositions ``P_{0,n-1} ... P_{0,1}``
    and ``Sigma3`` a product of single-level phase gates, highest level first.
    Multiplying each list left to right reproduces the generator.
    """
    if n not in (3, 4):
        raise ValueError(f"factorizations are provided for n = 3 or 4, got {n!r}")
    s = primitive_root(n)
    perms = [transposition(n, 0, k) for k in range(n - 1, 0, -1)]
    phases = []
    for k in range(n - 1, 0, -1):
        d = np.ones(n, dtype=complex)
        d[k] = s**k
        phases.append(np.diag(d))
    return perms, phases


def product(factors: list[np.ndarray], n: int | None = None) -> np.ndarray:
    """Left-to-right matrix product; identity of size ``n`` when empty."""
    if not factors:
        if n is None:
            raise ValueError("empty product needs an explicit dimension")
        return np.eye(n, dtype=complex)
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = out @ f
    return out


def is_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    h = np.asarray(h)
    return h.ndim == 2 and h.shape[0] == h.shape[1] and max_abs(h - h.conj().T) <= tol


def expm_hermitian(h: np.ndarray, s: float) -> np.ndarray:
    """``exp(-i s H)`` for hermitian ``H`` via its eigendecomposition."""
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise ValueError("expm_hermitian needs a hermitian matrix")
    # symmetrize so eigh sees exactly hermitian input
    evals, vecs = np.linalg.eigh((h + h.conj().T) / 2)
    return (vecs * np.exp(-1j * s * evals)) @ vecs.conj().T


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """Phase-insensitive overlap ``|tr(U^dagger V)| / n``.

    Equals 1 exactly when ``U = e^{i g} V`` for some real ``g``.
    """
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    n = u.shape[0]
    return min(1.0, abs(np.trace(u.conj().T @ v)) / n)


def matrix_to_doc(m: np.ndarray) -> dict:
    """Interchange form: ``{"rows", "cols", "entries": [[re, im], ...]}``."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError("only 2-D matrices can be exported")
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def matrix_from_doc(doc: dict) -> np.ndarray:
    rows, cols, entries = doc["rows"], doc["cols"], doc["entries"]
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    m = np.array([complex(re, im) for re, im in entries], dtype=complex)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix document has non-finite entries")
    return m.reshape(rows, cols)
