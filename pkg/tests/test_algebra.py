import cmath
import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from rabiqudit import algebra

TOL = 1e-12


def shift_by_loops(n):
    # e_k -> e_{k+1 mod n}, built entry by entry
    m = np.zeros((n, n), dtype=complex)
    for k in range(n):
        m[(k + 1) % n, k] = 1
    return m


def vandermonde_rows(n):
    # row 0 all ones, row j >= 1 holds powers of s^(n-j)
    s = cmath.exp(2j * math.pi / n)
    rows = [[1.0] * n] + [[(s ** (n - j)) ** k for k in range(n)] for j in range(1, n)]
    return np.array(rows) / math.sqrt(n)


@pytest.mark.parametrize("n", range(2, 9))
def test_generators_match_loop_oracles(n):
    s1, s3 = algebra.sigma_generators(n)
    s = cmath.exp(2j * math.pi / n)
    assert algebra.max_abs(s1 - shift_by_loops(n)) == 0
    assert algebra.max_abs(s3 - np.diag([s**k for k in range(n)])) <= TOL
    assert algebra.max_abs(algebra.walsh_hadamard(n) - vandermonde_rows(n)) <= 1e-12


def test_three_level_displays():
    # [PAPER] n = 3 displays with s = (-1 + i sqrt3)/2
    s = (-1 + 1j * math.sqrt(3)) / 2
    s1, s3 = algebra.sigma_generators(3)
    assert algebra.max_abs(s1 - np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]])) <= TOL
    assert algebra.max_abs(s3 - np.diag([1, s, s * s])) <= TOL
    w = np.array([[1, 1, 1], [1, s * s, s], [1, s, s * s]]) / math.sqrt(3)
    assert algebra.max_abs(algebra.walsh_hadamard(3) - w) <= TOL


def test_four_level_walsh_display():
    w4 = np.array([[1, 1, 1, 1], [1, -1j, -1, 1j], [1, -1, 1, -1], [1, 1j, -1, -1j]]) / 2
    assert algebra.max_abs(algebra.walsh_hadamard(4) - w4) <= TOL


def test_two_level_walsh_is_hadamard():
    h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    assert algebra.max_abs(algebra.walsh_hadamard(2) - h) <= TOL


def test_exchange():
    assert algebra.max_abs(algebra.exchange_matrix(2) - np.eye(2)) == 0
    k5 = algebra.exchange_matrix(5)
    for j in range(5):
        col = np.zeros(5)
        col[(-j) % 5] = 1
        assert np.array_equal(k5[:, j], col)


@pytest.mark.parametrize("n", [0, 1, 2.5, -3])
def test_bad_dimension(n):
    with pytest.raises(ValueError):
        algebra.sigma_generators(n)


@pytest.mark.parametrize("n", [3, 4])
def test_sigma_factorization(n):
    perms, phases = algebra.sigma_factorization(n)
    s1, s3 = algebra.sigma_generators(n)
    assert algebra.max_abs(algebra.product(perms) - s1) <= TOL
    assert algebra.max_abs(algebra.product(phases) - s3) <= TOL


def test_four_level_factor_displays():
    # [PAPER] the three transposition factors and the three phase factors
    i = 1j
    p03 = np.array([[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0]])
    p02 = np.array([[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]])
    p01 = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    perms, phases = algebra.sigma_factorization(4)
    for got, want in zip(perms, [p03, p02, p01]):
        assert algebra.max_abs(got - want) == 0
    for got, want in zip(phases, [np.diag([1, 1, 1, i**3]), np.diag([1, 1, i**2, 1]), np.diag([1, i, 1, 1])]):
        assert algebra.max_abs(got - want) <= TOL


def test_factorization_only_three_or_four():
    with pytest.raises(ValueError):
        algebra.sigma_factorization(5)


def test_pauli_relations():
    p = algebra.pauli_two_level()
    s1, s2, s3 = p["sigma1"], p["sigma2"], p["sigma3"]
    assert algebra.max_abs(s2 - 1j * s1 @ s3) <= TOL
    assert algebra.max_abs(p["sigma_plus"] - np.array([[0, 1], [0, 0]])) <= TOL
    assert algebra.max_abs(p["sigma_minus"] - np.array([[0, 0], [1, 0]])) <= TOL


def test_useful_matrices():
    assert algebra.max_abs(algebra.matrix_i() - np.diag([1, 1j, 1j])) == 0
    # [PAPER] F = 1 (+) e^{i pi/4} [[cos, -i sin], [-i sin, cos]](pi/4)
    e = cmath.exp(1j * math.pi / 4)
    c = math.cos(math.pi / 4)
    f = np.array([[1, 0, 0], [0, e * c, -1j * e * c], [0, -1j * e * c, e * c]])
    assert algebra.max_abs(algebra.matrix_f() - f) <= TOL
    algebra.check_unitary(algebra.matrix_f())


def test_permutation_rejects_non_permutation():
    with pytest.raises(ValueError):
        algebra.permutation_matrix([0, 0, 1])


def test_check_unitary():
    with pytest.raises(ValueError):
        algebra.check_unitary(np.ones((2, 3)))
    with pytest.raises(ValueError):
        algebra.check_unitary(np.diag([1.0, 2.0]))
    with pytest.raises(ValueError):
        algebra.check_unitary(np.array([[np.nan, 0], [0, 1]]))


def test_expm_non_hermitian_rejected():
    with pytest.raises(ValueError):
        algebra.expm_hermitian(np.array([[0, 1], [0, 0]]), 1.0)


@st.composite
def hermitian(draw, n=3):
    vals = draw(st.lists(st.floats(-5, 5), min_size=2 * n * n, max_size=2 * n * n))
    a = np.array(vals[: n * n]).reshape(n, n) + 1j * np.array(vals[n * n :]).reshape(n, n)
    return (a + a.conj().T) / 2


@settings(max_examples=60, deadline=None)
@given(hermitian(), st.floats(-3, 3))
def test_expm_matches_scipy(h, s):
    got = algebra.expm_hermitian(h, s)
    assert algebra.max_abs(got - scipy.linalg.expm(-1j * s * h)) <= 1e-10
    assert algebra.unitarity_error(got) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(hermitian(), st.floats(-math.pi, math.pi))
def test_fidelity_ignores_global_phase(h, gamma):
    u = algebra.expm_hermitian(h, 1.0)
    assert algebra.fidelity(u, cmath.exp(1j * gamma) * u) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_orthogonal_and_mismatch():
    s1, _ = algebra.sigma_generators(3)
    assert algebra.fidelity(np.eye(3), s1) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        algebra.fidelity(np.eye(2), np.eye(3))


def test_matrix_doc_round_trip():
    w = algebra.walsh_hadamard(3)
    doc = algebra.matrix_to_doc(w)
    assert doc["rows"] == 3 and len(doc["entries"]) == 9
    assert np.array_equal(algebra.matrix_from_doc(doc), w)
    with pytest.raises(ValueError):
        algebra.matrix_from_doc({"rows": 2, "cols": 2, "entries": [[1, 0]]})


def test_product_empty_needs_dimension():
    assert np.array_equal(algebra.product([], 2), np.eye(2))
    with pytest.raises(ValueError):
        algebra.product([])
