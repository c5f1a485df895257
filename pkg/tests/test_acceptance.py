"""Acceptance criteria 1-7, each printing one pass/fail line.

Tolerances and runtime limits are the ones stated for the criteria; none of
them is loosened here.
"""

import cmath
import math
import time
import warnings

import numpy as np
import pytest
from scipy.stats import unitary_group

from rabiqudit import algebra
from rabiqudit.euler import EulerAngles, fit_su3_angles, su3_euler
from rabiqudit.numerics import rwa_error_scan, verify_kind
from rabiqudit.propagators import (
    THREE_LEVEL_KINDS,
    AtomSpec,
    DriveKind,
    DriveParams,
    TwoLevelAtom,
    analytic_propagator,
    analytic_propagator_two_couplings,
    vii_exponential,
)
from rabiqudit.synthesis import CATALOG, GateTarget, synthesize

I = 1j


def random_atom(rng):
    e0 = rng.uniform(0.5, 5)
    e1 = e0 + rng.uniform(1, 10)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return AtomSpec(e0, e1, e1 + rng.uniform(1, 10))


def closed_form_params(kind, rng, g):
    phi1, phi2, phi3 = rng.uniform(0, 2 * math.pi, 3)
    if kind is DriveKind.TYPE_VII:
        phi3 = phi1 + phi2
    return DriveParams(g, g, g, phi1, phi2, phi3)


def test_criterion_1_algebraic_identities(criterion):
    start = time.perf_counter()
    worst = 0.0
    for n in range(2, 9):
        s1, s3 = algebra.sigma_generators(n)
        w = algebra.walsh_hadamard(n)
        k = algebra.exchange_matrix(n)
        eye = np.eye(n)
        sig = algebra.primitive_root(n)
        checks = [
            np.linalg.matrix_power(s1, n) - eye,
            np.linalg.matrix_power(s3, n) - eye,
            s3 @ s1 - sig * s1 @ s3,
            w @ w - k,
            w.conj().T - k @ w,
            w.conj().T @ w - eye,
            w @ s3 @ w.conj().T - s1,
        ]
        worst = max(worst, *(algebra.max_abs(c) for c in checks))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 1.0
    assert criterion(1, ok, f"max deviation {worst:.2e}, {elapsed:.3f} s")


def test_criterion_2_paper_matrices(criterion):
    s = cmath.exp(2j * math.pi / 3)
    r2, r3 = math.sqrt(2), math.sqrt(3)
    c = math.cos(math.pi / 4)
    e = cmath.exp(I * math.pi / 4)
    perms4, phases4 = algebra.sigma_factorization(4)
    s1_4, s3_4 = algebra.sigma_generators(4)
    pairs = {
        "W2": (algebra.walsh_hadamard(2), np.array([[1, 1], [1, -1]]) / r2),
        "Sigma1(3)": (algebra.sigma_generators(3)[0], np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]])),
        "Sigma3(3)": (algebra.sigma_generators(3)[1], np.diag([1, s, s * s])),
        "W3": (algebra.walsh_hadamard(3), np.array([[1, 1, 1], [1, s * s, s], [1, s, s * s]]) / r3),
        "K3": (algebra.exchange_matrix(3), np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]])),
        "I": (algebra.matrix_i(), np.diag([1, I, I])),
        "F": (algebra.matrix_f(), np.array([[1, 0, 0], [0, e * c, -I * e * c], [0, -I * e * c, e * c]])),
        "P03": (perms4[0], np.array([[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0]])),
        "P02": (perms4[1], np.array([[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]])),
        "P01": (perms4[2], np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])),
        "Sigma1(4) product": (algebra.product(perms4), s1_4),
        "phase s^3": (phases4[0], np.diag([1, 1, 1, I**3])),
        "phase s^2": (phases4[1], np.diag([1, 1, I**2, 1])),
        "phase s": (phases4[2], np.diag([1, I, 1, 1])),
        "Sigma3(4) product": (algebra.product(phases4), s3_4),
        "W4": (algebra.walsh_hadamard(4), np.array([[1, 1, 1, 1], [1, -I, -1, I], [1, -1, 1, -1], [1, I, -1, -I]]) / 2),
    }
    errs = {name: algebra.max_abs(got - want) for name, (got, want) in pairs.items()}
    worst = max(errs, key=errs.get)
    ok = errs[worst] <= 1e-12
    assert criterion(2, ok, f"{len(pairs)} displays, worst {worst} at {errs[worst]:.2e}")


def test_criterion_3_analytic_vs_rk4(criterion):
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst, worst_step = 0.0, 0.0
    for kind in THREE_LEVEL_KINDS:
        for _ in range(20):
            atom = random_atom(rng)
            p = closed_form_params(kind, rng, rng.uniform(0.01, 1.0))
            t = rng.uniform(1.0, 30.0)
            r = verify_kind(kind, atom, p, t, 100_000)
            worst = max(worst, r.max_state_error)
            worst_step = max(worst_step, r.step_norm)
    ratios = []
    atom = AtomSpec(1.0, 6.0, 10.0)
    for kind in THREE_LEVEL_KINDS:
        p = closed_form_params(kind, rng, 0.5)
        e1 = verify_kind(kind, atom, p, 10.0, 1000).max_state_error
        e2 = verify_kind(kind, atom, p, 10.0, 2000).max_state_error
        ratios.append(e1 / e2)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and worst_step <= 0.01 and all(12 <= q <= 20 for q in ratios) and elapsed < 120
    detail = (f"max error {worst:.2e}, max ||H||h {worst_step:.4f}, "
              f"ratios {min(ratios):.2f}..{max(ratios):.2f}, {elapsed:.1f} s")
    assert criterion(3, ok, detail)


def test_criterion_4_coupling_reductions(criterion):
    rng = np.random.default_rng(44)
    red = 0.0
    for _ in range(100):
        atom = random_atom(rng)
        g, t = rng.uniform(0.01, 2.0), rng.uniform(0, 50)
        p = DriveParams(g, g, g, *rng.uniform(0, 2 * math.pi, 3))
        for kind in (DriveKind.TYPE_IV, DriveKind.TYPE_V, DriveKind.TYPE_VI):
            red = max(red, algebra.max_abs(
                analytic_propagator_two_couplings(kind, atom, p, t) - analytic_propagator(kind, atom, p, t)))
    vii_eq = 0.0
    for _ in range(100):
        atom = random_atom(rng)
        g, t = rng.uniform(0.01, 2.0), rng.uniform(0, 50)
        phi1, phi2 = rng.uniform(0, 2 * math.pi, 2)
        p = DriveParams(g, g, g, phi1, phi2, phi1 + phi2)
        vii_eq = max(vii_eq, algebra.max_abs(
            vii_exponential(atom, g, g, g, phi1, phi2, phi1 + phi2, t)
            - analytic_propagator(DriveKind.TYPE_VII, atom, p, t)))
    vii_rk4 = 0.0
    for _ in range(10):
        atom = random_atom(rng)
        g1, g2, g3 = rng.uniform(0.01, 1.0, 3)
        p = DriveParams(g1, g2, g3, *rng.uniform(0, 2 * math.pi, 3))
        vii_rk4 = max(vii_rk4, verify_kind(DriveKind.TYPE_VII, atom, p, rng.uniform(1, 30), 100_000).max_state_error)
    ok = red <= 1e-12 and vii_eq <= 1e-10 and vii_rk4 <= 1e-8
    assert criterion(4, ok, f"IV-VI reduction {red:.2e}, VII equal {vii_eq:.2e}, VII unequal vs RK4 {vii_rk4:.2e}")


def test_criterion_5_synthesis_suite(criterion):
    start = time.perf_counter()
    rng = np.random.default_rng(55)
    strict_worst, proj_worst = 0.0, 1.0
    for name in CATALOG:
        for _ in range(50):
            target = GateTarget(name, *rng.uniform(0, 2 * math.pi, 3))
            g = rng.uniform(0.01, 0.2)
            if target.dimension == 2:
                atom = TwoLevelAtom(rng.uniform(0.5, 5), rng.uniform(1, 10))
            else:
                atom = random_atom(rng)
            strict_worst = max(strict_worst, synthesize(target, atom, g, "Strict").max_error)
            proj_worst = min(proj_worst, synthesize(target, atom, g, "Projective").fidelity)
    atom = AtomSpec(1.0, 6.0, 10.0)
    p01 = synthesize(GateTarget("Perm01"), atom, 0.05).realized
    p02 = synthesize(GateTarget("Perm02"), atom, 0.05).realized
    prod = algebra.max_abs(p02 @ p01 - algebra.sigma_generators(3)[0])
    triple = algebra.max_abs(p02 @ p01 @ p02 - algebra.exchange_matrix(3))
    elapsed = time.perf_counter() - start
    ok = strict_worst <= 1e-8 and proj_worst >= 1 - 1e-9 and prod <= 1e-8 and triple <= 1e-8 and elapsed < 30
    detail = (f"strict max error {strict_worst:.2e}, projective min fidelity 1-{1 - proj_worst:.1e}, "
              f"Perm02.Perm01 {prod:.1e}, triple {triple:.1e}, {elapsed:.1f} s")
    assert criterion(5, ok, detail)


def test_criterion_6_su3(criterion):
    start = time.perf_counter()
    r3 = math.sqrt(3)
    b = math.pi / 2
    displays = [
        (EulerAngles(), np.eye(3)),
        (EulerAngles(alpha=b), np.diag([I, -I, 1])),
        (EulerAngles(beta=b), np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 1]])),
        (EulerAngles(beta=math.pi), np.diag([-1, -1, 1])),
        (EulerAngles(theta=b), np.array([[0, 0, 1], [0, 1, 0], [-1, 0, 0]])),
        (EulerAngles(theta=math.pi), np.diag([-1, 1, -1])),
        (EulerAngles(phi=r3 * b), np.diag([I, I, -1])),
        (EulerAngles(phi=r3 * math.pi), np.diag([-1, -1, 1])),
    ]
    disp = max(algebra.max_abs(su3_euler(a) - m) for a, m in displays)
    residuals, flagged = [], 0
    for seed in range(100):
        u = unitary_group.rvs(3, random_state=seed)
        u = u / np.linalg.det(u) ** (1 / 3)
        fit = fit_su3_angles(u, seed=seed)
        residuals.append(1 - algebra.fidelity(su3_euler(fit.angles), u))
        flagged += not fit.converged
    elapsed = time.perf_counter() - start
    ok = disp <= 1e-12 and max(residuals) <= 1e-6 and elapsed < 60
    detail = f"displays {disp:.1e}, max fit residual {max(residuals):.1e}, unconverged {flagged}, {elapsed:.1f} s"
    assert criterion(6, ok, detail)


# first-run values on TwoLevelAtom(E0=0, delta=1), phi=0, t = pi/(2g)
RWA_ANCHORS = {
    0.1: 0.0025609207147621049,
    0.01: 2.5006011425854346e-05,
    0.001: 2.5000101266936525e-07,
}


def test_criterion_7_rwa_scan(criterion):
    pts = rwa_error_scan(TwoLevelAtom(0.0, 1.0), [0.1, 0.01, 0.001])
    inf = [p.infidelity for p in pts]
    monotone = inf[0] > inf[1] > inf[2]
    anchored = all(p.infidelity == pytest.approx(RWA_ANCHORS[p.g], rel=1e-6) for p in pts)
    weak = inf[2] <= 1e-4
    ok = monotone and anchored and weak
    detail = ", ".join(f"g/w={p.g_over_omega:g}: {p.infidelity:.6e}" for p in pts)
    assert criterion(7, ok, detail + ("" if anchored else " (anchor mismatch)"))
