"""Acceptance gate: one test per shipping criterion, tolerances pinned.

Run with ``pytest -v tests/test_acceptance.py`` for a pass/fail line per
criterion. Criterion 2 is split so the known-open reference discrepancy for
the l=145 stress term stays isolated in its own red test.
"""

import cmath
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import GOLDEN_DIR, rel
from whitadd.cli import _golden_compare
from whitadd.green import (
    CoulombParams,
    SphericalPoint,
    density_polynomial,
    gauss_laguerre_integral,
    hostler_green,
    partial_wave_green,
    radial_norm,
)
from whitadd.identities import (
    coefficient_delta_sum,
    geometry_from,
    geometry_from_cosine,
    verify_laguerre_addition,
    verify_laguerre_symmetric,
    verify_lemma_binomial,
    verify_m_gegenbauer_sum,
    verify_w_downward_sum,
    verify_whittaker_addition,
)

GRID_KAPPAS = (-0.7, 0.3 + 0.4j, 2.5)
GRID_R0 = (0.5, 1.0)
GRID_R = (2.0, 5.0)
GRID_GAMMAS = (0.0, math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi)


def test_criterion1_addition_grid():
    # full-angle addition theorem: rel <= 1e-9 at every grid point, < 1 s each
    worst_rel, worst_time = 0.0, 0.0
    for kappa in GRID_KAPPAS:
        for r0 in GRID_R0:
            for r in GRID_R:
                for gamma in GRID_GAMMAS:
                    t0 = time.perf_counter()
                    rep = verify_whittaker_addition(kappa, geometry_from(r, r0, gamma))
                    worst_time = max(worst_time, time.perf_counter() - t0)
                    worst_rel = max(worst_rel, rep.rel_err)
    assert worst_rel <= 1e-9, f"worst rel {worst_rel:.3e}"
    assert worst_time < 1.0, f"slowest point {worst_time:.2f}s"


@settings(max_examples=10, deadline=None)
@given(
    kappa=st.floats(min_value=-1.5, max_value=0.6),
    r0=st.floats(min_value=0.3, max_value=1.0),
    scale=st.floats(min_value=2.0, max_value=4.0),
    gamma=st.floats(min_value=0.0, max_value=math.pi),
)
def test_criterion1_addition_property(kappa, r0, scale, gamma):
    rep = verify_whittaker_addition(kappa, geometry_from(r0 * scale, r0, gamma))
    assert rep.rel_err <= 1e-9


def test_criterion2_stress_t0(stress):
    assert float(f"{stress['t0']:.6g}") == 1.07239e7


def test_criterion2_stress_t145(stress):
    # The six-figure reference for the l=145 normalized term does not match
    # direct extended-precision summation, which gives 3215.8303...; the
    # reference is kept as stated, so this test is expected to stay red until
    # the discrepancy is resolved. The true-value check lives in
    # test_identities.test_pi_addition_large_order_stress.
    assert float(f"{stress['t145']:.6g}") == 3214.65


def test_criterion2_stress_normalized_sum(stress):
    assert abs(stress["normalized_sum"] - 1.0) <= 1e-6


def test_criterion2_stress_surrogate_drop(stress):
    assert stress["surrogate_drop_l"] == 168


def test_criterion3_downward_sum_grid():
    worst = 0.0
    for n in range(11):
        for mu in (0.3, 1.0, 2.5):
            for kappa in (-1.2, 0.7 + 0.3j):
                for r in (0.8, 3.0, 12.0):
                    worst = max(worst, verify_w_downward_sum(n, kappa, mu, r).rel_err)
    assert worst <= 1e-10, f"worst rel {worst:.3e}"
    for n in range(21):
        assert coefficient_delta_sum(n, Fraction(3, 4)) == (1 if n == 0 else 0)


def test_criterion4_laguerre_addition():
    ge = geometry_from_cosine(Fraction(3, 2), Fraction(1, 2), Fraction(1))
    for n in range(1, 13):
        rep = verify_laguerre_addition(n, ge)
        assert rep.exact and rep.residual == 0, f"n={n} residual {rep.residual}"
    repc = verify_laguerre_symmetric(8, 0.7 + 0.2j, 1.1 - 0.4j, variant="pi")
    assert repc.rel_err <= 1e-11


def test_criterion5_lemma_exact():
    for nu in (Fraction(1, 3), Fraction(1), Fraction(7, 3), Fraction(11, 2)):
        for N in range(51):
            rep = verify_lemma_binomial(N, nu)
            assert rep.exact and rep.residual == 0, f"N={N} nu={nu}"


def test_criterion6_green_cross_method():
    pts = [SphericalPoint(3.0, 0.4, 0.0), SphericalPoint(1.2, 2.2, 5.1),
           SphericalPoint(0.6, 1.57, 3.0)]
    t0 = time.perf_counter()
    worst = 0.0
    for g in (0.5, 1.0, 2.3):
        for k in (0.4, 0.9, 1.7):
            cp = CoulombParams(g, k)
            # positive-integer kappa sits on a bound-state pole of both routes
            if abs(cp.kappa - round(cp.kappa)) < 1e-3 and round(cp.kappa) >= 1:
                continue
            for i, pa in enumerate(pts):
                pb = pts[(i + 1) % 3]
                hv = hostler_green(cp, pa, pb)
                pw = partial_wave_green(cp, pa, pb)
                worst = max(worst, rel(pw.value, hv))
    elapsed = time.perf_counter() - t0
    assert worst <= 1e-7, f"worst rel {worst:.3e}"
    assert elapsed < 30.0, f"grid took {elapsed:.1f}s"


def test_criterion7_density_integrals():
    for n in range(1, 7):
        assert radial_norm(n, 1.9) == pytest.approx(n * n, rel=1e-8)
        v = gauss_laguerre_integral(
            lambda t: np.array([ti * ti * density_polynomial(n, ti) for ti in t]))
        assert v == pytest.approx(2 * n ** 3, rel=1e-8)


def test_criterion8_m_gegenbauer_grid():
    worst = 0.0
    for kappa in (0.0, 1.1):
        for mu in (0.8, 2.0):
            for z in (1.5, 1.5 + 0.5j):
                for gamma in (0.0, math.pi / 3, math.pi):
                    rep = verify_m_gegenbauer_sum(kappa, mu, z, gamma)
                    worst = max(worst, rep.rel_err)
                    if gamma == math.pi:
                        # antipodal angle leaves a bare exponential
                        assert rel(rep.rhs, cmath.exp(-z / 2)) < 1e-12
    assert worst <= 1e-9, f"worst rel {worst:.3e}"
    # half-unit order reduces the weight to Legendre polynomials
    assert verify_m_gegenbauer_sum(1.1, 0.5, 1.5, math.pi / 3).rel_err <= 1e-9


def test_criterion9_golden_reproducible():
    assert _golden_compare(str(GOLDEN_DIR)) == 0
