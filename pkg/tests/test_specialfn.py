"""Matrix-argument special functions against scalar reductions and identities."""

import math

import numpy as np
import pytest
import scipy.special as sp

from wishfit.errors import DomainError, SeriesNonConvergenceError
from wishfit.linalg import SeriesControl
from wishfit.specialfn import (
    BesselOrder,
    bessel_A,
    bessel_A2,
    hyp1F1,
    hyp1F1_2,
    log_multigamma,
    multidigamma,
    multigamma,
)

from conftest import random_spd


def test_multigamma_closed_values():
    # Gamma_2(3) = pi^(1/2) Gamma(3) Gamma(5/2) = 3 pi / 2
    assert multigamma(3.0, 2) == pytest.approx(1.5 * math.pi, rel=1e-13)
    assert multigamma(2.0, 1) == pytest.approx(1.0, rel=1e-14)


def test_multigamma_product_formula():
    for a, m in [(3.2, 2), (4.5, 3), (2.1, 4)]:
        want = math.pi ** (m * (m - 1) / 4.0) * np.prod(
            [sp.gamma(a - i / 2.0) for i in range(m)]
        )
        assert multigamma(a, m) == pytest.approx(want, rel=1e-12)
        assert log_multigamma(a, m) == pytest.approx(math.log(want), rel=1e-12)


def test_multigamma_domain():
    with pytest.raises(DomainError):
        multigamma(0.9, 3)  # requires a > (m-1)/2


def test_multidigamma_sum_formula():
    for a, m in [(3.2, 2), (4.5, 3)]:
        want = sum(sp.psi(a - i / 2.0) for i in range(m))
        assert multidigamma(a, m) == pytest.approx(want, rel=1e-12)


def test_bessel_scalar_reduction():
    # m = 1: A_nu(y) = y^(-nu/2) J_nu(2 sqrt(y))
    for nu, y in [(1.7, 0.83), (0.5, 2.4), (3.0, 0.1)]:
        got = bessel_A(np.array([[y]]), BesselOrder(nu, 1))
        want = y ** (-nu / 2.0) * sp.jv(nu, 2.0 * math.sqrt(y))
        assert got == pytest.approx(want, rel=1e-11)


def test_bessel_scaled_multiplies_by_multigamma():
    nu, m = 2.3, 2
    alpha = nu + (m + 1) / 2.0
    y = np.diag([0.4, 1.1])
    plain = bessel_A(y, BesselOrder(nu, m))
    scaled = bessel_A(y, BesselOrder(nu, m), scaled=True)
    assert scaled == pytest.approx(multigamma(alpha, m) * plain, rel=1e-12)


def test_bessel_at_zero():
    nu, m = 2.3, 2
    alpha = nu + (m + 1) / 2.0
    got = bessel_A(np.zeros((m, m)), BesselOrder(nu, m))
    assert got == pytest.approx(1.0 / multigamma(alpha, m), rel=1e-12)


def test_bessel_order_validation():
    with pytest.raises(DomainError):
        BesselOrder(-0.2, 2)  # requires nu > (m-2)/2


def test_two_matrix_bessel_symmetry(rng):
    o = BesselOrder(2.3, 2)
    x = random_spd(2, rng)
    y = random_spd(2, rng)
    assert bessel_A2(x, y, o) == pytest.approx(bessel_A2(y, x, o), rel=1e-12)


def test_two_matrix_bessel_collapses_at_identity(rng):
    o = BesselOrder(2.3, 2)
    x = random_spd(2, rng)
    assert bessel_A2(x, np.eye(2), o) == pytest.approx(bessel_A(x, o), rel=1e-11)


def test_scaled_kernel_bound(rng):
    # |Gamma_m(alpha) A_nu(X, Y)| <= 1 for positive semidefinite arguments
    nu, m = 1.5, 2
    o = BesselOrder(nu, m)
    for _ in range(25):
        x = random_spd(m, rng, scale=3.0)
        y = random_spd(m, rng, scale=3.0)
        assert abs(bessel_A2(x, y, o, scaled=True)) <= 1.0 + 1e-12


def test_kummer_identity(rng):
    # 1F1(a; c; Y) = etr(Y) 1F1(c - a; c; -Y)
    y = np.diag([0.5, 0.9])
    a, c = 1.3, 3.6
    lhs = hyp1F1(a, c, y)
    rhs = math.exp(np.trace(y)) * hyp1F1(c - a, c, -y)
    assert lhs == pytest.approx(rhs, rel=1e-8)


def test_hyp1f1_equal_parameters_is_exponential():
    y = np.diag([0.3, 1.2])
    assert hyp1F1(2.4, 2.4, y) == pytest.approx(math.exp(np.trace(y)), rel=1e-11)


def test_hyp1f1_scalar_reduction():
    a, c, y = 1.3, 2.9, 0.7
    got = hyp1F1(a, c, np.array([[y]]))
    assert got == pytest.approx(sp.hyp1f1(a, c, y), rel=1e-11)


def test_two_matrix_hyp1f1_collapses_at_identity():
    a, c = 1.3, 3.6
    y = np.diag([0.5, 0.9])
    got = hyp1F1_2(a, c, y, np.eye(2))
    assert got == pytest.approx(hyp1F1(a, c, y), rel=1e-10)


def test_series_hard_cap_raises():
    ctrl = SeriesControl(max_weight=3, hard_cap=3)
    with pytest.raises(SeriesNonConvergenceError):
        hyp1F1(2.0, 4.0, np.diag([9.0, 11.0]), ctrl=ctrl)
