"""Matrix-argument Laguerre polynomials and operator eigenfunctions."""

import math

import numpy as np
import pytest
import scipy.special as sp

import wishfit as wf
from wishfit.laguerre import (
    LaguerreContext,
    eigenfunction_L,
    laguerre_L,
    laguerre_normalized,
    laguerre_upper_bound,
    laguerre_value_at_zero,
)
from wishfit.partitions import (
    enumerate_partitions,
    partitional_shifted_factorial,
    partitions_upto,
)
from wishfit.specialfn import BesselOrder, bessel_A2, multigamma
from wishfit.spectrum import beta_and_balpha
from wishfit.zonal import zonal_at_identity

from conftest import null_sample


def test_scalar_reduction_matches_scipy():
    # m = 1: the matrix convention equals k! times the classical polynomial.
    g = 1.3
    ctx = LaguerreContext(gamma=g, m=1)
    for k in range(5):
        for y in (0.2, 0.77, 3.1):
            got = laguerre_L((k,), np.array([[y]]), ctx)
            want = sp.eval_genlaguerre(k, g, y) * math.factorial(k)
            assert got == pytest.approx(want, rel=1e-10)


def test_value_at_zero_closed_form():
    # L_kappa(0) = C_kappa(I) [gamma + (m+1)/2]_kappa
    for m, g in [(2, 4.0), (3, 2.2)]:
        ctx = LaguerreContext(gamma=g, m=m)
        for k in range(5):
            for kappa in enumerate_partitions(k, m):
                want = zonal_at_identity(kappa, m) * partitional_shifted_factorial(
                    g + (m + 1) / 2.0, kappa
                )
                assert laguerre_value_at_zero(kappa, ctx) == pytest.approx(
                    want, rel=1e-12
                )
                got_series = laguerre_L(kappa, np.zeros((m, m)), ctx)
                assert got_series == pytest.approx(want, rel=1e-12)


def test_hand_value_single_box():
    # L_(1)(Y) = C_(1)(I)(gamma + (m+1)/2) - tr Y
    ctx = LaguerreContext(gamma=4.0, m=2)
    y = np.diag([1.0, 2.0])
    assert laguerre_L((1,), y, ctx) == pytest.approx(2 * 5.5 - 3.0, rel=1e-12)


def test_normalization_constant():
    # normalized = L / sqrt(k! L(0))
    ctx = LaguerreContext(gamma=2.5, m=2)
    kappa = (2, 1)
    y = np.diag([0.6, 1.9])
    denom = math.sqrt(math.factorial(3) * laguerre_value_at_zero(kappa, ctx))
    assert laguerre_normalized(kappa, y, ctx) == pytest.approx(
        laguerre_L(kappa, y, ctx) / denom, rel=1e-12
    )


def test_upper_bound_holds(rng):
    ctx = LaguerreContext(gamma=2.5, m=2)
    for kappa in [(1,), (2,), (2, 1), (3, 1)]:
        for _ in range(10):
            w = rng.uniform(0.05, 4.0, size=2)
            y = np.diag(np.sort(w)[::-1])
            assert abs(laguerre_L(kappa, y, ctx)) <= laguerre_upper_bound(
                kappa, y, ctx
            ) * (1 + 1e-12)


def test_orthonormality_under_conjugate_weight():
    # E[l_kappa(X) l_sigma(X)] = delta_{kappa sigma} for X drawn from the
    # matrix gamma weight with shape gamma + (m+1)/2 and unit rate.
    m, g = 2, 1.5
    alpha = g + (m + 1) / 2.0
    ctx = LaguerreContext(gamma=g, m=m)
    x = null_sample(alpha, m, 30000, seed=42)
    eigs = np.linalg.eigvalsh(x)
    parts = [p for p in partitions_upto(2, m)]
    vals = np.array(
        [[laguerre_normalized(p, np.diag(e), ctx) for p in parts] for e in eigs]
    )
    gram = vals.T @ vals / len(vals)
    se = 5.0 / math.sqrt(len(vals))
    for i in range(len(parts)):
        for j in range(len(parts)):
            want = 1.0 if i == j else 0.0
            assert abs(gram[i, j] - want) < 12 * se, (parts[i], parts[j], gram[i, j])


def test_poisson_bilinear_generating_identity():
    # Hille-Hardy type identity: the r-weighted bilinear sum of normalized
    # Laguerre polynomials collapses to a two-matrix Bessel function.
    m, alpha = 2, 5.0
    nu = alpha - (m + 1) / 2.0
    _, b = beta_and_balpha(alpha)
    r = b**4
    x = np.diag([0.7, 1.3])
    y = np.diag([0.4, 2.0])
    lhs = bessel_A2(-r * x / (1 - r) ** 2, y, BesselOrder(nu, m))
    ctx = LaguerreContext(gamma=nu, m=m)
    total = 0.0
    for k in range(30):
        layer = sum(
            laguerre_normalized(kap, x, ctx) * laguerre_normalized(kap, y, ctx)
            for kap in enumerate_partitions(k, m)
        )
        total += layer * r**k
        if k > 3 and abs(layer * r**k) < 1e-15 * abs(total):
            break
    rhs = (
        (1 - r) ** (m * alpha)
        * math.exp(r * (x.trace() + y.trace()) / (1 - r))
        / multigamma(alpha, m)
        * total
    )
    assert lhs == pytest.approx(rhs, rel=1e-6)


def test_eigenfunction_orthonormality_monte_carlo():
    # The operator eigenfunctions are orthonormal in L2 of the unit-rate
    # matrix gamma distribution with shape alpha.
    alpha, m = 3.0, 2
    t = null_sample(alpha, m, 30000, seed=7)
    eigs = np.linalg.eigvalsh(t)
    parts = [p for p in partitions_upto(2, m)]
    vals = np.array(
        [[eigenfunction_L(alpha, m, p, np.diag(e)) for p in parts] for e in eigs]
    )
    gram = vals.T @ vals / len(vals)
    for i in range(len(parts)):
        for j in range(len(parts)):
            want = 1.0 if i == j else 0.0
            se = np.std(vals[:, i] * vals[:, j], ddof=1) / math.sqrt(len(vals))
            assert abs(gram[i, j] - want) < 6 * se + 1e-3, (
                parts[i],
                parts[j],
                gram[i, j],
            )


def test_eigenfunction_rejects_small_shape():
    with pytest.raises(wf.DomainError):
        eigenfunction_L(1.0, 2, (1,), np.eye(2))
