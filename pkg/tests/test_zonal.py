"""Zonal polynomials: hand values, classical identities, table layout."""

import math

import numpy as np
import pytest

from wishfit.errors import DomainError
from wishfit.partitions import (
    enumerate_partitions,
    generalized_binomial,
    partitional_shifted_factorial,
    shifted_factorial,
)
from wishfit.zonal import (
    build_zonal_table,
    log_zonal_at_identity,
    zonal_at_identity,
    zonal_value,
)

# Hand values from the power-sum expansions with the trace normalization
# sum_{|kappa|=k} C_kappa(Y) = (tr Y)^k:
#   C_(2)    = (p1^2 + 2 p2) / 3
#   C_(1,1)  = 2 (p1^2 - p2) / 3
#   C_(3)    = (p1^3 + 6 p1 p2 + 8 p3) / 15
#   C_(2,1)  = 3 (p1^3 + p1 p2 - 2 p3) / 5
# where p_r = tr Y^r.
HAND_IDENTITY = [
    # (kappa, m, value at the m-by-m identity)
    ((1,), 2, 2.0),
    ((2,), 2, 8.0 / 3.0),
    ((1, 1), 2, 4.0 / 3.0),
    ((2, 1), 2, 24.0 / 5.0),
    ((3,), 3, 7.0),
    ((2, 1), 3, 18.0),
    ((1, 1, 1), 3, 2.0),
]

HAND_DIAG12 = [
    # value at diag(1, 2): p1 = 3, p2 = 5, p3 = 9
    ((2,), 19.0 / 3.0),
    ((1, 1), 8.0 / 3.0),
    ((3,), 63.0 / 5.0),
    ((2, 1), 72.0 / 5.0),
]


def test_hand_values_at_identity():
    for kappa, m, want in HAND_IDENTITY:
        assert zonal_at_identity(kappa, m) == pytest.approx(want, rel=1e-12)
        assert zonal_value(kappa, np.eye(m)) == pytest.approx(want, rel=1e-12)


def test_log_identity_value_matches():
    for kappa, m, want in HAND_IDENTITY:
        assert math.exp(log_zonal_at_identity(kappa, m)) == pytest.approx(
            want, rel=1e-12
        )


def test_log_identity_rejects_too_many_rows():
    with pytest.raises(DomainError):
        log_zonal_at_identity((1, 1, 1), 2)


def test_hand_values_at_diag12():
    y = np.diag([1.0, 2.0])
    for kappa, want in HAND_DIAG12:
        assert zonal_value(kappa, y) == pytest.approx(want, rel=1e-12)


def test_too_long_partition_vanishes():
    assert zonal_value((1, 1, 1), np.diag([1.0, 2.0])) == 0.0


def test_trace_identity(rng):
    # sum over the layer of C_kappa(Y) equals (tr Y)^k
    for m in (2, 3):
        a = rng.standard_normal((m, m + 1))
        y = a @ a.T
        tr = np.trace(y)
        for k in range(7):
            total = sum(zonal_value(kappa, y) for kappa in enumerate_partitions(k, m))
            assert total == pytest.approx(tr**k, rel=1e-10)


def test_homogeneity(rng):
    y = np.diag([0.4, 1.7])
    for kappa in [(2,), (2, 1), (3, 1)]:
        k = sum(kappa)
        assert zonal_value(kappa, 2.5 * y) == pytest.approx(
            2.5**k * zonal_value(kappa, y), rel=1e-12
        )


def test_factorial_layer_sum():
    # sum_{|kappa|=k} [a]_kappa C_kappa(I_m) = (m a)_k, from the binomial
    # generating identity det(I - tY)^(-a) expanded at Y = I.
    for m, a in [(2, 2.7), (3, 2.7), (3, 5.25)]:
        for k in range(9):
            total = sum(
                partitional_shifted_factorial(a, kappa) * zonal_at_identity(kappa, m)
                for kappa in enumerate_partitions(k, m)
            )
            assert total == pytest.approx(shifted_factorial(m * a, k), rel=1e-10)


def test_binomial_expansion_of_shifted_argument():
    # C_kappa(I + Y)/C_kappa(I) = sum_sigma binom(kappa, sigma)
    #                             C_sigma(Y)/C_sigma(I).
    m = 2
    y = np.diag([0.3, 0.9])
    for kappa in [(2,), (1, 1), (2, 1)]:
        k = sum(kappa)
        lhs = zonal_value(kappa, np.eye(m) + y) / zonal_at_identity(kappa, m)
        rhs = 0.0
        for s in range(k + 1):
            for sigma in enumerate_partitions(s, m):
                c_sig = zonal_at_identity(sigma, m)
                if c_sig == 0.0:
                    continue
                rhs += (
                    generalized_binomial(kappa, sigma)
                    * zonal_value(sigma, y)
                    / c_sig
                )
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_table_layers_and_vectorized_rows():
    table = build_zonal_table(2, 3)
    lay = table.layer(2)
    assert tuple(tuple(p) for p in lay.parts) == ((2,), (1, 1))
    rows = np.array([[1.0, 2.0], [1.0, 1.0]])
    vals = table.layer_values(2, rows)
    assert vals.shape == (2, 2)
    assert vals[0, 0] == pytest.approx(19.0 / 3.0, rel=1e-12)
    assert vals[1, 0] == pytest.approx(8.0 / 3.0, rel=1e-12)
    assert vals[0, 1] == pytest.approx(8.0 / 3.0, rel=1e-12)
    assert vals[1, 1] == pytest.approx(4.0 / 3.0, rel=1e-12)


def test_table_grows_on_demand():
    table = build_zonal_table(2, 0)
    vals = table.layer_values(4, np.array([[1.0, 1.0]]))
    assert vals.shape[0] == 3  # three partitions of 4 with at most 2 parts
    assert vals.sum() == pytest.approx(2.0**4, rel=1e-10)
