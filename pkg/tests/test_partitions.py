"""Integer partitions and partition-indexed factorials."""

import math

import pytest

from wishfit.errors import DomainError
from wishfit.partitions import (
    Partition,
    count_partitions,
    enumerate_partitions,
    generalized_binomial,
    log_partitional_shifted_factorial,
    partitional_shifted_factorial,
    partitions_upto,
    shifted_factorial,
)

# Partition counts with at most m parts; first column is weight 0.
COUNTS_M2 = [1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6]
COUNTS_M3 = [1, 1, 2, 3, 4, 5, 7, 8, 10, 12, 14]


def test_partition_basic_properties():
    p = Partition((3, 1))
    assert p.weight == 4
    assert p.length == 2


def test_partition_rejects_increasing_parts():
    with pytest.raises((ValueError, DomainError)):
        Partition((1, 2))


def test_enumeration_counts_match_m2():
    for k, want in enumerate(COUNTS_M2):
        assert len(enumerate_partitions(k, 2)) == want
        assert count_partitions(k, 2) == want


def test_enumeration_counts_match_m3():
    for k, want in enumerate(COUNTS_M3):
        assert len(enumerate_partitions(k, 3)) == want
        assert count_partitions(k, 3) == want


def test_enumeration_is_deterministic_and_decreasing():
    parts = enumerate_partitions(4, 3)
    assert parts[0] == Partition((4,))
    seen = set()
    for p in parts:
        t = tuple(p)
        assert t not in seen
        seen.add(t)
        assert all(t[i] >= t[i + 1] for i in range(len(t) - 1))
        assert sum(t) == 4
        assert len(t) <= 3


def test_partitions_upto_orders_by_weight_then_enumeration():
    flat = partitions_upto(3, 2)
    expect = []
    for k in range(4):
        expect.extend(enumerate_partitions(k, 2))
    assert list(flat) == expect


def test_shifted_factorial_values():
    # (a)_k = a (a+1) ... (a+k-1)
    assert shifted_factorial(2.5, 0) == 1.0
    assert shifted_factorial(2.5, 3) == pytest.approx(2.5 * 3.5 * 4.5, rel=1e-15)
    assert shifted_factorial(1.0, 5) == pytest.approx(math.factorial(5), rel=1e-15)


def test_partitional_shifted_factorial_hand_values():
    # product over rows i of (a - (i-1)/2)_{k_i}
    a = 3.0
    assert partitional_shifted_factorial(a, (2, 1)) == pytest.approx(
        (3.0 * 4.0) * 2.5, rel=1e-14
    )
    assert partitional_shifted_factorial(a, ()) == 1.0
    got = math.exp(log_partitional_shifted_factorial(a, (2, 1)))
    assert got == pytest.approx((3.0 * 4.0) * 2.5, rel=1e-12)


def test_partitional_shifted_factorial_single_row_recovers_scalar():
    assert partitional_shifted_factorial(1.7, (4,)) == pytest.approx(
        shifted_factorial(1.7, 4), rel=1e-14
    )


def test_generalized_binomial_base_cases():
    # Binomial against the empty partition is always 1; against itself is 1.
    assert generalized_binomial((2, 1), ()) == pytest.approx(1.0, rel=1e-12)
    assert generalized_binomial((2, 1), (2, 1)) == pytest.approx(1.0, rel=1e-12)


def test_generalized_binomial_against_single_box_is_weight():
    # The coefficient against the one-box partition equals |kappa|.
    for kappa in [(2,), (1, 1), (2, 1), (3, 1)]:
        assert generalized_binomial(kappa, (1,)) == pytest.approx(
            sum(kappa), rel=1e-10
        )
