"""Integer partitions and shifted factorials.

Partitions index every series layer in this package.  The canonical
enumeration order, used everywhere a flat index is needed (operator matrices,
interlacing checks, serialized spectra), is: ascending total weight, and
within a weight the one-part partition (k) first followed by the remaining
partitions in descending lexicographic order, restricted to at most ``m``
parts.  For example with m >= 3 the sequence starts

    (), (1), (2), (1,1), (3), (2,1), (1,1,1), (4), (3,1), (2,2), (2,1,1), ...

(The empty partition has weight 0.)
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial, lgamma

__all__ = [
    "Partition",
    "enumerate_partitions",
    "count_partitions",
    "partitions_upto",
    "shifted_factorial",
    "partitional_shifted_factorial",
    "log_partitional_shifted_factorial",
    "generalized_binomial",
]


class Partition(tuple):
    """A partition: a non-increasing tuple of positive integers.

    The empty tuple represents the zero partition (weight 0).  Instances are
    plain tuples and therefore hashable and lexicographically comparable.
    """

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts if int(p) != 0)
        if any(p < 0 for p in parts):
            raise ValueError(f"partition parts must be positive, got {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be non-increasing, got {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        """Sum of the parts."""
        return sum(self)

    @property
    def length(self) -> int:
        """Number of (positive) parts."""
        return len(self)

    def __repr__(self) -> str:
        return f"Partition({tuple(self)})"


@lru_cache(maxsize=None)
def enumerate_partitions(k: int, m: int) -> tuple[Partition, ...]:
    """All partitions of weight ``k`` with at most ``m`` parts, in canonical
    order: (k) first, then descending lexicographic.

    ``k = 0`` yields the single empty partition.
    """
    if k < 0 or m < 0:
        raise ValueError("weight and part bound must be non-negative")
    out: list[Partition] = []

    def rec(remaining: int, max_part: int, slots: int, prefix: tuple[int, ...]):
        if remaining == 0:
            out.append(Partition(prefix))
            return
        if slots == 0:
            return
        # Largest feasible first part gives descending lexicographic order.
        for p in range(min(remaining, max_part), 0, -1):
            # The remaining slots must be able to absorb what is left.
            if remaining - p > p * (slots - 1):
                continue
            rec(remaining - p, p, slots - 1, prefix + (p,))

    rec(k, k, m, ())
    return tuple(out)


@lru_cache(maxsize=None)
def count_partitions(k: int, m: int) -> int:
    """Number of partitions of ``k`` into at most ``m`` parts."""
    if k < 0:
        raise ValueError("weight must be non-negative")
    if k == 0:
        return 1
    if m <= 0:
        return 0
    # Standard recurrence: p(k, m) = p(k, m-1) + p(k-m, m).
    return count_partitions(k, m - 1) + (count_partitions(k - m, m) if k >= m else 0)


def partitions_upto(max_weight: int, m: int) -> tuple[Partition, ...]:
    """Concatenated canonical enumeration over weights 0..max_weight."""
    seq: list[Partition] = []
    for k in range(max_weight + 1):
        seq.extend(enumerate_partitions(k, m))
    return tuple(seq)


def shifted_factorial(a: float, k: int) -> float:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.

    Computed by direct product so that non-positive ``a`` (finite products
    hitting zero or negative values) are handled exactly.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    out = 1.0
    for i in range(k):
        out *= a + i
    return out


def partitional_shifted_factorial(a: float, kappa) -> float:
    """Partition-indexed shifted factorial
    [a]_kappa = prod_j (a - (j-1)/2)_{kappa_j}."""
    out = 1.0
    for j, kj in enumerate(kappa):
        out *= shifted_factorial(a - 0.5 * j, kj)
    return out


def log_partitional_shifted_factorial(a: float, kappa) -> float:
    """log [a]_kappa, valid when every factor is positive
    (true whenever a > (len(kappa) - 1)/2).

    Uses log-gamma differences for stability at large weights.
    """
    out = 0.0
    for j, kj in enumerate(kappa):
        base = a - 0.5 * j
        if kj == 0:
            continue
        if base <= 0:
            raise ValueError(
                f"log form requires a - (j-1)/2 > 0 for all parts; "
                f"got a={a}, part index {j + 1}"
            )
        out += lgamma(base + kj) - lgamma(base)
    return out


def generalized_binomial(kappa, sigma, m: int | None = None) -> float:
    """Generalized binomial coefficient (kappa over sigma).

    Defined through the expansion of C_kappa(I + Y)/C_kappa(I) into the
    C_sigma(Y)/C_sigma(I) basis over all sigma of weight <= |kappa|.  Computed
    once per (kappa, m) by multipoint evaluation and a linear solve, then
    cached; see :mod:`wishfit.zonal` for the polynomial machinery.
    """
    from . import zonal  # deferred import; zonal depends on this module

    kappa = Partition(kappa)
    sigma = Partition(sigma)
    if m is None:
        m = max(kappa.length, sigma.length, 1)
    return zonal.generalized_binomial(kappa, sigma, m)


def multinomial_coefficient(kappa) -> float:
    """Coefficient of the monomial-symmetric term for ``kappa`` in
    (x_1 + ... + x_m)^{|kappa|}, namely |kappa|! / prod(kappa_j!)."""
    k = sum(kappa)
    num = factorial(k)
    for kj in kappa:
        num //= factorial(kj)
    return float(num)
