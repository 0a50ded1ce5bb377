"""Laguerre polynomials of a symmetric matrix argument.

These are finite sums over partitions of lower weight, with coefficients
given by generalized binomial coefficients.  The normalized variant is
orthonormal with respect to a Wishart weight; the exponentially damped
variant (``eigenfunction_L``) is an orthonormal basis of the L2 space of the
null Wishart distribution used by the goodness-of-fit spectrum machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, sqrt

import numpy as np

from .errors import DomainError
from .partitions import Partition, partitional_shifted_factorial
from .zonal import build_zonal_table, generalized_binomial

__all__ = [
    "LaguerreContext",
    "laguerre_L",
    "laguerre_normalized",
    "eigenfunction_L",
]


@dataclass(frozen=True)
class LaguerreContext:
    """Parameter pack for matrix Laguerre polynomials.

    ``gamma`` is the weight exponent (must exceed -1); ``m`` the dimension.
    The series parameter is ``gamma + (m+1)/2``.
    """

    gamma: float
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise DomainError("dimension m must be a positive integer")
        if not self.gamma > -1:
            raise DomainError(f"gamma must exceed -1, got {self.gamma}")

    @property
    def series_parameter(self) -> float:
        return self.gamma + (self.m + 1) / 2


def _eigs_of(y, m: int) -> np.ndarray:
    arr = np.asarray(y, dtype=float)
    if arr.ndim == 2:
        eigs = np.linalg.eigvalsh(0.5 * (arr + arr.T))
    else:
        eigs = np.atleast_1d(arr)
    if eigs.shape[0] != m:
        raise ValueError(f"argument dimension {eigs.shape[0]} does not match m={m}")
    return eigs


def laguerre_L(kappa, y, ctx: LaguerreContext) -> float:
    """Matrix Laguerre polynomial L_kappa at the symmetric argument ``y``.

    L_kappa(Y) = [g]_kappa C_kappa(I_m) sum_{s<=|kappa|} sum_{|sigma|=s}
    (kappa over sigma) C_sigma(-Y) / ([g]_sigma C_sigma(I_m)), with
    g = gamma + (m+1)/2.  At Y = 0 this equals [g]_kappa C_kappa(I_m).
    """
    kappa = Partition(kappa)
    if kappa.length > ctx.m:
        raise DomainError(
            f"kappa={tuple(kappa)} has more than m={ctx.m} parts; the "
            "polynomial is identically zero there and not a basis element"
        )
    g = ctx.series_parameter
    eigs = _eigs_of(y, ctx.m)
    table = build_zonal_table(ctx.m)
    neg = -eigs[None, :]

    total = 0.0
    for w in range(kappa.weight + 1):
        lay = table.layer(w)
        vals = lay.evaluate(neg)[:, 0]
        for sigma, c_sigma, c_id in zip(lay.parts, vals, lay.at_identity):
            b = generalized_binomial(kappa, sigma, ctx.m)
            if b == 0.0:
                continue
            total += b * c_sigma / (partitional_shifted_factorial(g, sigma) * c_id)
    lead = partitional_shifted_factorial(g, kappa) * table.layer(
        kappa.weight
    ).at_identity[table.layer(kappa.weight).parts.index(kappa)]
    return lead * total


def laguerre_value_at_zero(kappa, ctx: LaguerreContext) -> float:
    """Closed form L_kappa(0) = [g]_kappa C_kappa(I_m)."""
    kappa = Partition(kappa)
    lay = build_zonal_table(ctx.m).layer(kappa.weight)
    return partitional_shifted_factorial(ctx.series_parameter, kappa) * lay.at_identity[
        lay.parts.index(kappa)
    ]


def laguerre_normalized(kappa, y, ctx: LaguerreContext) -> float:
    """Laguerre polynomial normalized to unit norm under its Wishart weight:
    L_kappa(Y) / sqrt(|kappa|! L_kappa(0))."""
    kappa = Partition(kappa)
    norm = factorial(kappa.weight) * laguerre_value_at_zero(kappa, ctx)
    return laguerre_L(kappa, y, ctx) / sqrt(norm)


def eigenfunction_L(alpha: float, m: int, kappa, s) -> float:
    """Orthonormal eigenfunction of the null covariance operator.

    beta^{m alpha / 2} * etr((1-beta) S / 2) * normalized Laguerre at beta*S,
    where beta = sqrt((alpha+4)/alpha) and the Laguerre parameter is
    gamma = alpha - (m+1)/2.  The family over all partitions with at most
    ``m`` parts is an orthonormal basis of L2 of the null distribution.
    """
    if not alpha > (2 * m - 1) / 2:
        raise DomainError(
            f"alpha={alpha} must exceed (2m-1)/2 = {(2 * m - 1) / 2}"
        )
    beta = sqrt((alpha + 4.0) / alpha)
    ctx = LaguerreContext(gamma=alpha - (m + 1) / 2, m=m)
    eigs = _eigs_of(s, m)
    tr = float(np.sum(eigs))
    return (
        beta ** (m * alpha / 2.0)
        * np.exp((1.0 - beta) * tr / 2.0)
        * laguerre_normalized(kappa, beta * eigs, ctx)
    )


def laguerre_upper_bound(kappa, y, ctx: LaguerreContext) -> float:
    """The classical envelope etr(Y) [g]_kappa C_kappa(I_m), valid for SPD Y."""
    kappa = Partition(kappa)
    eigs = _eigs_of(y, ctx.m)
    return float(np.exp(np.sum(eigs))) * laguerre_value_at_zero(kappa, ctx)
