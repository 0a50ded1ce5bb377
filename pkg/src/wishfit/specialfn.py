"""Special functions of one or two symmetric matrix arguments.

Everything here is an orthogonally invariant power series in zonal
polynomials, summed by total weight layer with the adaptive truncation policy
of :class:`wishfit.linalg.SeriesControl`: the series stops once two
consecutive layer contributions fall below both the absolute tolerance and the
relative tolerance times the partial sum, and raises
:class:`wishfit.errors.SeriesNonConvergenceError` (carrying the partial value)
if the weight cap is reached first.  Arguments with Frobenius norm above 50
trigger a :class:`wishfit.errors.SeriesAccuracyWarning`.

Matrix arguments may be passed either as full symmetric matrices or as 1-D
vectors of eigenvalues; all series depend on the spectrum only.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import lgamma, pi

import numpy as np
from scipy.special import digamma

from .errors import DomainError, SeriesAccuracyWarning, SeriesNonConvergenceError
from .linalg import SeriesControl
from .partitions import (
    enumerate_partitions,
    partitional_shifted_factorial,
)
from .zonal import build_zonal_table

__all__ = [
    "BesselOrder",
    "multigamma",
    "log_multigamma",
    "multidigamma",
    "bessel_A",
    "bessel_A2",
    "hyp1F1",
    "hyp1F1_2",
]

#: Frobenius norm beyond which series accuracy degrades enough to warn.
LARGE_ARGUMENT_NORM = 50.0


@dataclass(frozen=True)
class BesselOrder:
    """Order of the matrix-argument Bessel function of dimension ``m``.

    The associated series parameter is ``a = nu + (m+1)/2``; convergence of
    all operations requires ``nu > (m-2)/2`` so that ``a > (m-1)/2``.
    """

    nu: float
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise DomainError("dimension m must be a positive integer")
        if not self.nu > (self.m - 2) / 2:
            raise DomainError(
                f"order nu={self.nu} must exceed (m-2)/2 = {(self.m - 2) / 2}"
            )

    @property
    def series_parameter(self) -> float:
        return self.nu + (self.m + 1) / 2


def log_multigamma(a: float, m: int) -> float:
    """log of the multivariate gamma function of dimension ``m``.

    Defined for a > (m-1)/2; a pole (or the domain boundary) raises
    :class:`DomainError`.
    """
    if m < 1:
        raise DomainError("dimension m must be a positive integer")
    if not a > (m - 1) / 2:
        raise DomainError(
            f"multivariate gamma requires a > (m-1)/2 = {(m - 1) / 2}, got {a}"
        )
    out = 0.25 * m * (m - 1) * np.log(pi)
    for j in range(m):
        out += lgamma(a - 0.5 * j)
    return float(out)


def multigamma(a: float, m: int) -> float:
    """Multivariate gamma function of dimension ``m``."""
    return float(np.exp(log_multigamma(a, m)))


def multidigamma(a: float, m: int) -> float:
    """Multivariate digamma: d/da log multigamma = sum_j psi(a - (j-1)/2)."""
    if m < 1:
        raise DomainError("dimension m must be a positive integer")
    if not a > (m - 1) / 2:
        raise DomainError(
            f"multivariate digamma requires a > (m-1)/2 = {(m - 1) / 2}, got {a}"
        )
    return float(sum(digamma(a - 0.5 * j) for j in range(m)))


def _eigs_of(y, m: int | None = None) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, or a pass-through eigenvalue vector."""
    arr = np.asarray(y, dtype=float)
    if arr.ndim == 2:
        if arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        eigs = np.linalg.eigvalsh(0.5 * (arr + arr.T))
    elif arr.ndim <= 1:
        eigs = np.atleast_1d(arr)
    else:
        raise ValueError(f"expected a matrix or eigenvalue vector, got ndim={arr.ndim}")
    if m is not None and eigs.shape[0] != m:
        raise ValueError(f"argument dimension {eigs.shape[0]} does not match m={m}")
    return eigs


def _warn_if_large(*eig_vectors) -> None:
    for eigs in eig_vectors:
        norm = float(np.sqrt(np.sum(eigs**2)))
        if norm > LARGE_ARGUMENT_NORM:
            warnings.warn(
                f"series argument has Frobenius norm {norm:.1f} > "
                f"{LARGE_ARGUMENT_NORM:g}; result accuracy may be degraded",
                SeriesAccuracyWarning,
                stacklevel=3,
            )


def _sum_by_layers(layer_term, ctrl: SeriesControl, what: str) -> float:
    """Adaptive weight-layer summation with the two-quiet-layers stop rule."""
    total = 0.0
    quiet = 0
    for k in range(ctrl.max_weight + 1):
        t = layer_term(k)
        total += t
        if abs(t) <= ctrl.abs_tol and abs(t) <= ctrl.rel_tol * max(abs(total), 1e-300):
            quiet += 1
            if quiet >= 2:
                return total
        else:
            quiet = 0
    raise SeriesNonConvergenceError(
        f"{what} did not converge within weight {ctrl.max_weight} "
        f"(partial value {total:.6e})",
        partial_value=total,
        weight_reached=ctrl.max_weight,
    )


def bessel_A(y, order: BesselOrder, ctrl: SeriesControl | None = None,
             *, scaled: bool = False) -> float:
    """Matrix-argument Bessel function of one symmetric argument.

    Series over partitions: (1/Gamma_m(a)) sum_k ((-1)^k / k!)
    sum_{|kappa|=k} C_kappa(Y) / [a]_kappa with a = nu + (m+1)/2.

    With ``scaled=True`` the leading 1/Gamma_m(a) factor is dropped (useful at
    large ``a`` where the plain value would underflow); the scaled value at
    Y = 0 is exactly 1.
    """
    ctrl = ctrl or SeriesControl()
    eigs = _eigs_of(y, order.m)
    _warn_if_large(eigs)
    a = order.series_parameter
    table = build_zonal_table(order.m)
    row = eigs[None, :]

    log_kfac = 0.0

    def layer(k: int) -> float:
        nonlocal log_kfac
        if k > 0:
            log_kfac += np.log(k)
        vals = table.layer_values(k, row)[:, 0]
        denom = np.array(
            [partitional_shifted_factorial(a, kap)
             for kap in enumerate_partitions(k, order.m)]
        )
        return (-1.0) ** k * np.exp(-log_kfac) * float(np.sum(vals / denom))

    total = _sum_by_layers(layer, ctrl, "bessel series")
    if scaled:
        return total
    return total * float(np.exp(-log_multigamma(a, order.m)))


def bessel_A2(x, y, order: BesselOrder, ctrl: SeriesControl | None = None,
              *, scaled: bool = False) -> float:
    """Matrix-argument Bessel function of two symmetric arguments.

    Series (1/Gamma_m(a)) sum_k ((-1)^k/k!) sum_{|kappa|=k}
    C_kappa(X) C_kappa(Y) / ([a]_kappa C_kappa(I_m)); symmetric in (X, Y), and
    equal to the one-argument function when Y = I_m.  ``scaled=True`` drops
    the 1/Gamma_m(a) prefactor.
    """
    ctrl = ctrl or SeriesControl()
    ex = _eigs_of(x, order.m)
    ey = _eigs_of(y, order.m)
    _warn_if_large(ex, ey)
    a = order.series_parameter
    table = build_zonal_table(order.m)
    rx = ex[None, :]
    ry = ey[None, :]

    log_kfac = 0.0

    def layer(k: int) -> float:
        nonlocal log_kfac
        if k > 0:
            log_kfac += np.log(k)
        lay = table.layer(k)
        vx = lay.evaluate(rx)[:, 0]
        vy = lay.evaluate(ry)[:, 0]
        denom = lay.at_identity * np.array(
            [partitional_shifted_factorial(a, kap) for kap in lay.parts]
        )
        return (-1.0) ** k * np.exp(-log_kfac) * float(np.sum(vx * vy / denom))

    total = _sum_by_layers(layer, ctrl, "two-argument bessel series")
    if scaled:
        return total
    return total * float(np.exp(-log_multigamma(a, order.m)))


def hyp1F1(a: float, b: float, y, ctrl: SeriesControl | None = None,
           m: int | None = None) -> float:
    """Confluent hypergeometric function of one symmetric matrix argument:
    sum_k (1/k!) sum_{|kappa|=k} ([a]_kappa / [b]_kappa) C_kappa(Y)."""
    ctrl = ctrl or SeriesControl()
    eigs = _eigs_of(y, m)
    mm = eigs.shape[0]
    _warn_if_large(eigs)
    table = build_zonal_table(mm)

    log_kfac = 0.0

    def layer(k: int) -> float:
        nonlocal log_kfac
        if k > 0:
            log_kfac += np.log(k)
        lay = table.layer(k)
        vals = lay.evaluate(eigs[None, :])[:, 0]
        acc = 0.0
        for kap, c in zip(lay.parts, vals):
            den = partitional_shifted_factorial(b, kap)
            if den == 0.0:
                raise DomainError(
                    f"hypergeometric denominator [b]_kappa vanishes for "
                    f"kappa={tuple(kap)}, b={b}"
                )
            acc += partitional_shifted_factorial(a, kap) / den * c
        return np.exp(-log_kfac) * acc

    return _sum_by_layers(layer, ctrl, "1F1 series")


def hyp1F1_2(a: float, b: float, x, y, ctrl: SeriesControl | None = None,
             m: int | None = None) -> float:
    """Two-argument confluent hypergeometric function:
    sum_k (1/k!) sum_kappa ([a]_kappa/[b]_kappa) C_kappa(X) C_kappa(Y) / C_kappa(I_m)."""
    ctrl = ctrl or SeriesControl()
    ex = _eigs_of(x, m)
    ey = _eigs_of(y, m)
    if ex.shape != ey.shape:
        raise ValueError("arguments must share the same dimension")
    mm = ex.shape[0]
    _warn_if_large(ex, ey)
    table = build_zonal_table(mm)

    log_kfac = 0.0

    def layer(k: int) -> float:
        nonlocal log_kfac
        if k > 0:
            log_kfac += np.log(k)
        lay = table.layer(k)
        vx = lay.evaluate(ex[None, :])[:, 0]
        vy = lay.evaluate(ey[None, :])[:, 0]
        acc = 0.0
        for kap, cx, cy, ci in zip(lay.parts, vx, vy, lay.at_identity):
            den = partitional_shifted_factorial(b, kap)
            if den == 0.0:
                raise DomainError(
                    f"hypergeometric denominator [b]_kappa vanishes for "
                    f"kappa={tuple(kap)}, b={b}"
                )
            acc += partitional_shifted_factorial(a, kap) / den * cx * cy / ci
        return np.exp(-log_kfac) * acc

    return _sum_by_layers(layer, ctrl, "two-argument 1F1 series")
