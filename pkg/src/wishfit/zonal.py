"""Zonal polynomials (Jack polynomials at parameter 2, C-normalization).

Each polynomial C_kappa is represented by its coefficients in the monomial
symmetric-function basis, built one total-weight layer at a time:

1.  Within a weight layer, relative coefficients of each polynomial are
    produced by the classic eigen-recurrence for the Laplace-Beltrami operator
    on symmetric polynomials, walking partitions in descending lexicographic
    order.
2.  The per-polynomial normalization is then fixed by the layer-wide identity
    sum_{|kappa|=k} C_kappa(Y) = (tr Y)^k, which pins the expansion of the
    k-th power sum uniquely because the recurrence matrix is triangular.

Evaluation is by eigenvalues: C_kappa(Y) for a symmetric Y is the polynomial
evaluated at the spectrum of Y, and C_kappa(Y Z) for SPD Y means evaluation at
the (real) spectrum of Y^{1/2} Z Y^{1/2}.  Polynomials of more parts than
available variables are identically zero.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from math import factorial, lgamma, log

import numpy as np

from .errors import DomainError
from .partitions import (
    Partition,
    enumerate_partitions,
    log_partitional_shifted_factorial,
    multinomial_coefficient,
    partitional_shifted_factorial,
    partitions_upto,
)

__all__ = [
    "ZonalTable",
    "build_zonal_table",
    "zonal_value",
    "zonal_at_identity",
    "log_zonal_at_identity",
    "generalized_binomial",
]

#: Refuse to build a coefficient layer bigger than this many entries.
_MAX_LAYER_ENTRIES = 50_000_000


def _rho_index(parts: tuple[int, ...]) -> int:
    """Recurrence eigen-index: sum_i p_i (p_i - i), positions 1-based."""
    return sum(p * (p - (i + 1)) for i, p in enumerate(parts))


class _Layer:
    """Coefficient data for one total weight ``k`` and variable bound ``m``."""

    __slots__ = ("weight", "parts", "coeffs", "perm_exponents", "at_identity")

    def __init__(self, weight: int, m: int):
        self.weight = weight
        parts = enumerate_partitions(weight, m)
        p = len(parts)
        if p * p > _MAX_LAYER_ENTRIES:
            raise MemoryError(
                f"zonal coefficient layer for weight {weight}, m={m} would "
                f"need {p * p} entries"
            )
        self.parts = parts
        index = {lam: j for j, lam in enumerate(parts)}
        rho = [_rho_index(lam) for lam in parts]

        # Relative coefficients: z[i, j] = coefficient of monomial basis
        # element parts[j] in the i-th (unnormalized) polynomial; descending
        # lexicographic enumeration makes the matrix unit upper triangular.
        z = np.zeros((p, p))
        for i in range(p):
            kappa = parts[i]
            z[i, i] = 1.0
            for j in range(i + 1, p):
                lam = parts[j]
                acc = 0.0
                ell = len(lam)
                for jb in range(1, ell):
                    for ia in range(jb):
                        for t in range(1, lam[jb] + 1):
                            mu_raw = list(lam)
                            mu_raw[ia] += t
                            mu_raw[jb] -= t
                            mu = tuple(
                                p for p in sorted(mu_raw, reverse=True) if p
                            )
                            if not (lam < mu <= kappa):
                                continue
                            mj = index.get(mu)
                            if mj is None:
                                continue
                            acc += (mu_raw[ia] - mu_raw[jb]) * z[i, mj]
                if acc != 0.0:
                    z[i, j] = acc / (rho[i] - rho[j])

        # Normalize each polynomial so the layer sums to the k-th power of the
        # first power sum: solve z.T @ d = multinomial weights (triangular).
        w = np.array([multinomial_coefficient(lam) for lam in parts])
        d = np.zeros(p)
        for j in range(p):
            d[j] = (w[j] - z[:j, j] @ d[:j]) / z[j, j]
        self.coeffs = z * d[:, None]

        # Distinct exponent arrangements of each monomial over m variables.
        self.perm_exponents = []
        for lam in parts:
            padded = tuple(lam) + (0,) * (m - len(lam))
            distinct = sorted(set(permutations(padded)))
            self.perm_exponents.append(np.array(distinct, dtype=np.int64))

        self.at_identity = self.evaluate(np.ones((1, m)))[:, 0]

    def monomials(self, eigs: np.ndarray) -> np.ndarray:
        """Monomial symmetric polynomial values, shape (n_partitions, N)."""
        n, m = eigs.shape
        power_cache: dict[tuple[int, int], np.ndarray] = {}

        def power(j: int, e: int) -> np.ndarray:
            key = (j, e)
            got = power_cache.get(key)
            if got is None:
                got = eigs[:, j] ** e
                power_cache[key] = got
            return got

        out = np.empty((len(self.parts), n))
        for idx, exps in enumerate(self.perm_exponents):
            acc = np.zeros(n)
            for row in exps:
                term = None
                for j, e in enumerate(row):
                    if e == 0:
                        continue
                    term = power(j, int(e)) if term is None else term * power(j, int(e))
                acc += term if term is not None else np.ones(n)
            out[idx] = acc
        return out

    def evaluate(self, eigs: np.ndarray) -> np.ndarray:
        """Zonal polynomial values for all partitions of this layer.

        Parameters
        ----------
        eigs : ndarray, shape (N, m)
            Eigenvalue rows (order irrelevant; signs arbitrary).

        Returns
        -------
        ndarray, shape (n_partitions, N)
        """
        return self.coeffs @ self.monomials(eigs)


class ZonalTable:
    """Lazy per-weight table of zonal polynomial coefficients for ``m`` variables."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("need at least one variable")
        self.m = int(m)
        self._layers: dict[int, _Layer] = {}

    def layer(self, weight: int) -> _Layer:
        got = self._layers.get(weight)
        if got is None:
            got = _Layer(weight, self.m)
            self._layers[weight] = got
        return got

    @property
    def max_built_weight(self) -> int:
        return max(self._layers, default=-1)

    def layer_values(self, weight: int, eigs) -> np.ndarray:
        """C_kappa(Y) for every kappa of the given weight; shape (p, N)."""
        eigs = np.atleast_2d(np.asarray(eigs, dtype=float))
        if eigs.shape[1] != self.m:
            raise ValueError(f"expected eigenvalue rows of length {self.m}")
        return self.layer(weight).evaluate(eigs)

    def value(self, kappa, eigs) -> float:
        """C_kappa evaluated at one eigenvalue vector."""
        kappa = Partition(kappa)
        if kappa.length > self.m:
            return 0.0
        lay = self.layer(kappa.weight)
        j = lay.parts.index(kappa)
        return float(lay.evaluate(np.atleast_2d(np.asarray(eigs, dtype=float)))[j, 0])


@lru_cache(maxsize=32)
def build_zonal_table(m: int, max_weight: int = 0) -> ZonalTable:
    """Shared, cached table for ``m`` variables; layers build on demand.

    ``max_weight`` > 0 pre-builds layers 0..max_weight eagerly.
    """
    table = ZonalTable(m)
    for k in range(max_weight + 1):
        table.layer(k)
    return table


def zonal_value(kappa, y, m: int | None = None) -> float:
    """C_kappa(Y) where ``y`` is a symmetric matrix or an eigenvalue vector."""
    arr = np.asarray(y, dtype=float)
    if arr.ndim == 2:
        eigs = np.linalg.eigvalsh(0.5 * (arr + arr.T))
    else:
        eigs = arr
    if m is None:
        m = eigs.shape[-1]
    kappa = Partition(kappa)
    if kappa.length > m:
        return 0.0
    return build_zonal_table(m).value(kappa, eigs)


def zonal_at_identity(kappa, m: int) -> float:
    """Closed form for C_kappa(I_m).

    C_kappa(I_m) = 2^{2k} k! [m/2]_kappa
                   * prod_{i<j<=l} (2k_i - 2k_j - i + j)
                   / prod_{i<=l} (2k_i + l - i)!
    with k = |kappa| and l = len(kappa); zero when len(kappa) > m.
    """
    kappa = Partition(kappa)
    ell = kappa.length
    if ell > m:
        return 0.0
    k = kappa.weight
    val = 4.0**k * factorial(k) * partitional_shifted_factorial(0.5 * m, kappa)
    for i in range(ell):
        for j in range(i + 1, ell):
            val *= 2 * kappa[i] - 2 * kappa[j] - (i + 1) + (j + 1)
    for i in range(ell):
        val /= factorial(2 * kappa[i] + ell - (i + 1))
    return val


def log_zonal_at_identity(kappa, m: int) -> float:
    """log C_kappa(I_m), overflow-safe for large weights.

    Every factor of the closed form is positive when len(kappa) <= m, so the
    logarithm is well defined; raises DomainError otherwise.
    """
    kappa = Partition(kappa)
    ell = kappa.length
    if ell > m:
        raise DomainError(
            f"C_kappa(I_{m}) vanishes for kappa={tuple(kappa)}; log undefined"
        )
    k = kappa.weight
    val = k * log(4.0) + lgamma(k + 1.0) + log_partitional_shifted_factorial(
        0.5 * m, kappa
    )
    for i in range(ell):
        for j in range(i + 1, ell):
            val += log(2 * kappa[i] - 2 * kappa[j] - (i + 1) + (j + 1))
    for i in range(ell):
        val -= lgamma(2 * kappa[i] + ell - (i + 1) + 1.0)
    return val


@lru_cache(maxsize=None)
def _binomial_row(kappa: Partition, m: int) -> dict[Partition, float]:
    """All generalized binomial coefficients (kappa over sigma), |sigma| <= |kappa|.

    Determined by evaluating C_kappa(I + Y)/C_kappa(I) = sum_sigma
    (kappa over sigma) C_sigma(Y)/C_sigma(I) at enough random diagonal points
    and solving the resulting least-squares system; the residual is checked.
    """
    if kappa.length > m:
        raise ValueError("kappa must have at most m parts")
    k = kappa.weight
    table = build_zonal_table(m)
    sigmas = partitions_upto(k, m)
    n_unknown = len(sigmas)
    n_points = 2 * n_unknown + 4

    rng = np.random.default_rng(20180923)
    pts = rng.uniform(0.2, 1.8, size=(n_points, m))

    design = np.empty((n_points, n_unknown))
    col = 0
    for w in range(k + 1):
        lay = table.layer(w)
        vals = lay.evaluate(pts) / lay.at_identity[:, None]
        design[:, col : col + len(lay.parts)] = vals.T
        col += len(lay.parts)

    ck_identity = zonal_at_identity(kappa, m)
    lay_k = table.layer(k)
    row = lay_k.parts.index(kappa)
    rhs = lay_k.evaluate(pts + 1.0)[row] / ck_identity

    coef, _, _, _ = np.linalg.lstsq(design, rhs, rcond=None)
    resid = float(np.max(np.abs(design @ coef - rhs)))
    scale = max(1.0, float(np.max(np.abs(rhs))))
    if resid > 1e-7 * scale:
        raise ArithmeticError(
            f"generalized binomial solve did not converge: residual {resid:.2e}"
        )
    return {sigma: float(c) for sigma, c in zip(sigmas, coef)}


def generalized_binomial(kappa, sigma, m: int | None = None) -> float:
    """Generalized binomial coefficient (kappa over sigma) for m variables."""
    kappa = Partition(kappa)
    sigma = Partition(sigma)
    if m is None:
        m = max(kappa.length, sigma.length, 1)
    if sigma.weight > kappa.weight or sigma.length > m:
        return 0.0
    return _binomial_row(kappa, m).get(sigma, 0.0)
