"""Wishart model in the rate parametrization, samplers, and Hankel transforms.

The density used throughout is proportional to
(det S)^alpha (det X)^{alpha-(m+1)/2} etr(-S X) for SPD X, where S is the
*rate* matrix: E[X] = alpha * S^{-1}.  In the conventional
(degrees-of-freedom, scale) parametrization this is df = 2*alpha and scale
V = (2 S)^{-1}; non-integer 2*alpha is fully supported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .linalg import SeriesControl, SpdMatrix
from .specialfn import BesselOrder, bessel_A2, hyp1F1, log_multigamma

__all__ = [
    "RngStream",
    "as_generator",
    "WishartModel",
    "wishart_sample",
    "wishart_logpdf",
    "hankel_wishart",
    "empirical_hankel",
]


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream keyed by (master_seed, stream_id).

    Distinct stream ids under one master seed give statistically independent,
    platform-stable streams (Philox).  Use one stream per replicate or per
    logical purpose; results are reproducible regardless of execution order.
    """

    master_seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence((int(self.master_seed), int(self.stream_id)))
        return np.random.Generator(np.random.Philox(seq))


def as_generator(rng, stream_id: int = 0) -> np.random.Generator:
    """Coerce a Generator / RngStream / master seed / None to a Generator.

    Plain integers (and None, which maps to master seed 0) are opened on the
    given ``stream_id`` so distinct internal purposes draw from independent
    streams of one master seed.
    """
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if rng is None:
        return RngStream(0, stream_id).generator()
    return RngStream(int(rng), stream_id).generator()


_as_generator = as_generator


@dataclass(frozen=True)
class WishartModel:
    """Wishart distribution with shape ``alpha`` and SPD rate matrix ``sigma``.

    Requires alpha > (m-1)/2, the existence threshold of the density family.
    """

    alpha: float
    sigma: SpdMatrix

    def __init__(self, alpha: float, sigma):
        sig = sigma if isinstance(sigma, SpdMatrix) else SpdMatrix(sigma)
        if not alpha > (sig.dim - 1) / 2:
            raise DomainError(
                f"alpha={alpha} must exceed (m-1)/2 = {(sig.dim - 1) / 2}"
            )
        object.__setattr__(self, "alpha", float(alpha))
        object.__setattr__(self, "sigma", sig)

    @property
    def m(self) -> int:
        return self.sigma.dim

    def mean(self) -> np.ndarray:
        """E[X] = alpha * sigma^{-1}."""
        return self.alpha * self.sigma.inv()


def wishart_sample(model: WishartModel, n: int, rng=None) -> np.ndarray:
    """Draw ``n`` matrices, shape (n, m, m), by the Bartlett construction.

    A lower-triangular factor T has chi-square diagonal squares with
    df = 2*alpha - i + 1 (i = 1..m, so non-integer df is natural) and unit
    normal subdiagonals; X = A (T T') A' with A A' = (2 sigma)^{-1}.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    gen = _as_generator(rng)
    m = model.m
    df = 2.0 * model.alpha

    t = np.zeros((n, m, m))
    for i in range(m):
        shape = 0.5 * (df - i)
        t[:, i, i] = np.sqrt(gen.gamma(shape, scale=2.0, size=n))
    if m > 1:
        rows, cols = np.tril_indices(m, k=-1)
        t[:, rows, cols] = gen.standard_normal((n, rows.size))

    # A A' = (2 sigma)^{-1}; with sigma = Q diag(w) Q', take A = Q diag((2w)^{-1/2}).
    q = model.sigma.eigenvectors
    a = q * (1.0 / np.sqrt(2.0 * model.sigma.eigenvalues))
    w = t @ np.swapaxes(t, 1, 2)
    x = a @ w @ a.T
    return 0.5 * (x + np.swapaxes(x, 1, 2))


def wishart_logpdf(model: WishartModel, x) -> float:
    """Log density at one SPD matrix ``x``."""
    xm = x if isinstance(x, SpdMatrix) else SpdMatrix(x)
    m = model.m
    if xm.dim != m:
        raise ValueError(f"dimension mismatch: model m={m}, x dim={xm.dim}")
    a = model.alpha
    return float(
        a * model.sigma.logdet()
        - log_multigamma(a, m)
        + (a - (m + 1) / 2) * xm.logdet()
        - np.sum(model.sigma.array * xm.array)
    )


def hankel_wishart(model: WishartModel, t, nu: float | None = None,
                   ctrl: SeriesControl | None = None) -> float:
    """Orthogonally invariant Hankel transform of the model at SPD ``t``.

    Equals the confluent hypergeometric value
    1F1(alpha; nu + (m+1)/2; -(sigma^{-1/2} T sigma^{-1/2})); at the canonical
    order nu = alpha - (m+1)/2 it collapses to etr(-T sigma^{-1}).
    """
    m = model.m
    if nu is None:
        nu = model.alpha - (m + 1) / 2
    order = BesselOrder(nu, m)
    tm = t if isinstance(t, SpdMatrix) else SpdMatrix(t)
    if tm.dim != m:
        raise ValueError(f"dimension mismatch: model m={m}, t dim={tm.dim}")
    isq = model.sigma.inv_sqrt()
    arg = isq @ tm.array @ isq
    b = order.series_parameter
    if abs(b - model.alpha) < 1e-12:
        return float(np.exp(-np.trace(arg)))
    return hyp1F1(model.alpha, b, -arg, ctrl, m=m)


def empirical_hankel(sample, t, alpha: float, nu: float | None = None,
                     ctrl: SeriesControl | None = None) -> float:
    """Empirical Hankel transform of a matrix sample at SPD ``t``:
    the sample mean of Gamma_m(nu+(m+1)/2) * A_nu(T, X_j).

    For a sample from the model with identity rate and the canonical order
    nu = alpha - (m+1)/2, this estimates etr(-T).
    """
    xs = np.asarray(sample, dtype=float)
    if xs.ndim != 3 or xs.shape[1] != xs.shape[2]:
        raise ValueError("sample must have shape (n, m, m)")
    m = xs.shape[1]
    if nu is None:
        nu = alpha - (m + 1) / 2
    order = BesselOrder(nu, m)
    vals = [bessel_A2(t, xs[j], order, ctrl, scaled=True) for j in range(xs.shape[0])]
    return float(np.mean(vals))
