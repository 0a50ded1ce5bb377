"""Alternative families for power analysis of the goodness-of-fit test.

Three contiguous families drift toward the null at rate 1/sqrt(n):

* scale — Wishart with shape alpha and scale matrix (1 + n^{-1/2}) I;
* shape — Wishart with shape alpha + n^{-1/2} and identity scale;
* contamination — mixture drawing from a double-shape Wishart with
  probability n^{-1/2}, otherwise from the null.

Each family carries its limit direction h (the L2 derivative of the density
ratio), a Monte Carlo estimator of the local shift c(T) of the limiting
Gaussian field, a power simulator, and a nested Monte Carlo estimator of the
approximate Bahadur slope.

A note on the scale family: the test statistic is exactly invariant under
common rescaling of the sample (standardization divides the mean out), and
scale alternatives differ from the null by a pure rescaling.  Their
rejection rate therefore equals the size for every n; consistently, the
shift c(T) vanishes identically on the scale direction h(X) = m alpha - tr X
(see the mean-trace term of the integrand, which carries 1/(alpha^2 m)).

The matrix generalized-inverse-Gaussian contamination is recognized as a
configuration but deliberately not implemented: there is no exact sampler
without matrix Bessel functions of the second kind.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from math import exp, log, sqrt

import numpy as np

from ._version import __version__
from .errors import DomainError
from .goftest import (
    GofConfig,
    _standardize_batch,
    _statistic_batch,
    _layer_scales,
    mc_null_quantile,
    hard_alpha_bound,
)
from .linalg import SeriesControl
from .specialfn import log_multigamma, multidigamma
from .spectrum import eigen_spectrum
from .wishart import WishartModel, as_generator, wishart_sample
from .zonal import build_zonal_table

__all__ = [
    "AlternativeFamily",
    "sample_alternative",
    "h_limit",
    "shift_c",
    "power_sim",
    "power_row",
    "BahadurResult",
    "bahadur_b2",
    "matrix_f_sampler",
]

_KINDS = ("scale", "shape", "contamination", "mgig", "fixed-custom")

#: Internal RNG stream ids (see the RngStream convention in wishart.py).
_STREAM_ALT_SAMPLING = 401
_STREAM_SHIFT = 402
_STREAM_BAHADUR_T = 403
_STREAM_BAHADUR_X = 404
_STREAM_POWER = 405


@dataclass(frozen=True)
class AlternativeFamily:
    """A family of alternatives to the Wishart null with shape ``alpha``.

    kind: one of "scale", "shape", "contamination" (contiguous, drifting at
        1/sqrt(n)), "fixed-custom" (a fixed alternative via a user sampler
        in extra["sampler"], optional direction extra["h"]), or "mgig"
        (recognized but not implemented).
    alpha: null shape parameter.
    m: matrix dimension.
    n: sample size fixing the contiguous drift delta = n^{-1/2}.
    extra: family-specific parameters.
    """

    kind: str
    alpha: float
    m: int
    n: int | None = None
    extra: dict | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(
                f"unknown alternative kind {self.kind!r}; expected one of "
                f"{_KINDS}"
            )
        if not self.alpha > hard_alpha_bound(self.m):
            raise DomainError(
                f"alpha={self.alpha} must exceed (2m-1)/2 = "
                f"{hard_alpha_bound(self.m)}"
            )
        if self.kind in ("scale", "shape", "contamination", "mgig"):
            if self.n is not None and self.n < 1:
                raise DomainError("n must be a positive sample size")
        if self.kind == "fixed-custom":
            if not self.extra or not callable(self.extra.get("sampler")):
                raise DomainError(
                    "fixed-custom requires extra={'sampler': fn(size, rng) "
                    "-> (size, m, m) array, 'h': optional fn}"
                )

    @property
    def delta(self) -> float:
        """Contiguous drift n^{-1/2} (0 when no n is set)."""
        if self.n is None:
            return 0.0
        return 1.0 / sqrt(self.n)


def sample_alternative(fam: AlternativeFamily, rng=None, size: int | None = None
                       ) -> np.ndarray:
    """Draw from the alternative family.

    Returns one (m, m) matrix when ``size`` is None, else (size, m, m).
    """
    gen = as_generator(rng, _STREAM_ALT_SAMPLING)
    count = 1 if size is None else int(size)
    m, alpha, d = fam.m, fam.alpha, fam.delta

    if fam.kind == "scale":
        model = WishartModel(alpha, (1.0 + d) * np.eye(m))
        out = wishart_sample(model, count, gen)
    elif fam.kind == "shape":
        model = WishartModel(alpha + d, np.eye(m))
        out = wishart_sample(model, count, gen)
    elif fam.kind == "contamination":
        mask = gen.random(count) < d
        k2 = int(mask.sum())
        out = np.empty((count, m, m))
        if count - k2:
            out[~mask] = wishart_sample(
                WishartModel(alpha, np.eye(m)), count - k2, gen
            )
        if k2:
            out[mask] = wishart_sample(
                WishartModel(2.0 * alpha, np.eye(m)), k2, gen
            )
    elif fam.kind == "mgig":
        raise NotImplementedError(
            "matrix generalized-inverse-Gaussian contamination is recognized "
            "but has no exact sampler here (it needs matrix Bessel functions "
            "of the second kind); use kind='contamination' or 'fixed-custom'"
        )
    else:  # fixed-custom
        out = np.asarray(fam.extra["sampler"](count, gen), dtype=float)
        if out.shape != (count, m, m):
            raise DomainError(
                f"custom sampler returned shape {out.shape}, expected "
                f"{(count, m, m)}"
            )
    return out[0] if size is None else out


def matrix_f_sampler(alpha_num: float, alpha_den: float, m: int):
    """Sampler for a matrix-F fixed alternative: B^{-1/2} A B^{-1/2} with
    independent A ~ Wishart(alpha_num, I), B ~ Wishart(alpha_den, I).

    Use with AlternativeFamily(kind="fixed-custom",
    extra={"sampler": matrix_f_sampler(...)}).
    """
    if not alpha_num > (m - 1) / 2 or not alpha_den > (m - 1) / 2:
        raise DomainError("both shape parameters must exceed (m-1)/2")

    def sampler(size: int, gen) -> np.ndarray:
        a = wishart_sample(WishartModel(alpha_num, np.eye(m)), size, gen)
        b = wishart_sample(WishartModel(alpha_den, np.eye(m)), size, gen)
        w, q = np.linalg.eigh(b)
        b_inv_sqrt = (q / np.sqrt(w)[:, None, :]) @ q.transpose(0, 2, 1)
        out = b_inv_sqrt @ a @ b_inv_sqrt
        return 0.5 * (out + out.transpose(0, 2, 1))

    return sampler


def _eig_rows(x, m: int) -> np.ndarray:
    """Coerce a matrix, eigenvalue vector, or batch thereof to (N, m) rows."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1:
        return arr[None, :]
    if arr.ndim == 2 and arr.shape == (m, m):
        return np.linalg.eigvalsh(0.5 * (arr + arr.T))[None, :]
    if arr.ndim == 2 and arr.shape[1] == m:
        return arr
    if arr.ndim == 3:
        return np.linalg.eigvalsh(0.5 * (arr + arr.transpose(0, 2, 1)))
    raise DomainError(f"cannot interpret shape {arr.shape} as m={m} spectra")


def h_limit(fam: AlternativeFamily, x):
    """The family's limit direction h at X (matrix, eigenvalues, or a batch).

    scale: h(X) = m alpha - tr X
    shape: h(X) = log det X - psi_m(alpha)   (multivariate digamma)
    contamination: h(X) = Gamma_m(alpha)/Gamma_m(2 alpha) (det X)^alpha - 1
    fixed-custom: extra["h"] if supplied, else identically 0.

    All three contiguous directions integrate to zero under the null.
    """
    m, alpha = fam.m, fam.alpha
    eigs = _eig_rows(x, m)
    scalar = np.asarray(x).ndim in (1, 2) and np.asarray(x).shape[-1] == m \
        and eigs.shape[0] == 1

    if fam.kind == "scale":
        out = m * alpha - eigs.sum(axis=1)
    elif fam.kind == "shape":
        out = np.log(eigs).sum(axis=1) - multidigamma(alpha, m)
    elif fam.kind in ("contamination", "mgig"):
        lratio = log_multigamma(alpha, m) - log_multigamma(2.0 * alpha, m)
        out = np.exp(lratio + alpha * np.log(eigs).sum(axis=1)) - 1.0
    else:  # fixed-custom
        fn = (fam.extra or {}).get("h")
        if fn is None:
            out = np.zeros(eigs.shape[0])
        else:
            out = np.asarray([fn(row) for row in eigs], dtype=float)
    return float(out[0]) if scalar else out


def _alternating_bessel_rows(t_eigs: np.ndarray, x_eigs: np.ndarray,
                             alpha: float, ctrl: SeriesControl,
                             x_weights: np.ndarray) -> np.ndarray:
    """sum over X rows of Gamma_m(alpha) A_nu(T_r, X_i) x_weights[i], for
    each T row r — accumulated layer by layer without forming the full
    (T, X) cross matrix."""
    m = t_eigs.shape[1]
    table = build_zonal_table(m)
    out = np.zeros(t_eigs.shape[0])
    quiet = 0
    for k in range(ctrl.hard_cap + 1):
        scale = _layer_scales(table, k, alpha)
        u = (table.layer_values(k, x_eigs) * scale[:, None]) @ x_weights
        term = ((-1.0) ** k) * (
            (table.layer_values(k, t_eigs) * scale[:, None]).T @ u
        )
        out += term
        sup = float(np.max(np.abs(term)))
        if sup <= ctrl.abs_tol and sup <= ctrl.rel_tol * max(
            float(np.max(np.abs(out))), 1e-300
        ):
            quiet += 1
            if quiet >= 2:
                return out
        else:
            quiet = 0
    raise DomainError(
        "two-argument Bessel layer series did not converge within the hard "
        "cap; arguments too large"
    )


def shift_c(t_mat, fam: AlternativeFamily, alpha: float | None = None,
            draws: int = 200_000, rng=None,
            ctrl: SeriesControl | None = None) -> tuple[float, float]:
    """Monte Carlo estimate (value, standard error) of the local shift

        c(T) = Int [ Gamma_m(alpha) A_nu(T, X/alpha)
                     + tr(X - alpha I) (tr T) etr(-T/alpha) / (alpha^2 m)
                     - etr(-T/alpha) ] h(X) dP0(X)

    where P0 is the null with identity scale and h is the family's limit
    direction.  The middle term carries 1/(alpha^2 m): with it, c vanishes
    identically on the scale direction h = m alpha - tr X, matching the
    exact scale invariance of the statistic.
    """
    alpha = fam.alpha if alpha is None else float(alpha)
    m = fam.m
    ctrl = ctrl or SeriesControl()
    gen = as_generator(rng, _STREAM_SHIFT)

    t_arr = np.asarray(t_mat, dtype=float)
    t_eigs = np.linalg.eigvalsh(0.5 * (t_arr + t_arr.T))[None, :] \
        if t_arr.ndim == 2 else np.asarray(t_arr, dtype=float)[None, :]
    tr_t = float(t_eigs.sum())
    e_t = exp(-tr_t / alpha)

    model = WishartModel(alpha, np.eye(m))
    x = wishart_sample(model, draws, gen)
    x_eigs = np.linalg.eigvalsh(x)
    h = np.asarray(h_limit(fam, x_eigs), dtype=float)

    # First term: per-draw Gamma_m A_nu(T, X/alpha), then multiplied by h.
    # Accumulate sum over layers of the per-draw series with the weights
    # folded in afterwards, so the standard error is per-draw honest.
    table = build_zonal_table(m)
    per_draw = np.zeros(draws)
    quiet = 0
    for k in range(ctrl.hard_cap + 1):
        scale = _layer_scales(table, k, alpha)
        vt = (table.layer_values(k, t_eigs) * scale[:, None])[:, 0]  # (p,)
        vx = table.layer_values(k, x_eigs / alpha) * scale[:, None]  # (p, N)
        term = ((-1.0) ** k) * (vt @ vx)
        per_draw += term
        sup = float(np.max(np.abs(term)))
        if sup <= ctrl.abs_tol and sup <= ctrl.rel_tol * max(
            float(np.max(np.abs(per_draw))), 1e-300
        ):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
    else:
        raise DomainError(
            "Bessel layer series in shift_c did not converge; T too large"
        )

    integrand = (
        per_draw
        + (x_eigs.sum(axis=1) - alpha * m) * tr_t * e_t / (alpha**2 * m)
        - e_t
    ) * h
    value = float(integrand.mean())
    se = float(integrand.std(ddof=1) / sqrt(draws))
    return value, se


def power_sim(fam: AlternativeFamily, n: int, level: float = 0.05,
              reps: int = 500, seed: int | None = None,
              cfg: GofConfig | None = None) -> tuple[float, float]:
    """Empirical rejection rate (and binomial SE) of the level-``level``
    test against the family at sample size n.

    The critical value is calibrated once per (alpha, m, n, level, seed)
    by Monte Carlo under the null and reused across replicates.
    """
    if reps < 100:
        raise DomainError("reps must be at least 100")
    if n < 2:
        raise DomainError("n must be at least 2")
    fam = replace(fam, n=n) if fam.n != n else fam
    alpha, m = fam.alpha, fam.m
    mc_reps = cfg.mc_reps if cfg is not None else 10000
    ctrl = cfg.series if cfg is not None else SeriesControl()

    crit, _ = mc_null_quantile(alpha, m, n, level, mc_reps, seed, ctrl=ctrl)

    gen = as_generator(seed, _STREAM_POWER)
    rejections = 0
    chunk = max(1, int(12_000_000 / max(n * m * m, 1)))
    done = 0
    while done < reps:
        count = min(chunk, reps - done)
        mats = sample_alternative(fam, gen, size=count * n).reshape(
            count, n, m, m
        )
        eigs, traces = _standardize_batch(mats)
        del mats
        stats = _statistic_batch(eigs, traces, alpha, ctrl)
        rejections += int(np.sum(stats > crit))
        done += count
    rate = rejections / reps
    se = sqrt(max(rate * (1.0 - rate), 1.0 / reps) / reps)
    return rate, se


def power_row(fam: AlternativeFamily, n: int, level: float, reps: int,
              rate: float, se: float, seed: int | None) -> str:
    """One JSON row of a power study."""
    return json.dumps(
        {
            "family": fam.kind,
            "theta_or_n": n,
            "level": level,
            "reps": reps,
            "reject_rate": rate,
            "se": se,
            "seed": seed,
            "version": __version__,
        },
        sort_keys=True,
    )


@dataclass(frozen=True)
class BahadurResult:
    """Nested Monte Carlo estimate of the approximate Bahadur slope input.

    b2: estimate of theta^2 * Int [Int Gamma_m(alpha) A_nu(T, X/alpha)
        h_theta(X) dP0(X)]^2 dP0(T);
    se: its Monte Carlo standard error (over the outer T draws);
    delta_1: largest distinct eigenvalue of the limit spectrum;
    slope_ratio: b2 / (theta^2 delta_1), the approximate slope ratio.
    """

    b2: float
    se: float
    delta_1: float
    slope_ratio: float


def bahadur_b2(theta: float, h_theta, alpha: float, m: int,
               draws_T: int = 2000, draws_X: int = 100_000,
               rng=None, ctrl: SeriesControl | None = None) -> BahadurResult:
    """Nested Monte Carlo of the Bahadur slope numerator.

    ``h_theta`` maps an eigenvalue row to a real and must satisfy the null
    centering (integral zero under P0).  The inner integral is estimated on
    two independent halves of the X draws and multiplied pairwise, which
    removes the squared-estimator bias; the outer average runs over T draws.
    """
    if not alpha > hard_alpha_bound(m):
        raise DomainError(
            f"alpha={alpha} must exceed (2m-1)/2 = {hard_alpha_bound(m)}"
        )
    ctrl = ctrl or SeriesControl()
    gen_t = as_generator(rng, _STREAM_BAHADUR_T)
    gen_x = as_generator(rng, _STREAM_BAHADUR_X)
    model = WishartModel(alpha, np.eye(m))

    t_eigs = np.linalg.eigvalsh(wishart_sample(model, draws_T, gen_t))
    half = draws_X // 2
    x_eigs = np.linalg.eigvalsh(wishart_sample(model, 2 * half, gen_x))
    h_vals = np.asarray([h_theta(row) for row in x_eigs], dtype=float)

    inner = [
        _alternating_bessel_rows(
            t_eigs, x_eigs[part] / alpha, alpha, ctrl,
            h_vals[part] / half,
        )
        for part in (slice(0, half), slice(half, 2 * half))
    ]
    prod = inner[0] * inner[1]
    b2 = float(theta * theta * prod.mean())
    se = float(theta * theta * prod.std(ddof=1) / sqrt(draws_T))
    delta_1 = float(eigen_spectrum(alpha, m).deltas[0][0])
    ratio = b2 / (theta * theta * delta_1) if theta != 0.0 else 0.0
    return BahadurResult(b2=b2, se=se, delta_1=delta_1, slope_ratio=ratio)
