"""Goodness-of-fit test for the Wishart family with known shape alpha.

Given an i.i.d. sample of symmetric positive definite matrices, the test
compares the empirical orthogonally invariant Hankel transform of the
standardized sample with the transform the Wishart null implies, through an
L2-type weighted distance.  The statistic is a degenerate V-statistic

    T2 = (1/n) sum_{i,j} h(Y_i, Y_j)

over the standardized matrices Y_j = Xbar^{-1/2} X_j Xbar^{-1/2}, whose
kernel expands in zonal polynomials.  Summing the expansion one weight layer
at a time turns the double pair loop into per-layer inner products, which is
both exact and fast enough to calibrate by Monte Carlo in bulk.

Three calibration methods are provided: "mc" (Monte Carlo under the null at
the observed n, the default), "asymptotic" (weighted chi-square limit law
from the spectrum module), and "conservative" (a stochastic upper bound on
the limit law — the unperturbed diagonal spectrum — that can only
over-cover).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from math import exp, lgamma, log, sqrt

import numpy as np

from ._version import __version__
from .errors import (
    DegenerateSampleError,
    DomainError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    SeriesNonConvergenceError,
)
from .linalg import SPD_TOL, SYM_TOL, SeriesControl
from .partitions import count_partitions, log_partitional_shifted_factorial
from .specialfn import BesselOrder, bessel_A2
from .spectrum import (
    eigen_spectrum,
    rho,
    truncation_rank,
    weighted_chisq_quantile,
    weighted_chisq_tail,
)
from .wishart import RngStream, WishartModel, as_generator, wishart_sample
from .zonal import build_zonal_table, log_zonal_at_identity

__all__ = [
    "GofConfig",
    "GofReport",
    "StandardizedSample",
    "standardize_sample",
    "kernel_constants",
    "kernel_h",
    "statistic_T2",
    "statistic_oracle",
    "statistic_oracle_mc",
    "mc_null_quantile",
    "gof_test",
    "hard_alpha_bound",
    "theorem_alpha_bound",
]

#: Internal RNG stream ids (see the RngStream convention in wishart.py).
_STREAM_CALIBRATION = 301
_STREAM_ORACLE = 302
_STREAM_LIMIT_QUANTILE = 901
_STREAM_LIMIT_TAIL = 902


def hard_alpha_bound(m: int) -> float:
    """The statistic and its kernel series require alpha > (2m-1)/2."""
    return (2 * m - 1) / 2


def theorem_alpha_bound(m: int) -> float:
    """The limit theory is proved for alpha > max{(2m-1)/2, (m+3)/2}."""
    return max((2 * m - 1) / 2, (m + 3) / 2)


def _require_alpha(alpha: float, m: int, allow_below_theorem: bool) -> list[str]:
    """Enforce the alpha bounds; returns quality flags to attach."""
    if not alpha > hard_alpha_bound(m):
        raise DomainError(
            f"alpha={alpha} must exceed (2m-1)/2 = {hard_alpha_bound(m)} "
            f"for dimension m={m}"
        )
    if not alpha > theorem_alpha_bound(m):
        if not allow_below_theorem:
            raise DomainError(
                f"alpha={alpha} is at or below the proved-theory bound "
                f"max{{(2m-1)/2, (m+3)/2}} = {theorem_alpha_bound(m)} for "
                f"m={m}; set allow_alpha_below_theorem_bound=True to proceed "
                f"at your own risk"
            )
        return ["alpha_below_theorem_bound"]
    return []


@dataclass(frozen=True)
class GofConfig:
    """Configuration of the goodness-of-fit test.

    alpha: known shape parameter of the null family.
    method: "mc" | "asymptotic" | "conservative".
    level: test level in (0, 1).
    mc_reps: Monte Carlo replicates for method="mc".
    seed: master seed (None draws one from entropy; record it for replays).
    series: convergence controls for all series evaluations.
    allow_alpha_below_theorem_bound: permit (2m-1)/2 < alpha <=
        max{(2m-1)/2, (m+3)/2}, where the statistic is computable but the
        limit theory is not proved.
    """

    alpha: float
    method: str = "mc"
    level: float = 0.05
    mc_reps: int = 10000
    seed: int | None = None
    series: SeriesControl = field(default_factory=SeriesControl)
    allow_alpha_below_theorem_bound: bool = False

    def __post_init__(self):
        if self.method not in ("mc", "asymptotic", "conservative"):
            raise DomainError(
                f"method must be 'mc', 'asymptotic' or 'conservative', "
                f"got {self.method!r}"
            )
        if not 0 < self.level < 1:
            raise DomainError("level must be in (0, 1)")
        if self.mc_reps < 100:
            raise DomainError("mc_reps must be at least 100")
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")


@dataclass(frozen=True)
class StandardizedSample:
    """Eigenvalue representation of a sample standardized by its mean.

    eigenvalues[j] are the eigenvalues of Xbar^{-1/2} X_j Xbar^{-1/2}
    (equivalently of Xbar^{-1} X_j), whose average matrix is exactly I.
    Only eigenvalues are kept: every downstream quantity is orthogonally
    invariant.
    """

    eigenvalues: np.ndarray  # (n, m)
    traces: np.ndarray  # (n,)
    mean: np.ndarray  # (m, m) sample mean of the raw matrices
    n: int
    m: int


def _validate_cube(sample) -> np.ndarray:
    arr = np.asarray(sample, dtype=float)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise DegenerateSampleError(
            f"sample must be an (n, m, m) array of matrices, got shape "
            f"{arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise DegenerateSampleError("sample contains non-finite entries")
    return arr


def standardize_sample(sample, sym_tol: float = SYM_TOL) -> StandardizedSample:
    """Validate an (n, m, m) stack of SPD matrices and standardize by the mean.

    Raises NotSymmetricError / NotPositiveDefiniteError on bad inputs and
    DegenerateSampleError when n < 2 or the sample mean is singular.
    """
    arr = _validate_cube(sample)
    n, m = arr.shape[0], arr.shape[1]
    if n < 2:
        raise DegenerateSampleError(f"need at least two matrices, got n={n}")

    scale = np.abs(arr).max(axis=(1, 2))
    asym = np.abs(arr - arr.transpose(0, 2, 1)).max(axis=(1, 2))
    bad = asym > sym_tol * np.maximum(scale, 1.0)
    if np.any(bad):
        j = int(np.argmax(bad))
        raise NotSymmetricError(
            f"matrix {j} is not symmetric (max asymmetry {asym[j]:.3e})"
        )
    arr = 0.5 * (arr + arr.transpose(0, 2, 1))

    eig_raw = np.linalg.eigvalsh(arr)
    if np.any(eig_raw[:, 0] <= SPD_TOL * np.maximum(eig_raw[:, -1], 0.0)):
        j = int(np.argmin(eig_raw[:, 0] / np.maximum(eig_raw[:, -1], 1e-300)))
        raise NotPositiveDefiniteError(
            f"matrix {j} is not positive definite "
            f"(eigenvalue range [{eig_raw[j, 0]:.3e}, {eig_raw[j, -1]:.3e}])"
        )

    mean = arr.mean(axis=0)
    w, q = np.linalg.eigh(mean)
    if w[0] <= SPD_TOL * max(w[-1], 0.0):
        raise DegenerateSampleError(
            f"sample mean is numerically singular (eigenvalues "
            f"[{w[0]:.3e}, {w[-1]:.3e}])"
        )
    inv_sqrt = (q / np.sqrt(w)) @ q.T
    std = inv_sqrt @ arr @ inv_sqrt
    std = 0.5 * (std + std.transpose(0, 2, 1))
    eigs = np.linalg.eigvalsh(std)
    return StandardizedSample(
        eigenvalues=eigs,
        traces=eigs.sum(axis=1),
        mean=mean,
        n=n,
        m=m,
    )


def kernel_constants(alpha: float, m: int) -> tuple[float, float]:
    """The two null-moment constants of the kernel:
    c1 = (alpha/(alpha+1))^{m alpha}, c2 = (alpha/(alpha+2))^{m alpha}."""
    if not alpha > (m - 1) / 2:
        raise DomainError(f"alpha={alpha} must exceed (m-1)/2 = {(m - 1) / 2}")
    ma = m * alpha
    return (
        exp(ma * (log(alpha) - log(alpha + 1.0))),
        exp(ma * (log(alpha) - log(alpha + 2.0))),
    )


def _eigs_and_trace(x, m: int | None = None) -> tuple[np.ndarray, float]:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 2:
        eigs = np.linalg.eigvalsh(0.5 * (arr + arr.T))
    elif arr.ndim == 1:
        eigs = arr
    else:
        raise DomainError("expected a matrix or an eigenvalue vector")
    if m is not None and eigs.shape[0] != m:
        raise DomainError(f"expected dimension {m}, got {eigs.shape[0]}")
    return eigs, float(eigs.sum())


def kernel_h(x, y, alpha: float, ctrl: SeriesControl | None = None) -> float:
    """The V-statistic kernel at standardized arguments X, Y (matrices or
    eigenvalue vectors):

    h = Gamma_m(alpha) etr(-X-Y) A_nu(-X, Y)
        - c1 [etr(-alpha X/(alpha+1)) + etr(-alpha Y/(alpha+1))] + c2
    with nu = alpha - (m+1)/2.  Symmetric in its arguments.
    """
    ex, tx = _eigs_and_trace(x)
    ey, ty = _eigs_and_trace(y, ex.shape[0])
    m = ex.shape[0]
    if not alpha > hard_alpha_bound(m):
        raise DomainError(
            f"alpha={alpha} must exceed (2m-1)/2 = {hard_alpha_bound(m)}"
        )
    c1, c2 = kernel_constants(alpha, m)
    order = BesselOrder(alpha - (m + 1) / 2, m)
    core = bessel_A2(-ex, ey, order, ctrl, scaled=True) * exp(-(tx + ty))
    s = alpha / (alpha + 1.0)
    return core - c1 * (exp(-s * tx) + exp(-s * ty)) + c2


def _layer_scales(table, weight: int, alpha: float) -> np.ndarray:
    """exp(-(log k! + log [alpha]_kappa + log C_kappa(I))/2) for each
    partition of the layer, in the layer's row order."""
    lay = table.layer(weight)
    out = np.empty(len(lay.parts))
    for i, kappa in enumerate(lay.parts):
        out[i] = exp(
            -0.5
            * (
                lgamma(weight + 1.0)
                + log_partitional_shifted_factorial(alpha, kappa)
                + log_zonal_at_identity(kappa, table.m)
            )
        )
    return out


def _series_piece(eigs: np.ndarray, weights: np.ndarray, alpha: float,
                  ctrl: SeriesControl) -> np.ndarray:
    """sum_k (1/k!) sum_kappa [sum_i weights[r,i] C_kappa(Y_ri)]^2
    / ([alpha]_kappa C_kappa(I)) for each replicate r.

    eigs has shape (R, n, m) and weights (R, n); returns shape (R,).
    """
    r, n, m = eigs.shape
    table = build_zonal_table(m)
    flat = eigs.reshape(r * n, m)
    total = np.zeros(r)
    quiet = np.zeros(r, dtype=int)
    for k in range(ctrl.hard_cap + 1):
        vals = table.layer_values(k, flat)  # (p, R*n)
        g = np.einsum("prn,rn->pr", vals.reshape(len(vals), r, n), weights)
        g *= _layer_scales(table, k, alpha)[:, None]
        term = np.einsum("pr,pr->r", g, g)
        if not np.all(np.isfinite(term)):
            raise SeriesNonConvergenceError(
                "statistic layer sum overflowed; the standardized sample has "
                "extreme eigenvalues",
                partial_value=float(np.nanmax(total)),
                weight_reached=k,
            )
        total += term
        quiet = np.where(
            (term <= ctrl.abs_tol)
            & (term <= ctrl.rel_tol * np.maximum(total, 1e-300)),
            quiet + 1,
            0,
        )
        if np.all(quiet >= 2):
            return total
    raise SeriesNonConvergenceError(
        f"statistic layer series did not converge within hard cap "
        f"{ctrl.hard_cap}",
        partial_value=float(np.max(total)),
        weight_reached=ctrl.hard_cap,
    )


def _statistic_batch(eigs: np.ndarray, traces: np.ndarray, alpha: float,
                     ctrl: SeriesControl | None = None,
                     chunk_columns: int = 50_000) -> np.ndarray:
    """T2 statistics for a batch of standardized samples.

    eigs: (R, n, m) standardized eigenvalues; traces: (R, n).
    Replicates are processed in chunks to bound the memory of the per-layer
    zonal evaluations.
    """
    ctrl = ctrl or SeriesControl()
    r, n, m = eigs.shape
    c1, c2 = kernel_constants(alpha, m)
    out = np.empty(r)
    reps_per_chunk = max(1, chunk_columns // max(n, 1))
    s = alpha / (alpha + 1.0)
    for start in range(0, r, reps_per_chunk):
        sl = slice(start, min(start + reps_per_chunk, r))
        ew = np.exp(-traces[sl])
        piece1 = _series_piece(eigs[sl], ew, alpha, ctrl) / n
        cross = np.exp(-s * traces[sl]).sum(axis=1)
        out[sl] = piece1 - 2.0 * c1 * cross + n * c2
    neg_tol = 1e-10 * max(1.0, n * c2)
    if np.any(out < -neg_tol):
        raise ArithmeticError(
            f"statistic came out negative beyond roundoff "
            f"({float(out.min()):.3e}); this indicates a numerical failure"
        )
    return np.clip(out, 0.0, None)


def _resolve_alpha_ctrl(cfg_or_alpha, ctrl):
    if isinstance(cfg_or_alpha, GofConfig):
        return cfg_or_alpha.alpha, (ctrl or cfg_or_alpha.series)
    return float(cfg_or_alpha), ctrl


def statistic_T2(sample, cfg_or_alpha,
                 ctrl: SeriesControl | None = None) -> float:
    """The test statistic T2 for one sample — a raw (n, m, m) stack or an
    already standardized sample.  Accepts a GofConfig or a bare alpha."""
    alpha, ctrl = _resolve_alpha_ctrl(cfg_or_alpha, ctrl)
    std = sample if isinstance(sample, StandardizedSample) else \
        standardize_sample(sample)
    if not alpha > hard_alpha_bound(std.m):
        raise DomainError(
            f"alpha={alpha} must exceed (2m-1)/2 = {hard_alpha_bound(std.m)}"
        )
    vals = _statistic_batch(
        std.eigenvalues[None], std.traces[None], alpha, ctrl
    )
    return float(vals[0])


def statistic_oracle(sample, cfg_or_alpha,
                     ctrl: SeriesControl | None = None) -> float:
    """Reference O(n^2) evaluation of T2 through explicit kernel calls.

    Slow; validates the layer-aggregated evaluation on small samples.
    """
    alpha, ctrl = _resolve_alpha_ctrl(cfg_or_alpha, ctrl)
    std = sample if isinstance(sample, StandardizedSample) else \
        standardize_sample(sample)
    n = std.n
    total = 0.0
    for i in range(n):
        total += kernel_h(std.eigenvalues[i], std.eigenvalues[i], alpha, ctrl)
        for j in range(i + 1, n):
            total += 2.0 * kernel_h(
                std.eigenvalues[i], std.eigenvalues[j], alpha, ctrl
            )
    return total / n


def statistic_oracle_mc(sample, cfg_or_alpha, draws: int = 2000,
                        rng=None, ctrl: SeriesControl | None = None
                        ) -> tuple[float, float]:
    """Monte Carlo of the defining integral of the statistic:

        n * E_{T ~ P0} [ ( (1/n) sum_j Gamma_m(alpha) A_nu(T, Y_j)
                           - etr(-T/alpha) )^2 ]

    with P0 the null at identity scale (E T = alpha I).  Returns the
    estimate and its Monte Carlo standard error.  This is the testing oracle
    for the closed-form statistic_T2.
    """
    alpha, ctrl = _resolve_alpha_ctrl(cfg_or_alpha, ctrl)
    ctrl = ctrl or SeriesControl()
    std = sample if isinstance(sample, StandardizedSample) else \
        standardize_sample(sample)
    n, m = std.n, std.m
    if not alpha > hard_alpha_bound(m):
        raise DomainError(
            f"alpha={alpha} must exceed (2m-1)/2 = {hard_alpha_bound(m)}"
        )
    gen = as_generator(rng, _STREAM_ORACLE)
    model = WishartModel(alpha, np.eye(m))
    t_eigs = np.linalg.eigvalsh(wishart_sample(model, draws, gen))

    table = build_zonal_table(m)
    # hank[r, j] accumulates Gamma_m(alpha) A_nu(T_r, Y_j) layer by layer.
    hank = np.zeros((draws, n))
    quiet = 0
    for k in range(ctrl.hard_cap + 1):
        scale = _layer_scales(table, k, alpha)
        vt = table.layer_values(k, t_eigs) * scale[:, None]  # (p, draws)
        vy = table.layer_values(k, std.eigenvalues) * scale[:, None]  # (p, n)
        term = ((-1.0) ** k) * (vt.T @ vy)
        hank += term
        sup = float(np.max(np.abs(term)))
        if sup <= ctrl.abs_tol and sup <= ctrl.rel_tol * max(
            float(np.max(np.abs(hank))), 1e-300
        ):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
    else:
        raise SeriesNonConvergenceError(
            "two-argument Bessel layer series for the oracle did not "
            "converge",
            partial_value=float(np.max(np.abs(hank))),
            weight_reached=ctrl.hard_cap,
        )

    diff = hank.mean(axis=1) - np.exp(-t_eigs.sum(axis=1) / alpha)
    sq = n * diff * diff
    est = float(sq.mean())
    se = float(sq.std(ddof=1) / sqrt(draws))
    return est, se


def _standardize_batch(mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mean-standardize each replicate of an (R, n, m, m) stack; returns
    eigenvalues (R, n, m) and traces (R, n)."""
    mean = mats.mean(axis=1)
    w, q = np.linalg.eigh(mean)
    if np.any(w[:, 0] <= 0):
        raise DegenerateSampleError("a replicate's sample mean is singular")
    inv_sqrt = (q / np.sqrt(w)[:, None, :]) @ q.transpose(0, 2, 1)
    std = inv_sqrt[:, None] @ mats @ inv_sqrt[:, None]
    std = 0.5 * (std + std.transpose(0, 1, 3, 2))
    eigs = np.linalg.eigvalsh(std)
    return eigs, eigs.sum(axis=2)


def _simulate_null_stats(alpha: float, m: int, n: int, reps: int,
                         seed, ctrl: SeriesControl | None,
                         rep_chunk: int = 0) -> np.ndarray:
    """Sorted T2 statistics over ``reps`` independent null samples of size n."""
    gen = as_generator(seed, _STREAM_CALIBRATION)
    model = WishartModel(alpha, np.eye(m))
    if rep_chunk <= 0:
        # Keep each replicate block of matrices near ~100 MB.
        rep_chunk = max(1, int(12_000_000 / max(n * m * m, 1)))
    stats = np.empty(reps)
    for start in range(0, reps, rep_chunk):
        count = min(rep_chunk, reps - start)
        mats = wishart_sample(model, count * n, gen).reshape(count, n, m, m)
        eigs, traces = _standardize_batch(mats)
        del mats
        stats[start:start + count] = _statistic_batch(eigs, traces, alpha, ctrl)
    return np.sort(stats)


@lru_cache(maxsize=8)
def _cached_null_stats(alpha: float, m: int, n: int, reps: int,
                       seed: int, ctrl_key: tuple) -> np.ndarray:
    """Calibration cache: repeated tests with identical (alpha, m, n, reps,
    seed, series controls) reuse one simulated null distribution."""
    ctrl = SeriesControl(*ctrl_key) if ctrl_key else SeriesControl()
    out = _simulate_null_stats(alpha, m, n, reps, seed, ctrl)
    out.setflags(write=False)
    return out


def _ctrl_key(ctrl: SeriesControl | None) -> tuple:
    c = ctrl or SeriesControl()
    return (c.rel_tol, c.abs_tol, c.max_weight, c.hard_cap)


def _order_stat_quantile(order: np.ndarray, level: float
                         ) -> tuple[float, float]:
    """Empirical upper quantile with an order-statistic standard error."""
    reps = len(order)
    target = (1.0 - level) * (reps - 1)
    idx = int(round(target))
    band = sqrt(reps * level * (1.0 - level))
    lo = order[max(0, int(target - band))]
    hi = order[min(reps - 1, int(target + band))]
    return float(order[idx]), float(0.5 * (hi - lo))


def mc_null_quantile(alpha: float, m: int, n: int, level: float = 0.05,
                     reps: int = 10000, seed: int | None = None,
                     ctrl: SeriesControl | None = None,
                     return_stats: bool = False):
    """Monte Carlo null critical value of T2 at sample size n.

    Draws ``reps`` samples of size n from the standard null (identity scale;
    the standardized sample's law does not depend on the true scale),
    computes the statistic for each, and returns (critical_value,
    standard_error) — plus the sorted statistics when ``return_stats`` —
    where the critical value is the empirical (1 - level)-quantile and the
    standard error is half the spread of the order statistics one binomial
    standard deviation around the target rank.
    """
    if n < 2:
        raise DegenerateSampleError("calibration needs n >= 2")
    if not 0 < level < 1:
        raise DomainError("level must be in (0, 1)")
    if reps < 100:
        raise DomainError("reps must be at least 100")
    _require_alpha(alpha, m, allow_below_theorem=True)
    order = _cached_null_stats(
        float(alpha), int(m), int(n), int(reps),
        0 if seed is None else int(seed), _ctrl_key(ctrl),
    )
    crit, se = _order_stat_quantile(order, level)
    if return_stats:
        return crit, se, order
    return crit, se


def _asymptotic_deltas(alpha: float, m: int, eps: float = 1e-10):
    """Leading (eigenvalue, multiplicity) pairs of the limit law: every
    eigenvalue whose ladder position lies within the truncation rank."""
    spec = eigen_spectrum(alpha, m, eps=eps)
    r, _ = truncation_rank(alpha, m, eps)
    keep = sum(count_partitions(w, m) for w in range(r + 1))
    flat = spec.flat_deltas()[:keep]
    return [(float(v), 1) for v in flat]


def _conservative_deltas(alpha: float, m: int, eps: float = 1e-10):
    """Diagonal upper bound of the spectrum: (rho_w, p_m(w)) for w <= r.

    The operator is the diagonal minus a positive rank-two part, so its
    eigenvalues are dominated one-by-one by the diagonal values; the
    resulting critical value can only over-cover (the mass dropped beyond r
    is below eps times the total trace).
    """
    r, _ = truncation_rank(alpha, m, eps)
    return [(rho(w, alpha, m), count_partitions(w, m)) for w in range(r + 1)]


@dataclass(frozen=True)
class GofReport:
    """Result of the goodness-of-fit test."""

    statistic: float
    n: int
    m: int
    alpha: float
    method: str
    level: float
    critical_value: float
    p_value: float
    reject: bool
    mc_reps: int | None
    seed: int | None
    critical_value_se: float
    p_value_se: float
    flags: tuple = ()

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "n": self.n,
            "m": self.m,
            "alpha": self.alpha,
            "method": self.method,
            "level": self.level,
            "critical_value": self.critical_value,
            "critical_value_se": self.critical_value_se,
            "p_value": self.p_value,
            "p_value_se": self.p_value_se,
            "reject": self.reject,
            "mc_reps": self.mc_reps,
            "seed": self.seed,
            "flags": list(self.flags),
            "version": __version__,
            "config": {
                "alpha": self.alpha,
                "method": self.method,
                "level": self.level,
                "mc_reps": self.mc_reps,
                "seed": self.seed,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def gof_test(sample, config: GofConfig) -> GofReport:
    """Run the goodness-of-fit test on an (n, m, m) sample stack."""
    std = sample if isinstance(sample, StandardizedSample) else \
        standardize_sample(sample)
    alpha, m, n = config.alpha, std.m, std.n

    flags = _require_alpha(
        alpha, m, config.allow_alpha_below_theorem_bound
    )

    seed = config.seed
    if seed is None:
        seed = int(np.random.SeedSequence().entropy % (2**63))
        flags.append("seed_drawn_from_entropy")

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        t2 = statistic_T2(std, alpha, config.series)

        if config.method == "mc":
            crit, crit_se, order = mc_null_quantile(
                alpha, m, n, config.level, config.mc_reps, seed,
                ctrl=config.series, return_stats=True,
            )
            p = float(np.mean(order >= t2))
            p_se = float(sqrt(max(p * (1 - p), 1.0 / config.mc_reps)
                              / config.mc_reps))
            mc_reps = config.mc_reps
        elif config.method == "asymptotic":
            deltas = _asymptotic_deltas(alpha, m)
            crit, crit_se = weighted_chisq_quantile(
                deltas, config.level,
                rng=RngStream(seed, _STREAM_LIMIT_QUANTILE).generator(),
            )
            p, p_se = weighted_chisq_tail(
                deltas, t2,
                rng=RngStream(seed, _STREAM_LIMIT_TAIL).generator(),
            )
            mc_reps = None
            flags.append("asymptotic_calibration")
        else:  # conservative
            deltas = _conservative_deltas(alpha, m)
            crit, crit_se = weighted_chisq_quantile(
                deltas, config.level,
                rng=RngStream(seed, _STREAM_LIMIT_QUANTILE).generator(),
            )
            p, p_se = weighted_chisq_tail(
                deltas, t2,
                rng=RngStream(seed, _STREAM_LIMIT_TAIL).generator(),
            )
            mc_reps = None
            flags.append("conservative_calibration")

    for w in caught:
        name = type(w.message).__name__
        if name not in flags:
            flags.append(name)

    return GofReport(
        statistic=t2,
        n=n,
        m=m,
        alpha=alpha,
        method=config.method,
        level=config.level,
        critical_value=crit,
        p_value=p,
        reject=bool(t2 > crit),
        mc_reps=mc_reps,
        seed=seed,
        critical_value_se=crit_se,
        p_value_se=p_se,
        flags=tuple(flags),
    )
