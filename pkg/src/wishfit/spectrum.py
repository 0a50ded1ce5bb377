"""Spectrum of the limiting covariance operator of the test statistic.

Under the null hypothesis the statistic converges to a weighted sum of
independent chi-square variables.  The weights are the eigenvalues of a
covariance operator that is an explicit rank-two perturbation of a diagonal
operator in an orthonormal Laguerre-type basis indexed by partitions:

    S = diag(rho_kappa) - a a' - b b' / (alpha^3 m)

where rho_kappa depends only on the partition weight.  Two independent
eigenvalue methods are provided — dense symmetric eigendecomposition of the
truncated matrix, and root finding on the rank-two characteristic function —
plus closed-form traces, the truncation rule for how many weights matter,
Monte Carlo quantiles/tails for weighted chi-square laws, a one-term
chi-square approximation, and the covariance kernel itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import exp, log, sqrt

import numpy as np
from scipy.optimize import brentq

from ._version import __version__
from .errors import CrossMethodError, DomainError
from .linalg import SeriesControl
from .partitions import (
    Partition,
    count_partitions,
    log_partitional_shifted_factorial,
    partitions_upto,
)
from .specialfn import BesselOrder, bessel_A2
from .wishart import as_generator
from .zonal import log_zonal_at_identity

__all__ = [
    "beta_and_balpha",
    "rho",
    "coeff_a",
    "coeff_b",
    "build_operator_matrix",
    "SpectrumResult",
    "eigen_spectrum",
    "G_functions",
    "find_deltas_by_roots",
    "trace_s0",
    "trace_s",
    "rho_tail",
    "truncation_rank",
    "weighted_chisq_quantile",
    "weighted_chisq_tail",
    "kotz_one_term",
    "cov_kernel_K",
]


def _check_alpha(alpha: float, m: int) -> None:
    if m < 1:
        raise DomainError("dimension m must be a positive integer")
    if not alpha > (2 * m - 1) / 2:
        raise DomainError(
            f"alpha={alpha} must exceed (2m-1)/2 = {(2 * m - 1) / 2} for the "
            "spectrum machinery"
        )


def beta_and_balpha(alpha: float) -> tuple[float, float]:
    """Scaling constants of the limiting spectrum.

    beta = sqrt((alpha+4)/alpha) and b_alpha = sqrt(1 + alpha(1-beta)/2).
    b_alpha^2 is the root in (0, 1) of x^2 - (alpha+2)x + 1 = 0, so
    r = b_alpha^4 lies in (0, 1) and (1-r)/(alpha sqrt(r)) = beta.
    """
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    beta = sqrt((alpha + 4.0) / alpha)
    b2 = 1.0 + 0.5 * alpha * (1.0 - beta)
    if not 0.0 < b2 < 1.0:
        raise DomainError(f"b_alpha^2 = {b2} fell outside (0, 1)")
    return beta, sqrt(b2)


def _log_rho_weight(weight: int, alpha: float, m: int) -> float:
    """log of the diagonal eigenvalue attached to partitions of a weight."""
    _, b = beta_and_balpha(alpha)
    return m * alpha * log(alpha) + (4.0 * weight + 2.0 * m * alpha) * log(b)


def rho(kappa_or_weight, alpha: float, m: int) -> float:
    """Diagonal operator eigenvalue rho = alpha^{m alpha} b^{4|kappa| + 2 m alpha}.

    Depends on the partition only through its weight; accepts either a
    partition or a plain weight.
    """
    _check_alpha(alpha, m)
    if isinstance(kappa_or_weight, (int, np.integer)):
        w = int(kappa_or_weight)
    else:
        w = Partition(kappa_or_weight).weight
    if w < 0:
        raise ValueError("weight must be non-negative")
    return exp(_log_rho_weight(w, alpha, m))


def _log_csq_coeff(kappa, alpha: float, m: int) -> float:
    """log of C_kappa(I_m) [alpha]_kappa / |kappa|!  (all factors positive)."""
    k = Partition(kappa).weight
    return (
        log_zonal_at_identity(kappa, m)
        + log_partitional_shifted_factorial(alpha, kappa)
        - sum(log(i) for i in range(2, k + 1))
    )


def coeff_a(kappa, alpha: float, m: int) -> float:
    """Basis coefficient of the null Hankel-transform target:
    a_kappa = sqrt(C_kappa(I)[alpha]_kappa/|kappa|!) beta^{m alpha/2} rho_kappa."""
    _check_alpha(alpha, m)
    kappa = Partition(kappa)
    if kappa.length > m:
        raise DomainError(f"kappa={tuple(kappa)} has more than m={m} parts")
    beta, _ = beta_and_balpha(alpha)
    lg = (
        0.5 * _log_csq_coeff(kappa, alpha, m)
        + 0.5 * m * alpha * log(beta)
        + _log_rho_weight(kappa.weight, alpha, m)
    )
    return exp(lg)


def coeff_b(kappa, alpha: float, m: int) -> float:
    """Basis coefficient of the trace-weighted target:
    b_kappa = a_kappa * alpha^2 * (m b_alpha^2 - |kappa)| beta)."""
    kappa = Partition(kappa)
    beta, b = beta_and_balpha(alpha)
    return coeff_a(kappa, alpha, m) * alpha**2 * (m * b * b - kappa.weight * beta)


def _default_max_weight(alpha: float, m: int) -> int:
    """Default truncation weight: at least 40, and far enough down the ladder
    that rho has decayed to 1e-14 of its weight-zero value."""
    _, b = beta_and_balpha(alpha)
    need = int(np.ceil(-14.0 * log(10.0) / (4.0 * log(b))))
    return max(40, need)


def build_operator_matrix(alpha: float, m: int,
                          max_weight: int | None = None
                          ) -> tuple[np.ndarray, tuple[Partition, ...]]:
    """Dense truncated covariance operator in the canonical partition order.

    Returns (S, partitions): S[i, j] = rho_i delta_ij - a_i a_j - b_i b_j/(alpha^3 m)
    over all partitions of weight <= max_weight with at most ``m`` parts.
    """
    _check_alpha(alpha, m)
    if max_weight is None:
        max_weight = _default_max_weight(alpha, m)
    parts = partitions_upto(max_weight, m)
    avec = np.array([coeff_a(k, alpha, m) for k in parts])
    bvec = np.array([coeff_b(k, alpha, m) for k in parts])
    rvec = np.array([rho(k.weight, alpha, m) for k in parts])
    s = np.diag(rvec) - np.outer(avec, avec) - np.outer(bvec, bvec) / (alpha**3 * m)
    return s, parts


@dataclass(frozen=True)
class SpectrumResult:
    """Computed spectrum of the limiting covariance operator."""

    alpha: float
    m: int
    beta: float
    b_alpha: float
    #: [(weight, rho value)] for weights 0..max_weight.
    rho: list
    #: [(eigenvalue, multiplicity)] in descending eigenvalue order.
    deltas: list
    trace_S0: float
    trace_S: float
    #: {"eps": ..., "r": ..., "N": ...} from the truncation rule.
    truncation: dict
    method: str
    #: Sum of all truncated-matrix eigenvalues (for trace reconciliation).
    matrix_trace: float = 0.0
    max_weight: int = 0
    cluster_tol: float = 0.0

    def flat_deltas(self) -> np.ndarray:
        """All eigenvalues repeated by multiplicity, descending."""
        out: list[float] = []
        for v, mult in self.deltas:
            out.extend([v] * int(mult))
        return np.array(out)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "m": self.m,
            "beta": self.beta,
            "b_alpha": self.b_alpha,
            "rho": [[int(w), float(v)] for w, v in self.rho],
            "deltas": [[float(v), int(c)] for v, c in self.deltas],
            "trace_S0": self.trace_S0,
            "trace_S": self.trace_S,
            "truncation": self.truncation,
            "method": self.method,
            "version": __version__,
            "config": {
                "alpha": self.alpha,
                "m": self.m,
                "max_weight": self.max_weight,
                "cluster_tol": self.cluster_tol,
                "method": self.method,
                "eps": self.truncation.get("eps"),
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def trace_s0(alpha: float, m: int) -> float:
    """Closed-form trace of the unperturbed diagonal operator:
    alpha^{m alpha} b^{2 m alpha} / prod_{k=1..m} (1 - b^{4k})."""
    _check_alpha(alpha, m)
    _, b = beta_and_balpha(alpha)
    lg = m * alpha * (log(alpha) + 2.0 * log(b))
    for k in range(1, m + 1):
        lg -= np.log1p(-(b ** (4 * k)))
    return exp(lg)


def trace_s(alpha: float, m: int) -> float:
    """Closed-form trace of the full operator: trace_s0 minus
    (alpha/(alpha+2))^{m alpha} (1 + (m alpha + 1)/(alpha+2)^2)."""
    _check_alpha(alpha, m)
    ma = m * alpha
    correction = exp(ma * (log(alpha) - log(alpha + 2.0))) * (
        1.0 + (ma + 1.0) / (alpha + 2.0) ** 2
    )
    return trace_s0(alpha, m) - correction


def rho_tail(alpha: float, m: int, beyond_weight: int) -> float:
    """Sum of rho over all partitions of weight > beyond_weight (analytic
    trace of the diagonal part minus the finite partial sum)."""
    partial = sum(
        count_partitions(w, m) * rho(w, alpha, m) for w in range(beyond_weight + 1)
    )
    return max(trace_s0(alpha, m) - partial, 0.0)


def _interlacing_check(flat: np.ndarray, alpha: float, m: int,
                       max_weight: int, tol: float) -> None:
    """Verify rho_{xi_k} >= delta_k >= rho_{xi_{k+2}} on the reliable range."""
    parts = partitions_upto(max_weight, m)
    rho_ladder = np.array([rho(p.weight, alpha, m) for p in parts])
    # Only eigenvalues well above the truncation tail are trustworthy.
    safe = min(len(flat), len(parts) - 2)
    for k in range(safe):
        upper = rho_ladder[k]
        lower = rho_ladder[k + 2]
        if flat[k] > upper + tol or flat[k] < lower - tol:
            raise CrossMethodError(
                f"interlacing violated at index {k + 1}: delta={flat[k]:.6e} "
                f"not within [{lower:.6e}, {upper:.6e}] (tol {tol:.1e})"
            )


def eigen_spectrum(alpha: float, m: int, max_weight: int | None = None,
                   cluster_tol: float | None = None, eps: float = 1e-10,
                   method: str = "matrix") -> SpectrumResult:
    """Eigenvalues of the limiting covariance operator with multiplicities.

    method="matrix" (default): dense eigendecomposition of the truncated
    operator, clustered into (value, multiplicity) pairs within
    ``cluster_tol`` (default 1e-7 times the weight-zero rho) and verified
    against the interlacing inequalities.

    method="roots": eigenvalues from the rank-two characteristic function
    (see :func:`find_deltas_by_roots`) merged with the retained diagonal
    eigenvalues, cross-checked against the matrix method.  Within a fixed
    weight block the two perturbation vectors are proportional (their ratio
    depends on the weight only), so each level sheds exactly one eigenvalue
    and retains multiplicity ``count_partitions(w, m) - 1``.
    """
    _check_alpha(alpha, m)
    if max_weight is None:
        max_weight = _default_max_weight(alpha, m)
    rho0 = rho(0, alpha, m)
    if cluster_tol is None:
        cluster_tol = 1e-7 * rho0
    beta, b_alpha = beta_and_balpha(alpha)

    s, parts = build_operator_matrix(alpha, m, max_weight)
    eig = np.linalg.eigvalsh(s)[::-1]
    if eig[-1] < -1e-10 * rho0:
        raise CrossMethodError(
            f"operator matrix has a significantly negative eigenvalue "
            f"{eig[-1]:.3e}; the operator must be positive"
        )
    eig = np.clip(eig, 0.0, None)
    matrix_trace = float(np.sum(eig))

    _interlacing_check(eig, alpha, m, max_weight, tol=1e-9 * rho0)

    if method == "matrix":
        clusters: list[list[float]] = []
        for v in eig:
            if clusters and clusters[-1][0] - v <= cluster_tol:
                clusters[-1].append(v)
            else:
                clusters.append([v])
        deltas = [(float(np.mean(c)), len(c)) for c in clusters]
    elif method == "roots":
        roots = find_deltas_by_roots(alpha, m, k_max=max_weight)
        merged: list[tuple[float, int]] = [(r, 1) for r in roots]
        for w in range(max_weight + 1):
            extra = count_partitions(w, m) - 1
            if extra > 0:
                merged.append((rho(w, alpha, m), extra))
        merged.sort(key=lambda t: -t[0])
        deltas = merged
        # Cross-check: matrix eigenvalues that sit away from every diagonal
        # rho level must match the G-roots pairwise, 1e-8 absolute.  Below
        # ~10x the clustering tolerance the truncated matrix cannot resolve
        # the root/level structure, so the comparison stops there.
        floor = 10.0 * cluster_tol
        rho_vals = np.array([rho(w, alpha, m) for w in range(max_weight + 1)])
        non_rho = [
            float(v) for v in eig
            if v >= floor and np.min(np.abs(rho_vals - v)) > cluster_tol
        ]
        big_roots = [r for r in roots if r >= floor]
        if len(non_rho) != len(big_roots):
            raise CrossMethodError(
                f"root-based spectrum finds {len(big_roots)} displaced "
                f"eigenvalues above {floor:.3e} but the matrix method finds "
                f"{len(non_rho)}"
            )
        gap = max(
            (abs(a - b) for a, b in zip(non_rho, big_roots)), default=0.0
        )
        if gap > 1e-8:
            raise CrossMethodError(
                f"root-based spectrum disagrees with matrix spectrum by {gap:.3e}"
            )
    else:
        raise ValueError("method must be 'matrix' or 'roots'")

    r_trunc, n_trunc = truncation_rank(alpha, m, eps)
    return SpectrumResult(
        alpha=alpha,
        m=m,
        beta=beta,
        b_alpha=b_alpha,
        rho=[(w, rho(w, alpha, m)) for w in range(max_weight + 1)],
        deltas=deltas,
        trace_S0=trace_s0(alpha, m),
        trace_S=trace_s(alpha, m),
        truncation={"eps": eps, "r": r_trunc, "N": n_trunc},
        method=method,
        matrix_trace=matrix_trace,
        max_weight=max_weight,
        cluster_tol=cluster_tol,
    )


def G_functions(delta: float, alpha: float, m: int,
                k_max: int | None = None,
                pole_tol_factor: float = 1e-9) -> tuple[float, float, float, float]:
    """Rank-two characteristic functions (A, B, D, G) at the trial value delta.

    With rho_k the diagonal value at weight k, w_k = (m alpha)_k / k!,
    the sums S_A = sum w_k rho_k^2/(rho_k - delta), S_B likewise with the
    factor (b^2 - k beta/m)^2, and S_D with (b^2 - k beta/m):

        A = 1 - beta^{m alpha} S_A
        B = 1 - alpha m beta^{m alpha} S_B
        D = alpha^2 m beta^{m alpha} S_D
        G = alpha^3 m A B - D^2

    Eigenvalues of the operator that are not diagonal values are exactly the
    zeros of G.  A, B -> 1 and D -> 0 as delta -> -inf.  Evaluation within
    ``pole_tol_factor`` (relative) of a pole raises :class:`DomainError`.
    """
    _check_alpha(alpha, m)
    beta, b = beta_and_balpha(alpha)
    if k_max is None:
        k_max = max(_default_max_weight(alpha, m), 60)
    ma = m * alpha
    log_beta_pow = ma * log(beta)
    b2 = b * b

    s_a = s_b = s_d = 0.0
    log_w = 0.0  # log (m alpha)_k / k!
    for k in range(k_max + 1):
        if k > 0:
            log_w += log(ma + k - 1.0) - log(k)
        log_rho_k = _log_rho_weight(k, alpha, m)
        rho_k = exp(log_rho_k)
        gap = rho_k - delta
        if abs(gap) <= pole_tol_factor * rho_k:
            raise DomainError(
                f"delta={delta!r} is within the pole guard of the weight-{k} "
                f"eigenvalue {rho_k!r}"
            )
        base = exp(log_w + 2.0 * log_rho_k) / gap
        fac = b2 - k * beta / m
        s_a += base
        s_b += base * fac * fac
        s_d += base * fac
        # Terms decay like b^{8k} (m alpha)_k / k!; stop when negligible.
        if k > 2 and abs(base) * max(1.0, fac * fac) < 1e-18 * max(
            1.0, abs(s_a), abs(s_b)
        ):
            break

    bp = exp(log_beta_pow)
    a_val = 1.0 - bp * s_a
    b_val = 1.0 - alpha * m * bp * s_b
    d_val = alpha**2 * m * bp * s_d
    g_val = alpha**3 * m * a_val * b_val - d_val * d_val
    return a_val, b_val, d_val, g_val


def find_deltas_by_roots(alpha: float, m: int, k_max: int | None = None,
                         grid_per_gap: int = 240) -> list[float]:
    """Non-diagonal eigenvalues of the operator as zeros of the
    characteristic function G, scanned gap by gap down the rho ladder.

    Each open interval (rho_{k+1}, rho_k) is scanned on a log-spaced grid for
    sign changes of G, and each bracket is polished by Brent's method to
    near machine precision.  Returns the roots in descending order.
    """
    _check_alpha(alpha, m)
    if k_max is None:
        k_max = _default_max_weight(alpha, m)
    guard = 1e-8

    def g_of(x: float) -> float:
        return G_functions(x, alpha, m, k_max=k_max + 8)[3]

    roots: list[float] = []
    for w in range(k_max):
        hi = rho(w, alpha, m)
        lo = rho(w + 1, alpha, m)
        left = lo * (1.0 + guard)
        right = hi * (1.0 - guard)
        if left >= right:
            continue
        xs = np.exp(np.linspace(log(left), log(right), grid_per_gap))
        vals = np.array([g_of(x) for x in xs])
        for i in range(len(xs) - 1):
            if vals[i] == 0.0:
                roots.append(float(xs[i]))
            elif vals[i] * vals[i + 1] < 0.0:
                root = brentq(g_of, xs[i], xs[i + 1], xtol=1e-300, rtol=8.9e-16,
                              maxiter=200)
                roots.append(float(root))
    roots.sort(reverse=True)
    return roots


def truncation_rank(alpha: float, m: int, eps: float = 1e-10) -> tuple[int, int]:
    """Smallest weight r at which the retained diagonal mass reaches
    (1 - eps) of the full diagonal trace, and the count N = sum_{k=2..r} of
    partitions at each retained weight (the number of distinct chi-square
    terms beyond the two low-weight ones in the conservative bound).
    """
    _check_alpha(alpha, m)
    if not 0 < eps < 1:
        raise DomainError("eps must be in (0, 1)")
    target = (1.0 - eps) * trace_s0(alpha, m)
    partial = 0.0
    r = 0
    for w in range(0, 100000):
        partial += count_partitions(w, m) * rho(w, alpha, m)
        if partial >= target:
            r = w
            break
    else:
        raise ArithmeticError("truncation scan failed to reach the target mass")
    n = sum(count_partitions(k, m) for k in range(2, r + 1))
    return r, n


def _draw_weighted_chisq(deltas, draws: int, rng: np.random.Generator) -> np.ndarray:
    total = np.zeros(draws)
    for value, mult in deltas:
        if mult <= 0 or value <= 0:
            continue
        total += value * rng.chisquare(int(mult), size=draws)
    return total


def weighted_chisq_quantile(deltas, level: float, draws: int = 2_000_000,
                            rng=None) -> tuple[float, float]:
    """Monte Carlo upper quantile of sum_i delta_i chi2(mult_i).

    ``deltas`` is a sequence of (value, multiplicity) pairs.  Returns
    (quantile at 1-level, standard error) where the standard error is the
    half-width between the order statistics one binomial standard deviation
    on either side of the target rank.
    """
    if not 0 < level < 1:
        raise DomainError("level must be in (0, 1)")
    gen = as_generator(rng, 901)
    total = np.sort(_draw_weighted_chisq(deltas, draws, gen))
    target = (1.0 - level) * (draws - 1)
    idx = int(round(target))
    band = sqrt(draws * level * (1.0 - level))
    lo = total[max(0, int(target - band))]
    hi = total[min(draws - 1, int(target + band))]
    return float(total[idx]), float(0.5 * (hi - lo))


def weighted_chisq_tail(deltas, t: float, draws: int = 2_000_000,
                        rng=None) -> tuple[float, float]:
    """Monte Carlo tail probability P(sum_i delta_i chi2(mult_i) >= t),
    with its binomial standard error."""
    gen = as_generator(rng, 902)
    total = _draw_weighted_chisq(deltas, draws, gen)
    p = float(np.mean(total >= t))
    return p, float(sqrt(max(p * (1.0 - p), 1.0 / draws) / draws))


def kotz_one_term(deltas, level: float | None = None,
                  t: float | None = None) -> float:
    """One-term chi-square approximation to the weighted chi-square law.

    With M the total number of retained unit chi-squares and d1, dM the
    largest and smallest retained weights, the tail at t is approximated by
    P(chi2_M >= 2 t/(d1 + dM)) and the upper-level critical value by
    (d1 + dM)/2 * chi2_{M, 1-level}.  Pass exactly one of ``level`` or ``t``.
    """
    from scipy.stats import chi2

    flat: list[float] = []
    for value, mult in deltas:
        flat.extend([float(value)] * int(mult))
    if not flat:
        raise ValueError("need at least one (value, multiplicity) pair")
    flat.sort(reverse=True)
    big, small = flat[0], flat[-1]
    mm = len(flat)
    if (level is None) == (t is None):
        raise ValueError("pass exactly one of level= or t=")
    if level is not None:
        return float(0.5 * (big + small) * chi2.ppf(1.0 - level, df=mm))
    return float(chi2.sf(2.0 * t / (big + small), df=mm))


def cov_kernel_K(s_mat, t_mat, alpha: float,
                 ctrl: SeriesControl | None = None) -> float:
    """Covariance kernel of the limiting Gaussian field at SPD (S, T):

    etr(-(S+T)/alpha) [ Gamma_m(alpha) A_nu(-S/alpha^2, T)
                        - (tr S)(tr T)/(alpha^3 m) - 1 ]
    with nu = alpha - (m+1)/2.
    """
    s_arr = np.asarray(s_mat, dtype=float)
    t_arr = np.asarray(t_mat, dtype=float)
    m = s_arr.shape[0]
    _check_alpha(alpha, m)
    order = BesselOrder(alpha - (m + 1) / 2, m)
    tr_s = float(np.trace(s_arr))
    tr_t = float(np.trace(t_arr))
    core = bessel_A2(-s_arr / alpha**2, t_arr, order, ctrl, scaled=True)
    return exp(-(tr_s + tr_t) / alpha) * (
        core - tr_s * tr_t / (alpha**3 * m) - 1.0
    )
