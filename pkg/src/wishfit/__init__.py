"""Goodness-of-fit testing for the Wishart family with known shape.

The package tests whether an i.i.d. sample of symmetric positive definite
matrices follows a Wishart distribution with a given shape parameter, using
an L2 distance between the empirical orthogonally invariant Hankel transform
of the standardized sample and the transform the null hypothesis implies.
It ships the full computational stack that the statistic needs: partitions
and zonal polynomials, matrix-argument special functions, Laguerre
polynomials of matrix argument, Wishart sampling and transforms, the
spectrum of the limiting covariance operator, Monte Carlo and asymptotic
calibration, contiguous alternatives for power studies, and a price-data
ingestion pipeline with a command-line interface.
"""

from ._version import __version__
from .errors import (
    CrossMethodError,
    DataFormatError,
    DataQualityWarning,
    DegenerateSampleError,
    DomainError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    SeriesAccuracyWarning,
    SeriesNonConvergenceError,
    StatisticValueWarning,
    WishfitError,
)
from .linalg import SeriesControl, SpdMatrix, as_symmetric, sym_eig
from .partitions import (
    Partition,
    count_partitions,
    enumerate_partitions,
    partitional_shifted_factorial,
    partitions_upto,
    shifted_factorial,
)
from .zonal import (
    build_zonal_table,
    generalized_binomial,
    log_zonal_at_identity,
    zonal_at_identity,
    zonal_value,
)
from .specialfn import (
    BesselOrder,
    bessel_A,
    bessel_A2,
    hyp1F1,
    hyp1F1_2,
    log_multigamma,
    multidigamma,
    multigamma,
)
from .laguerre import (
    LaguerreContext,
    eigenfunction_L,
    laguerre_L,
    laguerre_normalized,
    laguerre_value_at_zero,
)
from .wishart import (
    RngStream,
    WishartModel,
    as_generator,
    empirical_hankel,
    hankel_wishart,
    wishart_logpdf,
    wishart_sample,
)
from .spectrum import (
    G_functions,
    SpectrumResult,
    beta_and_balpha,
    build_operator_matrix,
    coeff_a,
    coeff_b,
    cov_kernel_K,
    eigen_spectrum,
    find_deltas_by_roots,
    kotz_one_term,
    rho,
    rho_tail,
    trace_s,
    trace_s0,
    truncation_rank,
    weighted_chisq_quantile,
    weighted_chisq_tail,
)
from .goftest import (
    GofConfig,
    GofReport,
    StandardizedSample,
    gof_test,
    kernel_constants,
    kernel_h,
    mc_null_quantile,
    standardize_sample,
    statistic_T2,
    statistic_oracle,
    statistic_oracle_mc,
)
from .alternatives import (
    AlternativeFamily,
    BahadurResult,
    bahadur_b2,
    h_limit,
    matrix_f_sampler,
    power_sim,
    sample_alternative,
    shift_c,
)
from .pipeline import (
    MatrixSample,
    PriceTable,
    load_calendar,
    load_matrices,
    load_prices,
    log_returns,
    period_covariances,
    save_matrices,
)

__all__ = [
    "__version__",
    # errors
    "WishfitError", "DomainError", "NotSymmetricError",
    "NotPositiveDefiniteError", "DegenerateSampleError",
    "SeriesNonConvergenceError", "CrossMethodError", "DataFormatError",
    "SeriesAccuracyWarning", "StatisticValueWarning", "DataQualityWarning",
    # linalg
    "SeriesControl", "SpdMatrix", "as_symmetric", "sym_eig",
    # partitions
    "Partition", "enumerate_partitions", "partitions_upto",
    "count_partitions", "shifted_factorial", "partitional_shifted_factorial",
    # zonal
    "build_zonal_table", "zonal_value", "zonal_at_identity",
    "log_zonal_at_identity", "generalized_binomial",
    # specialfn
    "BesselOrder", "bessel_A", "bessel_A2", "hyp1F1", "hyp1F1_2",
    "multigamma", "log_multigamma", "multidigamma",
    # laguerre
    "LaguerreContext", "laguerre_L", "laguerre_value_at_zero",
    "laguerre_normalized", "eigenfunction_L",
    # wishart
    "RngStream", "as_generator", "WishartModel", "wishart_sample",
    "wishart_logpdf", "hankel_wishart", "empirical_hankel",
    # spectrum
    "beta_and_balpha", "rho", "rho_tail", "coeff_a", "coeff_b",
    "build_operator_matrix", "SpectrumResult", "eigen_spectrum",
    "G_functions", "find_deltas_by_roots", "trace_s0", "trace_s",
    "truncation_rank", "weighted_chisq_quantile", "weighted_chisq_tail",
    "kotz_one_term", "cov_kernel_K",
    # goftest
    "GofConfig", "GofReport", "StandardizedSample", "standardize_sample",
    "kernel_constants", "kernel_h", "statistic_T2", "statistic_oracle",
    "statistic_oracle_mc", "mc_null_quantile", "gof_test",
    # alternatives
    "AlternativeFamily", "sample_alternative", "h_limit", "shift_c",
    "power_sim", "BahadurResult", "bahadur_b2", "matrix_f_sampler",
    # pipeline
    "PriceTable", "MatrixSample", "load_prices", "load_calendar",
    "log_returns", "period_covariances", "save_matrices", "load_matrices",
]
