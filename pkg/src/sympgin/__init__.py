"""Pfaffian correlation kernels of the symplectic elliptic Ginibre ensemble.

Finite-N pre-kernels in overflow-safe scaled arithmetic, their bulk/edge
scaling limits with the 1/sqrt(N) edge correction, skew-orthogonal
polynomial cross-checks, Pfaffian assembly of k-point correlations, a
Monte Carlo sampler for the elliptic law, and limit-extraction fits.
"""

__version__ = "0.1.0"

from .analysis import SeriesFit, fit_series, rate_fit
from .hermite import (
    AsymptoticFrame,
    hermite_asymptotic,
    hermite_inequality_holds,
    hermite_scaled,
    hermite_sequence_scaled,
    weighted_hermite_term,
)
from .kernels import (
    KernelContext,
    Regime,
    cd_residual,
    cd_residual_transformed,
    edge_point,
    kappa_hat,
    kappa_tilde,
    one_point_density,
    potential_Q,
    prekernel_kappa_N,
    r_N_fn,
    rescale_map,
)
from .limits import (
    bulk_density,
    edge_density,
    edge_density_correction,
    kappa_a,
    kappa_bulk,
    kappa_edge,
    kappa_edge_sub,
    r_half,
    r_limit,
)
from .pfaffian import SkewKernelMatrix, correlation_k, pfaffian
from .sampler import EigenvalueSample, rescaled_cloud, sample
from .scaled import ScaledComplex
from .special import dawson, erf_c, erfc_c, erfcx_c, faddeeva

__all__ = [
    "__version__",
    "ScaledComplex",
    "SeriesFit",
    "fit_series",
    "rate_fit",
    "AsymptoticFrame",
    "hermite_scaled",
    "hermite_sequence_scaled",
    "hermite_asymptotic",
    "hermite_inequality_holds",
    "weighted_hermite_term",
    "KernelContext",
    "Regime",
    "edge_point",
    "potential_Q",
    "rescale_map",
    "prekernel_kappa_N",
    "kappa_hat",
    "kappa_tilde",
    "r_N_fn",
    "cd_residual",
    "cd_residual_transformed",
    "one_point_density",
    "kappa_bulk",
    "kappa_edge",
    "kappa_edge_sub",
    "kappa_a",
    "bulk_density",
    "edge_density",
    "edge_density_correction",
    "r_limit",
    "r_half",
    "SkewKernelMatrix",
    "pfaffian",
    "correlation_k",
    "EigenvalueSample",
    "sample",
    "rescaled_cloud",
    "faddeeva",
    "erf_c",
    "erfc_c",
    "erfcx_c",
    "dawson",
]
