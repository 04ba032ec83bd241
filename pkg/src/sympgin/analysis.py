"""Limit extraction: a + b/sqrt(N) + c/N least squares and log-log rate fits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = ["SeriesFit", "fit_series", "rate_fit"]


@dataclass(frozen=True)
class SeriesFit:
    """Coefficients of value ~ a + b/sqrt(N) + c/N and the RMS misfit."""

    a: float
    b: float
    c: float
    residual: float


def fit_series(samples: Sequence[tuple]) -> SeriesFit:
    """Least-squares fit of (N, value) pairs to the basis {1, N^-1/2, N^-1}.

    Solved by QR/SVD (never normal equations); the N-values are rescaled by
    their geometric mean first so the design stays well conditioned.
    """
    if len(samples) < 3:
        raise ValueError("need at least 3 samples")
    N = np.array([float(n) for n, _ in samples])
    v = np.array([float(x) for _, x in samples])
    if np.unique(N).size < 3:
        raise ValueError("need at least 3 distinct N values")
    if np.any(N <= 0):
        raise ValueError("N values must be positive")
    gm = math.exp(np.log(N).mean())
    u = np.sqrt(gm / N)
    design = np.vstack([np.ones_like(u), u, u * u]).T
    coef, *_ = np.linalg.lstsq(design, v, rcond=None)
    misfit = design @ coef - v
    return SeriesFit(
        a=float(coef[0]),
        b=float(coef[1] * math.sqrt(gm)),
        c=float(coef[2] * gm),
        residual=float(np.sqrt(np.mean(misfit**2))),
    )


def rate_fit(samples: Sequence[tuple]) -> float:
    """Slope of log(error) against log(N) (least squares)."""
    if len(samples) < 3:
        raise ValueError("need at least 3 samples")
    N = np.array([float(n) for n, _ in samples])
    e = np.array([float(x) for _, x in samples])
    if np.any(e <= 0):
        raise ValueError("errors must be positive")
    if np.any(N <= 0):
        raise ValueError("N values must be positive")
    slope = np.polyfit(np.log(N), np.log(e), 1)[0]
    return float(slope)
