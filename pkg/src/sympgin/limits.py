"""Closed-form limiting kernels and densities (bulk, edge, outside).

The limiting pre-kernels of the local statistics along the real axis:

    bulk    kappa_bulk(z, w) = sqrt(pi) e^{z^2 + w^2} erf(z - w)
    edge    kappa_edge(z, w) = e^{2zw} int_{-inf}^0 e^{-s^2}
                               sinh(2s(w - z)) erfc(z + w - s) ds
    outside 0

together with the tau-dependent 1/sqrt(N) edge correction, the moving-point
family kappa_a interpolating between them, the limiting one-point densities,
and the limits r, r^{1/2} of the ODE inhomogeneity.

Every exp(quadratic) * erfc product is evaluated through the scaled
complementary error function (see special.exp_sq_erfc) so that nothing
overflows when the result itself is representable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy import special as _sp

from .quadrature import adaptive_gk
from .special import exp_sq_erfc

__all__ = [
    "EdgeQuadratureSpec",
    "kappa_bulk",
    "kappa_edge",
    "kappa_edge_sub",
    "kappa_a",
    "bulk_density",
    "edge_density",
    "edge_density_correction",
    "r_limit",
    "r_half",
]

_SQRT2 = math.sqrt(2.0)
_SQRTPI = math.sqrt(math.pi)


@dataclass(frozen=True)
class EdgeQuadratureSpec:
    """Truncation and tolerance budget for the semi-infinite edge integrals.

    The truncation point is chosen so the discarded Gaussian tail is below
    tolerance/10; the defaults come from |integrand| <= 2 e^{-s(s - 2 c)}
    for |s| beyond the linear-growth scale c of the integrand.
    """

    truncation: float
    tolerance: float = 1e-10
    max_subdivisions: int = 4000

    def __post_init__(self):
        if self.truncation >= 0:
            raise ValueError("truncation must be negative")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


def _edge_spec(z: complex, w: complex, tol: float = 1e-10) -> EdgeQuadratureSpec:
    cut = -8.0 - abs(2.0 * (w - z)) - abs(z + w)
    return EdgeQuadratureSpec(truncation=cut, tolerance=tol)


def kappa_bulk(z: complex, w: complex) -> complex:
    """Bulk limiting pre-kernel sqrt(pi) e^{z^2+w^2} erf(z - w)."""
    z, w = complex(z), complex(w)
    u = z - w
    sign = 1.0
    if u.real < 0.0 or (u.real == 0.0 and u.imag < 0.0):
        u, sign = -u, -1.0
    # erf(u) = 1 - e^{-u^2} erfcx(u); fold exponents: z^2+w^2-u^2 = 2zw
    main = cmath.exp(z * z + w * w)
    corr = exp_sq_erfc(z * z + w * w, u)
    return sign * _SQRTPI * (main - corr)


def kappa_edge(z: complex, w: complex, spec: EdgeQuadratureSpec | None = None) -> complex:
    """Edge limiting pre-kernel (adaptive quadrature, abs tol 1e-10)."""
    z, w = complex(z), complex(w)
    if z == w:
        return 0j
    if spec is None:
        spec = _edge_spec(z, w)
    d = w - z

    def integrand(s: float) -> complex:
        a = z + w - s
        # e^{-s^2} sinh(2 s d) erfc(a), exponents combined per branch
        return 0.5 * (
            exp_sq_erfc(-s * s + 2.0 * s * d, a)
            - exp_sq_erfc(-s * s - 2.0 * s * d, a)
        )

    val = adaptive_gk(integrand, spec.truncation, 0.0,
                      tol=spec.tolerance, max_subdivisions=spec.max_subdivisions)
    return cmath.exp(2.0 * z * w) * val


def kappa_edge_sub(tau: float, z: complex, w: complex) -> complex:
    """1/sqrt(N) edge correction kernel; the only tau-dependent limit."""
    if not 0.0 <= tau < 1.0:
        raise ValueError("tau must lie in [0, 1)")
    z, w = complex(z), complex(w)
    c = (1.0 - 2.0 * tau) / (1.0 + tau)
    base = z * z + w * w
    gauss = 2.0 * math.sqrt(2.0 / math.pi) * cmath.exp(-base)
    bracket = (
        (2.0 * z * z + c) * exp_sq_erfc(base - 2.0 * z * z, _SQRT2 * w)
        + gauss * w
        - (2.0 * w * w + c) * exp_sq_erfc(base - 2.0 * w * w, _SQRT2 * z)
        - gauss * z
    )
    return ((1.0 + tau) / (1.0 - tau)) ** 1.5 / (12.0 * _SQRT2) * bracket


def kappa_a(a: float, z: complex, w: complex,
            tol: float = 1e-10, max_subdivisions: int = 4000) -> complex:
    """Unified limiting kernel with moving rescaling point.

    a = +inf reproduces the bulk kernel, a = 0 the edge kernel (after a
    change of variables), a = -inf the outside regime (zero).
    """
    z, w = complex(z), complex(w)
    if a == math.inf:
        return kappa_bulk(z, w)
    if a == -math.inf:
        return 0j
    if z == w:
        return 0j
    base = z * z + w * w

    def integrand(u: float) -> complex:
        return (
            exp_sq_erfc(base - 2.0 * (z - u) ** 2, _SQRT2 * (w - u))
            - exp_sq_erfc(base - 2.0 * (w - u) ** 2, _SQRT2 * (z - u))
        )

    lo = a - 8.0 - 2.0 * max(abs(z), abs(w))
    val = adaptive_gk(integrand, lo, a, tol=tol, max_subdivisions=max_subdivisions)
    return val / _SQRT2


# ---------------------------------------------------------------------------
# limiting one-point densities
# ---------------------------------------------------------------------------

def bulk_density(y: float) -> float:
    """Bulk density profile 4 y F(2y), F = Dawson's integral; -> 1 as y -> inf."""
    y = float(y)
    return 4.0 * y * float(_sp.dawsn(2.0 * y))


def edge_density(z: complex, tol: float = 1e-11) -> float:
    """Limiting edge density R(x + iy) = -2y int_{-inf}^0 e^{-s^2}
    sin(4 s y) erfc(2x - s) ds."""
    z = complex(z)
    x, y = z.real, z.imag
    if y == 0.0:
        return 0.0

    def integrand(s: float) -> complex:
        return math.exp(-s * s) * math.sin(4.0 * s * y) * float(_sp.erfc(2.0 * x - s))

    val = adaptive_gk(integrand, -8.5, 0.0, tol=tol, max_subdivisions=6000)
    return -2.0 * y * val.real


def edge_density_correction(tau: float, z: complex) -> float:
    """1/sqrt(N) correction to the edge density (closed form)."""
    if not 0.0 <= tau < 1.0:
        raise ValueError("tau must lie in [0, 1)")
    z = complex(z)
    y = z.imag
    if y == 0.0:
        return 0.0
    zb = z.conjugate()
    c = (1.0 - 2.0 * tau) / (1.0 + tau)
    # (2z^2 + c) erfc(sqrt2 conj z) e^{-2z^2} + 2 sqrt(2/pi) conj z e^{-4 Re z^2}
    term = (2.0 * z * z + c) * exp_sq_erfc(-2.0 * z * z, _SQRT2 * zb) \
        + 2.0 * math.sqrt(2.0 / math.pi) * zb * math.exp(-4.0 * (z * z).real)
    pref = ((1.0 + tau) / (1.0 - tau)) ** 1.5 / (3.0 * _SQRT2)
    return pref * y * math.exp(-4.0 * y * y) * term.imag


# ---------------------------------------------------------------------------
# limits of the ODE inhomogeneity
# ---------------------------------------------------------------------------

def r_limit(z: complex, w: complex) -> complex:
    """Edge limit r(z, w) = erfc(z+w) - 2^{-1/2} e^{(z-w)^2 - 2z^2} erfc(sqrt2 w)."""
    z, w = complex(z), complex(w)
    return exp_sq_erfc(0j, z + w) - exp_sq_erfc((z - w) ** 2 - 2.0 * z * z,
                                                _SQRT2 * w) / _SQRT2


def r_half(tau: float, z: complex, w: complex) -> complex:
    """1/sqrt(N) edge correction of the inhomogeneity."""
    if not 0.0 <= tau < 1.0:
        raise ValueError("tau must lie in [0, 1)")
    z, w = complex(z), complex(w)
    t = tau / (1.0 + tau)
    expo = (z - w) ** 2 - 2.0 * z * z
    bracket = (
        (4.0 / 3.0 * z * z - 4.0 / 3.0 * z * w + 2.0 / 3.0 * w * w - t)
        * cmath.exp(expo - 2.0 * w * w) / math.sqrt(2.0 * math.pi)
        - (2.0 / 3.0 * z ** 3 - t * z) * exp_sq_erfc(expo, _SQRT2 * w)
    )
    return ((1.0 + tau) / (1.0 - tau)) ** 1.5 / _SQRT2 * bracket
