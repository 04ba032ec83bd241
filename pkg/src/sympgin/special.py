"""Complex error-function family used by the limiting kernels.

Everything is derived from the Faddeeva function w(z) = exp(-z^2) erfc(-iz),
evaluated by scipy's implementation (power series near the origin, Laplace
continued fraction at large modulus, rational approximations in between).
Dawson's integral is evaluated through the same kernel, so there is exactly
one accuracy-critical primitive.

All wrappers enforce the module contract that no NaN/Inf escapes without a
signalled error: arguments whose true value exceeds the double range (e.g.
w(z) for strongly negative Im z) raise :class:`SpecialFunctionOverflow`.
"""

from __future__ import annotations

import cmath
import math

from scipy import special as _sp

__all__ = [
    "SpecialFunctionOverflow",
    "faddeeva",
    "erf_c",
    "erfc_c",
    "erfcx_c",
    "dawson",
    "exp_sq_erfc",
]


class SpecialFunctionOverflow(ArithmeticError):
    """True function value exceeds the double-precision range."""


def _checked(value: complex, name: str, z: complex) -> complex:
    if cmath.isfinite(value):
        return value
    raise SpecialFunctionOverflow(f"{name}({z!r}) overflows double precision")


def faddeeva(z: complex) -> complex:
    """w(z) = exp(-z^2) erfc(-iz).

    Relative error <= 1e-13 for |z| <= 30.  Overflows (and raises) only for
    strongly negative imaginary parts where |w| ~ 2 exp(|Im z|^2 - Re^2 z).
    """
    return _checked(complex(_sp.wofz(complex(z))), "faddeeva", z)


def erf_c(z: complex) -> complex:
    """Error function of a complex argument; odd in z."""
    return _checked(complex(_sp.erf(complex(z))), "erf", z)


def erfc_c(z: complex) -> complex:
    """Complementary error function of a complex argument."""
    return _checked(complex(_sp.erfc(complex(z))), "erfc", z)


def erfcx_c(z: complex) -> complex:
    """Scaled complementary error function exp(z^2) erfc(z).

    For real z -> +inf tends to 1/(sqrt(pi) z); never overflows for
    Re z >= 0.  Equals w(iz), so products exp(quadratic) * erfc(...) can be
    rearranged to stay finite (see :func:`exp_sq_erfc`).
    """
    return _checked(complex(_sp.erfcx(complex(z))), "erfcx", z)


def dawson(z: complex) -> complex:
    """Dawson's integral F(z) = exp(-z^2) int_0^z exp(t^2) dt; odd, F'(0)=1."""
    return _checked(complex(_sp.dawsn(complex(z))), "dawson", z)


def exp_sq_erfc(expo: complex, b: complex) -> complex:
    """exp(expo) * erfc(b) without spurious overflow.

    Every limiting-kernel formula pairs a quadratic exponential prefactor
    with an erfc whose argument cancels it.  Combining the exponents first
    (erfc(b) = exp(-b^2) erfcx(b) for Re b >= 0, reflection otherwise) keeps
    all intermediates finite whenever the product itself is representable.
    """
    b = complex(b)
    if b.real >= 0.0:
        return _checked(
            cmath.exp(expo - b * b) * erfcx_c(b), "exp_sq_erfc", b
        )
    # erfc(b) = 2 - erfc(-b)
    return _checked(
        2.0 * cmath.exp(expo) - cmath.exp(expo - b * b) * erfcx_c(-b),
        "exp_sq_erfc",
        b,
    )
