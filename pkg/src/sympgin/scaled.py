"""Scaled complex arithmetic for quantities of magnitude e^{O(N)}.

A value is stored as ``mantissa * 2**exponent`` with a complex double
mantissa and an unbounded Python int exponent.  Rescaling by powers of two
is exact in binary floating point, so the representation loses no precision
relative to plain complex arithmetic; it only extends the dynamic range.

The mantissa is kept inside the window [2**-32, 2**32) (max-norm of the
components).  The window is deliberately narrow: kernel summations form
products of up to three mantissas plus integer factors, and 3*32 + slack
stays far away from the double-precision overflow threshold 2**1024.
"""

from __future__ import annotations

import cmath
import math

_WINDOW = 32          # mantissa kept within 2**+-_WINDOW (max-norm)
_NEGLIGIBLE = 1080    # exponent gap beyond which an addend cannot affect a double

# ln(2) split so that k*_LN2_HI is exact for |k| < 2**20 (libm-style hi/lo).
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10
_LN2 = math.log(2.0)


def _scale2(z: complex, k: int) -> complex:
    """Exact multiplication of a complex double by 2**k."""
    return complex(math.ldexp(z.real, k), math.ldexp(z.imag, k))


def _maxcomp(z: complex) -> float:
    return max(abs(z.real), abs(z.imag))


def _renorm(m: complex, e: int):
    """Bring (m, e) into the mantissa window; exact."""
    a = _maxcomp(m)
    if a == 0.0:
        return 0j, 0
    k = math.frexp(a)[1]
    if -_WINDOW < k <= _WINDOW:
        return m, e
    return _scale2(m, -k), e + k


def _acc(am: complex, ae: int, tm: complex, te: int):
    """Accumulate the scaled term (tm, te) onto (am, ae); returns the new pair.

    Used by the kernel sweeps, which keep mantissas/exponents in local
    variables for speed.  Addends whose exponents differ by more than the
    double-precision range are dropped exactly as they would be in exact
    rounding.
    """
    if tm == 0j:
        return am, ae
    if am == 0j:
        return _renorm(tm, te)
    d = te - ae
    if d >= 0:
        if d > _NEGLIGIBLE:
            return _renorm(tm, te)
        return _renorm(_scale2(am, -d) + tm, te)
    if d < -_NEGLIGIBLE:
        return am, ae
    return _renorm(am + _scale2(tm, d), ae)


class ScaledComplex:
    """Complex number ``mantissa * 2**exponent`` with unbounded exponent."""

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: complex, exponent: int = 0):
        m, e = _renorm(complex(mantissa), exponent)
        self.mantissa = m
        self.exponent = e

    # -- constructors -------------------------------------------------

    @classmethod
    def from_complex(cls, z: complex) -> "ScaledComplex":
        return cls(z, 0)

    @classmethod
    def from_log(cls, log_value: complex) -> "ScaledComplex":
        """exp(log_value) without intermediate overflow.

        The real part of the log is split into an integer number of binary
        digits plus a small remainder, so the result is exact up to the
        rounding of the remainder exponential.
        """
        log_value = complex(log_value)
        k = int(round(log_value.real / _LN2))
        rem = (log_value.real - k * _LN2_HI) - k * _LN2_LO
        return cls(cmath.exp(complex(rem, log_value.imag)), k)

    @classmethod
    def _raw(cls, m: complex, e: int) -> "ScaledComplex":
        out = object.__new__(cls)
        m, e = _renorm(m, e)
        out.mantissa, out.exponent = m, e
        return out

    # -- conversions --------------------------------------------------

    def to_complex(self) -> complex:
        """Plain complex value; raises OverflowError if out of double range."""
        if self.mantissa == 0j:
            return 0j
        if self.exponent > 1024 + _WINDOW:
            raise OverflowError(
                f"scaled value 2**{self.exponent} exceeds double range"
            )
        if self.exponent < -(1074 + _WINDOW):
            return 0j
        return _scale2(self.mantissa, self.exponent)

    def __complex__(self) -> complex:
        return self.to_complex()

    def abs_log2(self) -> float:
        """log2 of the magnitude (-inf for zero)."""
        if self.mantissa == 0j:
            return -math.inf
        return self.exponent + math.log2(abs(self.mantissa))

    def log(self) -> complex:
        """Principal complex logarithm of the value."""
        if self.mantissa == 0j:
            raise ValueError("log of zero scaled value")
        lm = cmath.log(self.mantissa)
        return complex(lm.real + self.exponent * _LN2, lm.imag)

    @property
    def is_zero(self) -> bool:
        return self.mantissa == 0j

    # -- arithmetic ----------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, ScaledComplex):
            return ScaledComplex._raw(
                self.mantissa * other.mantissa, self.exponent + other.exponent
            )
        return ScaledComplex._raw(self.mantissa * complex(other), self.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ScaledComplex):
            return ScaledComplex._raw(
                self.mantissa / other.mantissa, self.exponent - other.exponent
            )
        return ScaledComplex._raw(self.mantissa / complex(other), self.exponent)

    def __add__(self, other):
        if not isinstance(other, ScaledComplex):
            other = ScaledComplex.from_complex(complex(other))
        m, e = _acc(self.mantissa, self.exponent, other.mantissa, other.exponent)
        return ScaledComplex._raw(m, e)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, ScaledComplex)
                       else -complex(other))

    def __neg__(self):
        return ScaledComplex._raw(-self.mantissa, self.exponent)

    def conjugate(self) -> "ScaledComplex":
        return ScaledComplex._raw(self.mantissa.conjugate(), self.exponent)

    def ldexp(self, k: int) -> "ScaledComplex":
        return ScaledComplex._raw(self.mantissa, self.exponent + k)

    def times_exp(self, x: complex) -> "ScaledComplex":
        """Multiply by exp(x); the real part of x folds into the exponent."""
        x = complex(x)
        k = int(round(x.real / _LN2))
        rem = (x.real - k * _LN2_HI) - k * _LN2_LO
        return ScaledComplex._raw(
            self.mantissa * cmath.exp(complex(rem, x.imag)), self.exponent + k
        )

    # -- comparisons / test helpers ------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScaledComplex):
            try:
                other = ScaledComplex.from_complex(complex(other))
            except (TypeError, ValueError):
                return NotImplemented
        return (self - other).is_zero

    def __hash__(self):
        return hash((self.mantissa, self.exponent))

    def rel_diff(self, other: "ScaledComplex") -> float:
        """|self - other| / max(|self|, |other|), safe at any magnitude."""
        if not isinstance(other, ScaledComplex):
            other = ScaledComplex.from_complex(complex(other))
        d = (self - other).abs_log2()
        s = max(self.abs_log2(), other.abs_log2())
        if d == -math.inf:
            return 0.0
        if s == -math.inf:
            return math.inf
        return 2.0 ** (d - s)

    def __repr__(self):
        return f"ScaledComplex({self.mantissa!r}, {self.exponent})"
