"""Overflow-safe Hermite evaluation and the strong-asymptotics apparatus.

Physicists' Hermite polynomials H_k are generated by the three-term
recurrence H_{k+1}(z) = 2z H_k(z) - 2k H_{k-1}(z) in scaled arithmetic, so
degrees ~ 10^6 at arguments ~ sqrt(N) never overflow.

The asymptotic side packages the degree-ratio frame (T, tau) together with
the derived constants

    l       = T (log(T / (1 - tau^2)) - 1)
    F0      = 2 sqrt(T tau / (1 - tau^2))
    x0      = sqrt(T (1 + tau) / (1 - tau))      (right boundary abscissa)
    kappa_T = T^{-1/2} ((1 + tau)/(1 - tau))^{3/2}   (boundary curvature)

and the exponential-growth data g, psi, Omega that control H_{TN+R} at
arguments sqrt(N (1 - tau^2)/(2 tau)) z.  The square root sqrt(z^2 - F0^2)
is realised as sqrt(z - F0) * sqrt(z + F0) with principal branches, which
places the cut on the segment [-F0, F0] and gives the ~z asymptote.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

from .scaled import ScaledComplex, _maxcomp, _scale2

__all__ = [
    "BranchCutWarning",
    "AsymptoticFrame",
    "hermite_scaled",
    "hermite_sequence_scaled",
    "weighted_hermite_term",
    "g_fn",
    "psi_fn",
    "psi_prime_fn",
    "omega_fn",
    "droplet_contains",
    "hermite_asymptotic",
    "hermite_inequality_holds",
    "hermite_inequality_v2_holds",
]

_MAX_DEGREE = 10**6


class BranchCutWarning(UserWarning):
    """Argument within 1e-8 of the branch cut [-F0, F0]."""


# ---------------------------------------------------------------------------
# scaled evaluation
# ---------------------------------------------------------------------------

def hermite_scaled(k: int, z: complex) -> ScaledComplex:
    """H_k(z) in scaled representation, exact-in-value recurrence."""
    if not 0 <= k <= _MAX_DEGREE:
        raise ValueError(f"degree {k} outside [0, {_MAX_DEGREE}]")
    z = complex(z)
    hp, hc, e = 0j, 1 + 0j, 0
    for j in range(k):
        hp, hc = hc, 2.0 * z * hc - (2.0 * j) * hp
        a = max(_maxcomp(hc), _maxcomp(hp))
        if a:
            s = math.frexp(a)[1]
            if s > 32 or s < -32:
                hp, hc, e = _scale2(hp, -s), _scale2(hc, -s), e + s
    return ScaledComplex(hc, e)


def hermite_sequence_scaled(k_max: int, z: complex) -> list[ScaledComplex]:
    """[H_0(z), ..., H_{k_max}(z)] in one O(k_max) pass."""
    if not 0 <= k_max <= _MAX_DEGREE:
        raise ValueError(f"degree {k_max} outside [0, {_MAX_DEGREE}]")
    z = complex(z)
    out = [ScaledComplex(1 + 0j, 0)]
    hp, hc, e = 0j, 1 + 0j, 0
    for j in range(k_max):
        hp, hc = hc, 2.0 * z * hc - (2.0 * j) * hp
        a = max(_maxcomp(hc), _maxcomp(hp))
        if a:
            s = math.frexp(a)[1]
            if s > 32 or s < -32:
                hp, hc, e = _scale2(hp, -s), _scale2(hc, -s), e + s
        out.append(ScaledComplex(hc, e))
    return out


def weighted_hermite_term(k: int, ctx, u: complex) -> ScaledComplex:
    """(tau/2)^{k/2} / k!! * H_k(sqrt(N/(2 tau)) p + sqrt((1-tau^2)/tau) u).

    These are the summands of the finite-N pre-kernel; the coefficient is
    folded multiplicatively into the exponent so the term stays
    representable for any (N, k, p, u) in scope.
    """
    tau, N, p = ctx.tau, ctx.N, ctx.p
    if tau == 0.0:
        raise ValueError(
            "weighted Hermite terms are undefined at tau = 0; "
            "use the monomial pre-kernel path"
        )
    arg = math.sqrt(N / (2.0 * tau)) * p + math.sqrt((1.0 - tau * tau) / tau) * complex(u)
    h = hermite_scaled(k, arg)
    # coefficient (tau/2)^{k/2} / k!! accumulated as ratio updates
    cm, ce = 1.0, 0
    for j in range(k, 0, -2):
        cm *= (0.5 * tau) / j
        f, s = math.frexp(cm)
        if s < -32:
            cm, ce = math.ldexp(cm, -s), ce + s
    if k % 2 == 1:
        cm *= math.sqrt(2.0 / tau)  # (tau/2)^{k/2} has a half power left over
    return h * ScaledComplex(cm, ce)


# ---------------------------------------------------------------------------
# asymptotic frame
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticFrame:
    """Degree-ratio frame (T, tau) with its derived constants."""

    T: float
    tau: float

    def __post_init__(self):
        if self.T <= 0:
            raise ValueError("T must be positive")
        if not 0 <= self.tau < 1:
            raise ValueError("tau must lie in [0, 1)")

    @property
    def l(self) -> float:
        return self.T * (math.log(self.T / (1.0 - self.tau**2)) - 1.0)

    @property
    def F0(self) -> float:
        return 2.0 * math.sqrt(self.T * self.tau / (1.0 - self.tau**2))

    @property
    def x0(self) -> float:
        return math.sqrt(self.T * (1.0 + self.tau) / (1.0 - self.tau))

    @property
    def kappaT(self) -> float:
        return ((1.0 + self.tau) / (1.0 - self.tau)) ** 1.5 / math.sqrt(self.T)


def _branch_sqrt(z: complex, f0: float) -> complex:
    """sqrt(z^2 - F0^2) with cut on [-F0, F0] and ~z asymptote."""
    return cmath.sqrt(z - f0) * cmath.sqrt(z + f0)


def _warn_if_near_cut(z: complex, f0: float) -> None:
    x, y = z.real, z.imag
    if abs(x) <= f0:
        d = abs(y)
    else:
        d = min(abs(z - f0), abs(z + f0))
    if d < 1e-8:
        warnings.warn(
            f"argument {z!r} within {d:.2e} of the branch cut [-F0, F0]",
            BranchCutWarning,
            stacklevel=3,
        )


def g_fn(z: complex, frame: AsymptoticFrame) -> complex:
    """Exponential growth rate g(z) of the scaled Hermite polynomials."""
    z = complex(z)
    f0 = frame.F0
    _warn_if_near_cut(z, f0)
    phi = z + _branch_sqrt(z, f0)
    return cmath.log(phi) + z / phi - math.log(2.0) - 0.5


def psi_fn(z: complex, frame: AsymptoticFrame) -> complex:
    """Conformal factor psi(z) = sqrt(tau)/F0 * (z + sqrt(z^2 - F0^2))."""
    z = complex(z)
    f0 = frame.F0
    _warn_if_near_cut(z, f0)
    return math.sqrt(frame.tau) / f0 * (z + _branch_sqrt(z, f0))


def psi_prime_fn(z: complex, frame: AsymptoticFrame) -> complex:
    """psi'(z) = psi(z) / sqrt(z^2 - F0^2)."""
    z = complex(z)
    f0 = frame.F0
    _warn_if_near_cut(z, f0)
    s = _branch_sqrt(z, f0)
    return math.sqrt(frame.tau) / f0 * (z + s) / s


def omega_fn(z: complex, frame: AsymptoticFrame) -> float:
    """Rate function Omega(z) = |z|^2 - tau Re z^2 - 2T Re g(z) + l.

    Nonnegative everywhere, zero exactly on the boundary of the T-droplet.
    """
    z = complex(z)
    return (
        abs(z) ** 2
        - frame.tau * (z * z).real
        - 2.0 * frame.T * g_fn(z, frame).real
        + frame.l
    )


def droplet_contains(z: complex, frame: AsymptoticFrame) -> bool:
    """Membership in the elliptic T-droplet K_T."""
    z = complex(z)
    t = frame.tau
    q = (1.0 - t) / (1.0 + t) * z.real**2 + (1.0 + t) / (1.0 - t) * z.imag**2
    return q <= frame.T


def hermite_asymptotic(tnr: tuple, z: complex, frame: AsymptoticFrame) -> ScaledComplex:
    """Leading strong-asymptotic form of H_{TN+R}(sqrt(N(1-tau^2)/(2 tau)) z).

    tnr = (T, N, R) with T*N + R a nonnegative integer; valid on compact
    sets away from the segment [-F0, F0], where the relative error is
    O(1/N).  All exponentially large factors are assembled in the log
    domain and returned as a scaled value.
    """
    T, N, R = tnr
    if T != frame.T:
        raise ValueError("degree ratio T does not match the frame")
    degree = T * N + R
    if degree != int(degree) or degree < 0:
        raise ValueError("T*N + R must be a nonnegative integer")
    tau = frame.tau
    z = complex(z)
    psi = psi_fn(z, frame)
    dpsi = psi_prime_fn(z, frame)
    log_val = (
        0.25 * math.log(N / (2.0 * math.pi * (1.0 - tau * tau)))
        - 0.5 * degree * math.log(0.5 * tau)
        + 0.5 * (math.lgamma(degree + 1.0) - math.log(N))
        + N * (T * g_fn(z, frame) - 0.5 * frame.l)
        + R * cmath.log(psi)
        + 0.5 * cmath.log(dpsi)
    )
    return ScaledComplex.from_log(log_val)


# ---------------------------------------------------------------------------
# Hermite inequality chain (outside-the-droplet estimates)
# ---------------------------------------------------------------------------

def _weighted_even_pair(tau: float, l: int, N: int, omega0: float):
    """log2 magnitudes of (tau/2)^m/(2m)!! H_{2m}(c omega0) for m = l, l+1."""
    c = math.sqrt(N * (1.0 - tau * tau) / (2.0 * tau))
    seq = hermite_sequence_scaled(2 * l + 2, c * omega0)
    cm, ce = 1.0, 0
    for m in range(1, l + 1):
        cm *= 0.5 * tau / (2.0 * m)
        f, s = math.frexp(cm)
        if s < -32:
            cm, ce = math.ldexp(cm, -s), ce + s
    lhs = (seq[2 * l] * ScaledComplex(cm, ce)).abs_log2()
    cm *= 0.5 * tau / (2.0 * l + 2.0)
    rhs = (seq[2 * l + 2] * ScaledComplex(cm, ce)).abs_log2()
    return lhs, rhs


def _check_inequality_preconditions(tau: float, l: int, N: int, omega0: float):
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must lie in (0, 1)")
    if not 0 <= l <= N - 1:
        raise ValueError("need 0 <= l <= N - 1")
    if abs(omega0) < math.sqrt(2.0 * (1.0 + tau) / (1.0 - tau)):
        raise ValueError("|omega0| below the droplet boundary abscissa")


def hermite_inequality_holds(tau: float, l: int, N: int, omega0: float) -> bool:
    """Weighted even-degree monotonicity outside the droplet.

    |(tau/2)^l/(2l)!! H_{2l}| <= |(tau/2)^{l+1}/(2l+2)!! H_{2l+2}| at the
    argument sqrt(N(1-tau^2)/(2 tau)) omega0, evaluated in scaled
    arithmetic (not logs) to avoid cancellation artefacts.
    """
    _check_inequality_preconditions(tau, l, N, omega0)
    lhs, rhs = _weighted_even_pair(tau, l, N, omega0)
    return lhs <= rhs


def hermite_inequality_v2_holds(tau: float, l: int, N: int, omega0: float) -> bool:
    """Stricter intermediate inequality H_{2l}(x) <= sqrt(tau) y/(2l+2) H_{2l+1}(x).

    Here x = (1+tau) y / sqrt(tau) and y = omega0 sqrt(N(1-tau)/(2(1+tau)))
    (so |y| >= sqrt(N) on the admissible range).  The sqrt(tau) factor is
    forced by the even-degree comparison after one recurrence step; with a
    bare tau the l = 0 base case already fails.
    """
    _check_inequality_preconditions(tau, l, N, omega0)
    y = omega0 * math.sqrt(N * (1.0 - tau) / (2.0 * (1.0 + tau)))
    x = (1.0 + tau) * y / math.sqrt(tau)
    seq = hermite_sequence_scaled(2 * l + 1, x)
    lhs = seq[2 * l]
    rhs = seq[2 * l + 1] * (math.sqrt(tau) * y / (2.0 * l + 2.0))
    # both sides are positive reals here (argument beyond every zero)
    return lhs.abs_log2() <= rhs.abs_log2()
