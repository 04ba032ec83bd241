"""Skew-orthogonal polynomials of the elliptic weight and the skew form.

The skew-symmetric bilinear form is

    <f, g>_s = int_C (f(z) g(conj z) - g(z) f(conj z)) (z - conj z)
               e^{-N Q(z)} dA(z),          dA = dx dy / pi,

evaluated by tensor Gauss-Hermite quadrature after the substitution
x = sqrt((1+tau)/N) u, y = sqrt((1-tau)/N) v that separates the weight into
e^{-u^2} e^{-v^2}.  Node counts are chosen so polynomial integrands are
integrated exactly (degree/2 + 4 nodes per axis).

The monic family q_m below is skew-orthogonal for this form with norms
r_k = 2 (1-tau)^{3/2} (1+tau)^{1/2} (2k+1)! / N^{2k+2}; the pre-kernel
assembled from it must agree with the canonical Hermite-sum construction,
which is the strongest cross-check of the kernel constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .kernels import KernelContext, inverse_rescale
from .scaled import ScaledComplex

__all__ = [
    "QuadratureBudgetError",
    "PolynomialRep",
    "skew_inner",
    "q_even",
    "q_odd",
    "r_norm",
    "verify_skew_orthogonality",
    "prekernel_via_sop",
]

_MAX_NODES = 256


class QuadratureBudgetError(ValueError):
    """Polynomial degree exceeds the exact-quadrature node budget."""


@dataclass(frozen=True)
class PolynomialRep:
    """Monomial-basis polynomial, ascending coefficients, monic leading 1."""

    coefficients: tuple

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = np.zeros_like(z)
        for c in reversed(self.coefficients):
            out = out * z + c
        return out if out.shape else complex(out)


def q_even(k: int, N: int, tau: float) -> PolynomialRep:
    """Monic even skew-orthogonal polynomial q_{2k}.

    Coefficient of z^{2j}:
        (2/N)^k k! N^j / (2j)! sum_{l=j}^{k} (-tau/2)^{l-j} (2l-1)!! / (l-j)!
    Polynomial in tau, so tau = 0 (monomial family) is included.
    """
    if not 0.0 <= tau < 1.0:
        raise ValueError("tau must lie in [0, 1)")
    if k > 30:
        raise ValueError("coefficient path capped at k = 30")
    coeffs = [0j] * (2 * k + 1)
    for j in range(k + 1):
        acc = 0.0
        for l in range(j, k + 1):
            # (-tau/2)^{l-j} (2l-1)!!/(l-j)!
            term = (-0.5 * tau) ** (l - j) / math.factorial(l - j)
            term *= _double_factorial(2 * l - 1)
            acc += term
        c = (2.0 / N) ** k * math.factorial(k) * N**j / math.factorial(2 * j) * acc
        coeffs[2 * j] = complex(c)
    coeffs[2 * k] = 1 + 0j  # monic exactly; the formula hits 1 only up to roundoff
    return PolynomialRep(tuple(coeffs))


def q_odd(k: int, N: int, tau: float) -> PolynomialRep:
    """Monic odd skew-orthogonal polynomial q_{2k+1}.

    Coefficient of z^{2j+1}: (tau/(2N))^{k-j} (2k+1)! (-1)^{k-j}
                             / ((k-j)! (2j+1)!).
    Polynomial in tau, so tau = 0 (monomial family) is included.
    """
    if not 0.0 <= tau < 1.0:
        raise ValueError("tau must lie in [0, 1)")
    if k > 30:
        raise ValueError("coefficient path capped at k = 30")
    coeffs = [0j] * (2 * k + 2)
    for j in range(k + 1):
        c = (
            (tau / (2.0 * N)) ** (k - j)
            * math.factorial(2 * k + 1)
            * (-1.0) ** (k - j)
            / (math.factorial(k - j) * math.factorial(2 * j + 1))
        )
        coeffs[2 * j + 1] = complex(c)
    return PolynomialRep(tuple(coeffs))


def r_norm(k: int, N: int, tau: float) -> float:
    """Skew norm r_k = 2 (1-tau)^{3/2} (1+tau)^{1/2} (2k+1)! / N^{2k+2}."""
    return (
        2.0
        * (1.0 - tau) ** 1.5
        * math.sqrt(1.0 + tau)
        * math.factorial(2 * k + 1)
        / float(N) ** (2 * k + 2)
    )


def _double_factorial(n: int) -> float:
    if n <= 0:
        return 1.0
    out = 1.0
    while n > 0:
        out *= n
        n -= 2
    return out


def skew_inner(f: PolynomialRep, g: PolynomialRep, N: int, tau: float) -> complex:
    """<f, g>_s by exact tensor Gauss-Hermite quadrature."""
    deg = f.degree + g.degree + 1  # the (z - conj z) factor adds one
    nodes = deg // 2 + 4
    if nodes > _MAX_NODES:
        raise QuadratureBudgetError(
            f"needs {nodes} nodes/axis, budget {_MAX_NODES}"
        )
    u, wu = np.polynomial.hermite.hermgauss(nodes)
    x = math.sqrt((1.0 + tau) / N) * u
    y = math.sqrt((1.0 - tau) / N) * u
    X, Y = np.meshgrid(x, y, indexing="ij")
    W = np.outer(wu, wu)
    Z = X + 1j * Y
    Zb = np.conj(Z)
    vals = (f(Z) * g(Zb) - g(Z) * f(Zb)) * (Z - Zb)
    jac = math.sqrt(1.0 - tau * tau) / N
    return complex(np.sum(W * vals) * jac / math.pi)


def verify_skew_orthogonality(N: int, tau: float, k_max: int) -> float:
    """Max deviation from the skew-orthogonality relations, in units of r_0.

    Checks every pair q_a, q_b with a, b <= 2 k_max + 1 against 0 or
    +-r_k delta_{kl}.
    """
    if k_max > 6:
        raise ValueError("k_max capped at 6 to keep quadrature exact")
    polys = []
    for k in range(k_max + 1):
        polys.append(q_even(k, N, tau))
        polys.append(q_odd(k, N, tau))
    r0 = r_norm(0, N, tau)
    worst = 0.0
    for a in range(len(polys)):
        for b in range(a, len(polys)):
            got = skew_inner(polys[a], polys[b], N, tau)
            ka, kb = a // 2, b // 2
            if a % 2 == 0 and b % 2 == 1 and ka == kb:
                want = complex(r_norm(ka, N, tau))
            elif a % 2 == 1 and b % 2 == 0 and ka == kb:
                want = complex(-r_norm(ka, N, tau))
            else:
                want = 0j
            worst = max(worst, abs(got - want) / r0)
    return worst


def prekernel_via_sop(N: int, tau: float, p: float, z: complex, w: complex) -> ScaledComplex:
    """Rescaled pre-kernel assembled from the skew-orthogonal family.

    kappa_N(z, w) = (N delta)^{-3/2} sum_k (q_{2k+1}(Z) q_{2k}(W)
                    - q_{2k}(Z) q_{2k+1}(W)) / r_k at the physical points
    Z, W behind the rescaling; independent of the canonical Hermite-sum
    route, so their agreement pins every constant in both.
    """
    if N > 10:
        raise ValueError("polynomial-coefficient path capped at N = 10")
    ctx = KernelContext(N=N, tau=tau, p=p)
    Z = inverse_rescale(ctx, z)
    W = inverse_rescale(ctx, w)
    total = 0j
    for k in range(N):
        qe, qo = q_even(k, N, tau), q_odd(k, N, tau)
        total += (qo(Z) * qe(W) - qe(Z) * qo(W)) / r_norm(k, N, tau)
    total *= (N * ctx.delta) ** -1.5
    return ScaledComplex.from_complex(complex(total))
