"""Pfaffians of complex skew-symmetric matrices and k-point correlations.

The Pfaffian is computed by Parlett-Reid skew elimination with partial
pivoting (congruence transforms, so the Pfaffian only picks up the pivot
product and a sign per row/column swap).  Correlation matrices assembled
from the pre-kernel carry entries of magnitude e^{+-O(N)}; their base-2
exponents are equalised row/column-wise (an exact congruence by a diagonal
of powers of two) before elimination runs in native doubles.
"""

from __future__ import annotations

import warnings
from typing import Callable, Sequence

import numpy as np

from .kernels import (
    KernelContext,
    inverse_rescale,
    potential_Q,
    prekernel_kappa_N,
)
from .scaled import ScaledComplex

__all__ = [
    "ConditioningWarning",
    "SkewKernelMatrix",
    "pfaffian",
    "correlation_k",
    "cocycle_invariance_check",
]

_PIVOT_RTOL = 1e-14


class ConditioningWarning(UserWarning):
    """Matrix is singular to working precision; Pfaffian reported as 0."""


def _combinatorial_reference(a: np.ndarray) -> complex:
    """Pfaffian by expansion over perfect matchings (reference oracle).

    Exponential cost; used to validate the elimination route on small
    orders, never for production evaluation.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    if n == 0:
        return 1 + 0j
    if n % 2:
        return 0j
    if n == 2:
        return complex(a[0, 1])
    total = 0j
    rest = list(range(1, n))
    for pos, j in enumerate(rest):
        keep = [k for k in rest if k != j]
        sub = a[np.ix_(keep, keep)]
        total += (-1.0) ** pos * a[0, j] * _combinatorial_reference(sub)
    return total


def pfaffian(a: np.ndarray) -> complex:
    """Pfaffian of an even-order complex skew-symmetric matrix.

    Parlett-Reid elimination with partial pivoting; the sign is tracked per
    transposition so Pf([[0, a], [-a, 0]]) = a and Pf(A)^2 = det(A).
    Matrices whose pivot column is zero to working precision yield 0 (with
    a :class:`ConditioningWarning`).
    """
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("matrix must be square")
    if n % 2:
        raise ValueError("skew-symmetric matrices of odd order have Pfaffian 0 by "
                         "convention; this routine requires even order")
    if n > 200:
        raise ValueError("order capped at 200")
    if n == 0:
        return 1 + 0j
    scale = np.abs(a).max()
    if scale == 0.0:
        warnings.warn("zero matrix", ConditioningWarning, stacklevel=2)
        return 0j
    if np.abs(a + a.T).max() > 1e-12 * scale:
        raise ValueError("matrix is not skew-symmetric")
    thr = _PIVOT_RTOL * scale
    pf = 1 + 0j
    for k in range(0, n - 1, 2):
        col = np.abs(a[k, k + 1:])
        kp = k + 1 + int(np.argmax(col))
        if np.abs(a[k, kp]) <= thr:
            warnings.warn(
                "pivot column vanished to working precision; Pfaffian ~ 0",
                ConditioningWarning,
                stacklevel=2,
            )
            return 0j
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        pivot = a[k, k + 1]
        pf *= pivot
        if k + 2 < n:
            t = a[k, k + 2:] / pivot
            h = a[k + 1, k + 2:]
            a[k + 2:, k + 2:] += np.outer(h, t) - np.outer(t, h)
    return complex(pf)


class SkewKernelMatrix:
    """Even-order skew-symmetric matrix of scaled entries.

    Built entry by entry from the strict upper triangle, so skew-symmetry
    holds by construction.  ``pfaffian_scaled`` equalises the exponent
    spread with a diagonal congruence 2^{-m_i} before running the float
    elimination, and restores 2^{sum m_i} on the way out.
    """

    def __init__(self, order: int):
        if order <= 0 or order % 2:
            raise ValueError("order must be even and positive")
        self.order = order
        self.mant = np.zeros((order, order), dtype=np.complex128)
        self.expo = np.zeros((order, order), dtype=np.int64)

    @classmethod
    def build(cls, order: int, upper: Callable[[int, int], ScaledComplex]) -> "SkewKernelMatrix":
        m = cls(order)
        for i in range(order):
            for j in range(i + 1, order):
                v = upper(i, j)
                m.mant[i, j], m.expo[i, j] = v.mantissa, v.exponent
                m.mant[j, i], m.expo[j, i] = -v.mantissa, v.exponent
        return m

    def _offsets(self) -> np.ndarray:
        """Row/column exponent offsets m_i.

        Kernel matrices carry near-separable exponents e_ij ~ m_i + m_j
        (the e^{-NQ/2} row weights); the offsets are the least-squares
        separable fit over the nonzero entries, which centres the balanced
        matrix around 2^0.
        """
        n = self.order
        rows, cols = [], []
        vals = []
        for i in range(n):
            for j in range(i + 1, n):
                if self.mant[i, j] != 0:
                    rows.append(i)
                    cols.append(j)
                    vals.append(float(self.expo[i, j]))
        if not vals:
            return np.zeros(n, dtype=np.int64)
        design = np.zeros((len(vals), n))
        design[np.arange(len(vals)), rows] = 1.0
        design[np.arange(len(vals)), cols] = 1.0
        m, *_ = np.linalg.lstsq(design, np.array(vals), rcond=None)
        return np.round(m).astype(np.int64)

    def pfaffian_scaled(self) -> ScaledComplex:
        m = self._offsets()
        shift = self.expo - m[:, None] - m[None, :]
        # entries more than ~300 binary digits below the balanced scale are
        # exact zeros at working precision
        shift = np.where(self.mant != 0, shift, -10_000)
        a = self.mant * np.exp2(np.clip(shift, -1000, 1000).astype(float))
        pf = pfaffian(a)
        return ScaledComplex(pf, int(m.sum()))


def _correlation_matrix(ctx: KernelContext, points: Sequence[complex],
                        gauge: Callable[[complex], complex] | None = None) -> SkewKernelMatrix:
    pts = [complex(z) for z in points]
    args: list[complex] = []
    for z in pts:
        args.extend((z, z.conjugate()))
    # e^{-N Q/2} row weights (Q is conjugation-symmetric)
    halfq = [-0.5 * ctx.N * potential_Q(ctx.tau, inverse_rescale(ctx, z)) for z in pts]

    def upper(i: int, j: int) -> ScaledComplex:
        v = prekernel_kappa_N(ctx, args[i], args[j])
        v = v.times_exp(halfq[i // 2] + halfq[j // 2])
        if gauge is not None:
            v = v * (gauge(args[i]) * gauge(args[j]))
        return v

    return SkewKernelMatrix.build(2 * len(pts), upper)


def correlation_k(ctx: KernelContext, points: Sequence[complex],
                  _gauge: Callable[[complex], complex] | None = None) -> float:
    """k-point correlation function of the rescaled process.

    R_{N,k} = prod_j (conj z_j - z_j) Pf of the 2k x 2k block matrix of
    weighted pre-kernel values at (z_j, conj z_j).  Points must be pairwise
    distinct; the value is real (the imaginary part is asserted below
    1e-9 relative) and vanishes if any point is real.
    """
    pts = [complex(z) for z in points]
    if len(pts) != len({(z.real, z.imag) for z in pts}):
        raise ValueError("points must be pairwise distinct")
    if any(z.imag == 0.0 for z in pts):
        return 0.0
    mat = _correlation_matrix(ctx, pts, _gauge)
    pf = mat.pfaffian_scaled()
    pref = 1 + 0j
    for z in pts:
        pref *= z.conjugate() - z
    val = (pf * pref).to_complex()
    if abs(val.imag) > 1e-9 * max(abs(val.real), 1e-300):
        raise ArithmeticError(
            f"correlation came out non-real: {val!r}"
        )
    return val.real


def cocycle_invariance_check(ctx: KernelContext, points: Sequence[complex],
                             g: Callable[[complex], complex]) -> float:
    """Max relative change of correlation_k under the gauge kernel -> g g kernel.

    g must satisfy g(conj z) = 1/g(z) on the sample points (checked), in
    which case the Pfaffian is invariant and the change is pure roundoff.
    """
    pts = [complex(z) for z in points]
    for z in pts:
        if abs(g(z) * g(z.conjugate()) - 1.0) > 1e-12:
            raise ValueError("g(conj z) != 1/g(z) on the sample points")
    base = correlation_k(ctx, pts)
    gauged = correlation_k(ctx, pts, _gauge=g)
    scale = max(abs(base), abs(gauged))
    if scale == 0.0:
        return 0.0
    return abs(gauged - base) / scale
