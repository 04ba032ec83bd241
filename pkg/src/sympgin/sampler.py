"""Monte Carlo sampling of symplectic elliptic Ginibre spectra.

Matrix model.  An N x N quaternion matrix is represented as the 2N x 2N
complex matrix X = [[A, B], [-conj(B), conj(A)]]; its spectrum is closed
under conjugation.  The elliptic interpolation is

    X = sqrt((1+tau)/2) H + sqrt((1-tau)/2) W,

with H = (G + G*)/sqrt(2) the Hermitian and W = (G - G*)/sqrt(2) the
anti-Hermitian part of a quaternion Ginibre matrix G whose complex entries
are CN(0, 1/N) (each real Gaussian component has s.d. 1/sqrt(2N)).  This
calibration makes the empirical droplet the ellipse with semi-axes
sqrt(2)(1 +- tau); the droplet-axes checks in the test-suite are the
contract for the construction.

Only upper-half-plane representatives are stored; their conjugates complete
the spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import KernelContext, rescale_map

__all__ = ["PairingError", "EigenvalueSample", "sample", "rescaled_cloud"]

_PAIR_TOL = 1e-6
_MAX_N = 2000


class PairingError(RuntimeError):
    """Spectrum failed to split into conjugate pairs (construction bug)."""


@dataclass(frozen=True)
class EigenvalueSample:
    """One spectrum draw: N upper-half-plane eigenvalues plus metadata."""

    N: int
    tau: float
    seed: int
    eigenvalues: np.ndarray  # complex, Im > 0, length N

    def full_spectrum(self) -> np.ndarray:
        return np.concatenate([self.eigenvalues, np.conj(self.eigenvalues)])


def _quaternion_ginibre(rng: np.random.Generator, N: int) -> np.ndarray:
    sd = 1.0 / math.sqrt(2.0 * N)
    A = sd * (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N)))
    B = sd * (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N)))
    return np.block([[A, B], [-np.conj(B), np.conj(A)]])


def sample(N: int, tau: float, seed: int) -> EigenvalueSample:
    """Draw one spectrum of the N-eigenvalue ensemble at non-Hermiticity tau."""
    if not 1 <= N <= _MAX_N:
        raise ValueError(f"N must lie in [1, {_MAX_N}] (dense eigensolve budget)")
    if not 0.0 <= tau < 1.0:
        raise ValueError("tau must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    G = _quaternion_ginibre(rng, N)
    H = (G + G.conj().T) / math.sqrt(2.0)
    W = (G - G.conj().T) / math.sqrt(2.0)
    X = math.sqrt((1.0 + tau) / 2.0) * H + math.sqrt((1.0 - tau) / 2.0) * W
    ev = np.linalg.eigvals(X)
    upper = ev[ev.imag > 0.0]
    lower = ev[ev.imag < 0.0]
    if upper.size != N or lower.size != N:
        raise PairingError(
            f"spectrum has {upper.size} upper / {lower.size} lower eigenvalues, "
            f"expected {N} each"
        )
    iu = np.lexsort((upper.imag, upper.real))
    il = np.lexsort((-lower.imag, lower.real))
    mismatch = np.abs(upper[iu] - np.conj(lower[il])).max()
    if mismatch > _PAIR_TOL:
        raise PairingError(f"conjugate pairing mismatch {mismatch:.3e}")
    return EigenvalueSample(N=N, tau=tau, seed=seed, eigenvalues=upper[iu])


def rescaled_cloud(sample_: EigenvalueSample, p: float) -> np.ndarray:
    """Eigenvalues in the local frame at p (upper-half representatives)."""
    ctx = KernelContext(N=sample_.N, tau=sample_.tau, p=p)
    return np.array([rescale_map(ctx, z) for z in sample_.eigenvalues])
