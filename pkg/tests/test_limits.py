import cmath
import math

import numpy as np
import pytest

from sympgin.limits import (
    EdgeQuadratureSpec,
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
from sympgin.quadrature import QuadratureToleranceError, adaptive_gk

from _oracles import erf_series

# frozen from the series-oracle composition sqrt(pi) e^{1/2} erf(1)
KAPPA_BULK_HALF = 2.4626096664800516


def _ddz(f, z, h=1e-3):
    """Fourth-order central difference along the real direction."""
    return (-f(z + 2 * h) + 8 * f(z + h) - 8 * f(z - h) + f(z - 2 * h)) / (12 * h)


# ---------------------------------------------------------------------------
# quadrature engine
# ---------------------------------------------------------------------------

def test_adaptive_gk_known_integrals():
    assert adaptive_gk(lambda s: math.exp(-s * s), -8.0, 8.0).real == pytest.approx(
        math.sqrt(math.pi), rel=1e-12
    )
    val = adaptive_gk(lambda s: cmath.exp(1j * s), 0.0, math.pi)
    assert val == pytest.approx(2j, abs=1e-12)


def test_adaptive_gk_tolerance_error():
    with pytest.raises(QuadratureToleranceError) as err:
        adaptive_gk(lambda s: math.cos(200 * s * s), 0.0, 30.0,
                    tol=1e-13, max_subdivisions=4)
    assert err.value.error > 1e-13
    assert isinstance(err.value.estimate, (float, complex))


# ---------------------------------------------------------------------------
# bulk kernel
# ---------------------------------------------------------------------------

def test_kappa_bulk_values():
    assert kappa_bulk(0.4 + 0.1j, 0.4 + 0.1j) == 0
    assert kappa_bulk(0.5, -0.5) == pytest.approx(KAPPA_BULK_HALF, rel=1e-12)
    assert kappa_bulk(0.5, -0.5) == pytest.approx(
        math.sqrt(math.pi) * math.exp(0.5) * erf_series(1.0).real, rel=1e-12
    )


def test_limiting_kernels_antisymmetric():
    rng = np.random.default_rng(0)
    for _ in range(8):
        z = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        w = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        assert abs(kappa_bulk(z, w) + kappa_bulk(w, z)) <= 1e-13 * abs(kappa_bulk(z, w))
        ke = kappa_edge(z, w)
        assert abs(ke + kappa_edge(w, z)) <= 1e-9 * max(1.0, abs(ke))
        ks = kappa_edge_sub(0.4, z, w)
        assert abs(ks + kappa_edge_sub(0.4, w, z)) <= 1e-13 * max(1.0, abs(ks))


def test_kappa_bulk_ode_constant():
    # d/dz [e^{-2zw} kappa_bulk] - 2(z-w) e^{-2zw} kappa_bulk = 2 exactly
    z, w = 0.3 + 0.4j, -0.6 + 0.2j

    def hat(u):
        return cmath.exp(-2 * u * w) * kappa_bulk(u, w)

    resid = _ddz(hat, z, h=2e-3) - 2 * (z - w) * hat(z) - 2.0
    assert abs(resid) <= 1e-9


# ---------------------------------------------------------------------------
# edge kernel and correction
# ---------------------------------------------------------------------------

def test_kappa_edge_diagonal_and_spec_validation():
    assert kappa_edge(0.7 + 0.1j, 0.7 + 0.1j) == 0
    with pytest.raises(ValueError):
        EdgeQuadratureSpec(truncation=1.0)
    with pytest.raises(ValueError):
        EdgeQuadratureSpec(truncation=-5.0, tolerance=0.0)


def test_kappa_edge_ode():
    # d/dz [e^{-2zw} kappa_edge] = 2(z-w) e^{-2zw} kappa_edge + r(z, w)
    z, w = 0.3 + 0.5j, -0.2 + 0.1j

    def hat(u):
        return cmath.exp(-2 * u * w) * kappa_edge(u, w)

    resid = _ddz(hat, z, h=1e-2) - 2 * (z - w) * hat(z) - r_limit(z, w)
    assert abs(resid) <= 1e-7


def test_kappa_edge_sub_ode():
    tau = 0.45
    z, w = 0.4 + 0.3j, 0.1 - 0.2j

    def hat_half(u):
        return cmath.exp(-2 * u * w) * kappa_edge_sub(tau, u, w)

    resid = _ddz(hat_half, z, h=1e-2) - 2 * (z - w) * hat_half(z) - r_half(tau, z, w)
    assert abs(resid) <= 1e-7


def test_kappa_edge_sub_double_transcription():
    # independent literal transcription with the plain complex error function
    from sympgin.special import erfc_c

    def reference(tau, z, w):
        c = (1 - 2 * tau) / (1 + tau)
        def half(a, b):
            return (2 * a * a + c) * cmath.exp(-2 * a * a) * erfc_c(math.sqrt(2) * b) \
                + 2 * math.sqrt(2 / math.pi) * b * cmath.exp(-2 * (a * a + b * b))
        pref = ((1 + tau) / (1 - tau)) ** 1.5 / (12 * math.sqrt(2))
        return pref * cmath.exp(z * z + w * w) * (half(z, w) - half(w, z))

    rng = np.random.default_rng(1)
    for tau in (0.0, 0.3, 0.5, 0.8):
        for _ in range(4):
            z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            w = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            got = kappa_edge_sub(tau, z, w)
            ref = reference(tau, z, w)
            assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


# ---------------------------------------------------------------------------
# unified moving-point kernel
# ---------------------------------------------------------------------------

def test_kappa_a_limits():
    z, w = 0.4 + 0.2j, -0.3 + 0.6j
    assert kappa_a(-math.inf, z, w) == 0
    assert kappa_a(math.inf, z, w) == kappa_bulk(z, w)
    # large finite a reproduces the bulk kernel through the integral route
    assert abs(kappa_a(6.0, z, w) - kappa_bulk(z, w)) <= 1e-8
    # a = 0 is the edge kernel in different variables
    assert abs(kappa_a(0.0, z, w) - kappa_edge(z, w)) <= 1e-8


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------

def test_bulk_density_profile():
    assert bulk_density(0.0) == 0.0
    assert abs(bulk_density(5.0) - 1.0) <= 2e-2
    ys = np.linspace(0.05, 3.0, 30)
    assert all(bulk_density(y) >= -1e-10 for y in ys)


def test_edge_density_two_routes():
    # quadrature of the closed form vs the kernel-assembled density
    for z in (0.3 + 0.8j, -1.0 + 2.0j, 0.5 + 1.3j):
        direct = edge_density(z)
        assembled = ((z.conjugate() - z) * math.exp(-2 * abs(z) ** 2)
                     * kappa_edge(z, z.conjugate())).real
        assert abs(direct - assembled) <= 1e-8
        # and through the moving-point kernel at a = 0
        via_a = ((z.conjugate() - z) * math.exp(-2 * abs(z) ** 2)
                 * kappa_a(0.0, z, z.conjugate())).real
        assert abs(direct - via_a) <= 1e-8


def test_edge_density_asymptotes():
    # R(x + iy) -> erfc(2x)/2 as y -> infinity, at an O(1/y^2) rate
    for x in (-0.5, 0.0, 0.7):
        want = 0.5 * math.erfc(2 * x)
        err6 = abs(edge_density(complex(x, 6.0)) - want)
        err12 = abs(edge_density(complex(x, 12.0)) - want)
        assert err12 <= 1.5e-3
        assert err12 <= err6 / 3.0
    # R_half ~ -(1/sqrt(pi)) ((1+tau)/(1-tau))^{3/2} e^{-4x^2} y^2
    tau, x, y = 0.4, 0.3, 6.0
    got = edge_density_correction(tau, complex(x, y))
    want = -((1 + tau) / (1 - tau)) ** 1.5 * math.exp(-4 * x * x) * y * y / math.sqrt(math.pi)
    assert got == pytest.approx(want, rel=0.05)


def test_density_nonnegative_upper_half():
    for x in np.linspace(-1.5, 1.5, 7):
        for y in np.linspace(0.1, 3.0, 7):
            assert edge_density(complex(x, y)) >= -1e-10


def test_truncation_insensitivity():
    z, w = 0.2 + 0.4j, -0.5 + 0.3j
    base = kappa_edge(z, w)
    spec = EdgeQuadratureSpec(truncation=2.0 * (-8.0 - abs(2 * (w - z)) - abs(z + w)))
    assert abs(kappa_edge(z, w, spec) - base) <= 1e-10


# ---------------------------------------------------------------------------
# limits of the inhomogeneity
# ---------------------------------------------------------------------------

def test_r_limit_origin():
    assert r_limit(0j, 0j).real == pytest.approx(1 - 1 / math.sqrt(2), rel=1e-14)
    assert r_limit(0j, 0j).imag == 0.0
