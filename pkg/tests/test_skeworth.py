import math
from fractions import Fraction

import numpy as np
import pytest

from sympgin.kernels import KernelContext, prekernel_kappa_N
from sympgin.skeworth import (
    PolynomialRep,
    QuadratureBudgetError,
    prekernel_via_sop,
    q_even,
    q_odd,
    r_norm,
    skew_inner,
    verify_skew_orthogonality,
)

from _oracles import q_even_rational


def test_q_low_orders():
    assert q_even(0, 4, 0.3).coefficients == (1 + 0j,)
    q1 = q_odd(0, 4, 0.3)
    assert q1.degree == 1 and q1.coefficients[1] == 1 and q1.coefficients[0] == 0
    # q_2 = z^2 + (2 - tau)/N, frozen from the exact-rational oracle
    q2 = q_even(1, 4, 0.3)
    ref = q_even_rational(1, 4, Fraction(3, 10))
    assert ref == [Fraction(17, 40), Fraction(0), Fraction(1)]
    for c, r in zip(q2.coefficients, ref):
        assert c == pytest.approx(complex(Fraction(r)), abs=1e-15)


def test_q_parity_and_monic():
    for k in (0, 1, 2, 3):
        qe, qo = q_even(k, 5, 0.45), q_odd(k, 5, 0.45)
        assert qe.coefficients[-1] == 1 and qo.coefficients[-1] == 1
        assert all(qe.coefficients[i] == 0 for i in range(1, qe.degree + 1, 2))
        assert all(qo.coefficients[i] == 0 for i in range(0, qo.degree + 1, 2))


def test_skew_inner_antisymmetry_and_bilinearity():
    rng = np.random.default_rng(0)
    N, tau = 4, 0.3
    f = PolynomialRep(tuple(complex(a, b) for a, b in rng.standard_normal((3, 2))))
    g = PolynomialRep(tuple(complex(a, b) for a, b in rng.standard_normal((4, 2))))
    h = PolynomialRep(tuple(complex(a, b) for a, b in rng.standard_normal((4, 2))))
    assert abs(skew_inner(f, f, N, tau)) <= 1e-14
    assert skew_inner(f, g, N, tau) == pytest.approx(-skew_inner(g, f, N, tau), rel=1e-12)
    lam = 0.7 - 0.4j
    combo = PolynomialRep(tuple(lam * a + b for a, b in zip(g.coefficients, h.coefficients)))
    lhs = skew_inner(f, combo, N, tau)
    rhs = lam * skew_inner(f, g, N, tau) + skew_inner(f, h, N, tau)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_r0_against_closed_form():
    N, tau = 4, 0.3
    got = skew_inner(q_even(0, N, tau), q_odd(0, N, tau), N, tau)
    want = 2 * (1 - tau) ** 1.5 * math.sqrt(1 + tau) / N**2
    assert got.real == pytest.approx(want, rel=1e-10)
    assert abs(got.imag) <= 1e-14
    assert r_norm(0, N, tau) == pytest.approx(want, rel=1e-15)


def test_q0_q2_skew_orthogonal():
    N, tau = 4, 0.3
    v = skew_inner(q_even(0, N, tau), q_even(1, N, tau), N, tau)
    assert abs(v) <= 1e-12


def test_r_norm_ratio():
    N, tau = 7, 0.5
    for k in range(4):
        got = r_norm(k + 1, N, tau) / r_norm(k, N, tau)
        assert got == pytest.approx((2 * k + 3) * (2 * k + 2) / N**2, rel=1e-14)


def test_verify_skew_orthogonality():
    assert verify_skew_orthogonality(4, 0.3, 3) <= 1e-9
    # Ginibre specialisation: the same construction at tau = 0
    assert verify_skew_orthogonality(4, 0.0, 3) <= 1e-9


def test_quadrature_exactness_under_node_doubling():
    N, tau = 4, 0.3
    f, g = q_even(2, N, tau), q_odd(1, N, tau)
    base = skew_inner(f, g, N, tau)
    # same integrand with twice the nodes via a padded degree
    f_pad = PolynomialRep(f.coefficients + (0j,) * (f.degree + 9))
    refined = skew_inner(f_pad, g, N, tau)
    assert refined == pytest.approx(base, rel=1e-13, abs=1e-16)


def test_budget_error():
    f = PolynomialRep((0j,) * 600 + (1 + 0j,))
    with pytest.raises(QuadratureBudgetError):
        skew_inner(f, f, 4, 0.3)


def test_sop_prekernel_matches_canonical():
    N, tau, p = 4, 0.3, 0.0
    ctx = KernelContext(N=N, tau=tau, p=p)
    rng = np.random.default_rng(1)
    for _ in range(5):
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        w = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        sop = prekernel_via_sop(N, tau, p, z, w)
        can = prekernel_kappa_N(ctx, z, w)
        assert can.rel_diff(sop) <= 1e-10


def test_sop_prekernel_antisymmetric_and_n1():
    v = prekernel_via_sop(3, 0.4, 0.5, 0.2 + 0.3j, -0.1 + 0.6j)
    w = prekernel_via_sop(3, 0.4, 0.5, -0.1 + 0.6j, 0.2 + 0.3j)
    assert (v + w).abs_log2() - v.abs_log2() <= math.log2(1e-12)
    z, u = 0.4 + 0.2j, -0.1 + 0.9j
    got = prekernel_via_sop(1, 0.3, 0.0, z, u).to_complex()
    want = 2 * 1.3 * math.sqrt(1 - 0.09) * (z - u)
    assert got == pytest.approx(want, rel=1e-12)
