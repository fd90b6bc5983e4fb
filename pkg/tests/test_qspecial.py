from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from qtbeta.partitions import Partition
from qtbeta.qspecial import (DomainError, Tolerance, c_minus, hook_product, psi_tau, qpochhammer, qpochhammer_inf,
                             qt_pochhammer, theta)


def test_finite_pochhammer_exact():
    assert qpochhammer(Fraction(1, 2), Fraction(1, 3), 2) == Fraction(1, 2) * Fraction(5, 6)
    assert qpochhammer(5, Fraction(1, 2), 0) == 1


def test_euler_pentagonal_oracle():
    # (q;q)_oo = sum_k (-1)^k q^{k(3k-1)/2}
    with mpmath.workdps(40):
        q = mpmath.mpf("0.3")
        series = sum((-1) ** k * q ** (k * (3 * k - 1) // 2) for k in range(-40, 41))
        assert abs(qpochhammer_inf(q, q).value - series) < 1e-25


def test_jacobi_triple_product_oracle():
    # (q;q)_oo theta_q(v) = sum_k (-1)^k q^{k(k-1)/2} v^k
    with mpmath.workdps(40):
        q, v = mpmath.mpf("0.4"), mpmath.mpf("-0.7")
        series = sum((-1) ** k * q ** (k * (k - 1) // 2) * v**k for k in range(-80, 81))
        assert abs(qpochhammer_inf(q, q).value * theta(v, q) - series) < 1e-25


def test_zero_on_lattice_point():
    assert qpochhammer_inf(Fraction(4), Fraction(1, 2)).value == 0


def test_tail_bound_reported():
    b = qpochhammer_inf(mpmath.mpf("0.9"), mpmath.mpf("0.5"), Tolerance(tail_bound=1e-12))
    assert 0 < b.error < 1e-11


def test_bad_q():
    with pytest.raises(DomainError):
        qpochhammer_inf(Fraction(1, 2), Fraction(3, 2))


@given(st.floats(-5, -0.05), st.sampled_from([0.5, 1.0, 1.5, 2.3]))
def test_psi_tau_is_q_periodic(u, tau):
    q = mpmath.mpf("0.45")
    a, b = psi_tau(u, q, tau), psi_tau(u * q, q, tau)
    assert abs(a - b) < 1e-20 * abs(a)


def test_psi_tau_domain():
    with pytest.raises(DomainError):
        psi_tau(0.5, 0.5, 1.0)


def test_qt_pochhammer_and_hooks():
    q, t = Fraction(1, 2), Fraction(1, 3)
    u = Fraction(2, 7)
    nu = Partition((2, 1))
    assert qt_pochhammer(u, q, t, nu) == qpochhammer(u, q, 2) * qpochhammer(u / t, q, 1)
    # boxes of (2,1): (arm, leg) = (1,1), (0,0), (0,0)
    assert hook_product(nu, q, t) == (1 - q * t**2) * (1 - t) ** 2
    assert c_minus(nu, u, q, t) == (1 - u * q * t) * (1 - u) ** 2
