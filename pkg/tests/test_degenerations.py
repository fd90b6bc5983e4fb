from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtbeta.degenerations import (DomainError, SParams, ZwParams, continuous_coherency_residual,
                                  discrete_beta_weight, discrete_law, discrete_link, discrete_link_tau1,
                                  discrete_log_weights, dixon_anderson_integral, dixon_anderson_kernel,
                                  gamma_routes_agree, interlacing_box, link_row_sum, s_measure_cdf1,
                                  s_measure_density, s_measure_density_complex, s_measure_z1, scalar_limit,
                                  verify_discrete_coherency)

P1 = ZwParams.principal(1.0, -0.5 + 1j, 4 + 0.5j)
signature = st.lists(st.integers(-6, 6), min_size=1, max_size=3).map(lambda v: tuple(sorted(v, reverse=True)))


def test_zw_constraints():
    with pytest.raises(DomainError):
        ZwParams.principal(1.0, 0.5, 1.0)
    with pytest.raises(DomainError):
        ZwParams.principal(1.0, -2 + 1j, 0.5)


@given(signature)
def test_weight_real_and_positive(nu):
    w = discrete_beta_weight(nu, P1)
    assert w > 0
    assert abs(math.log(w) - discrete_log_weights([nu], P1)[0]) < 1e-9


def test_one_particle_weight_formula():
    n = 2
    z, w = P1.z, P1.w
    g = lambda a: mpmath.gamma(a)
    want = g(-z + n) * g(-P1.zp + n) / (g(w + 1 + n) * g(P1.wp + 1 + n))
    assert abs(discrete_beta_weight((n,), P1) - want) < 1e-25 * abs(want)


def test_interaction_at_tau_one_is_vandermonde_squared():
    nu = (3, 1, -2)
    ratio = discrete_beta_weight(nu, P1) / discrete_beta_weight((0, 0, 0), P1)
    n = [nu[i] + 2 - i for i in range(3)]
    n0 = [2, 1, 0]
    sq = lambda v: math.prod((v[i] - v[j]) ** 2 for i in range(3) for j in range(i + 1, 3))
    single = lambda v: math.prod(abs(complex(mpmath.gamma(-P1.z - 2 + x) / mpmath.gamma(P1.w + 1 + x))) ** 2
                                 for x in v)
    assert abs(ratio - sq(n) * single(n) / (sq(n0) * single(n0))) < 1e-12 * ratio


def test_weight_swap_symmetry():
    assert discrete_beta_weight((2, -1), P1) == discrete_beta_weight((2, -1), P1.swapped())


def test_gamma_routes():
    pts = [0.5 + 1j, 3.2 - 0.4j, -2.5 + 1j, 10 + 3j, 1.5, 7.25]
    assert gamma_routes_agree(pts) < 1e-12


def test_link_examples():
    assert discrete_link((1, 0), (0,), 1) == Fraction(1, 2)
    assert discrete_link((1, 0), (1,), 1) == Fraction(1, 2)
    assert discrete_link((3, 0), (4,), 1) == 0
    assert discrete_link((3, 1, 0), (2, 2), Fraction(3, 2)) == 0


@given(st.lists(st.integers(-4, 4), min_size=2, max_size=4).map(lambda v: tuple(sorted(v, reverse=True))))
def test_tau_one_closed_form(nu):
    for mu in interlacing_box(nu):
        assert discrete_link(nu, mu, 1) == discrete_link_tau1(nu, mu)


@pytest.mark.parametrize("tau", [Fraction(1), Fraction(2), 0.5, 1.5])
def test_row_sums(tau):
    assert abs(float(link_row_sum((4, 1, -1), tau)) - 1) < 1e-12


def test_law_normalized():
    law = discrete_law(P1, 2, 30)
    from qtbeta.degenerations import signatures

    assert abs(np.exp(law.log_prob(signatures(2, -30, 30))).sum() - 1) < 1e-12


def test_coherency_small():
    r = verify_discrete_coherency(P1, 2, window=30, inner=5)
    assert r.residual < 1e-8 and r.control_residual > 1e-2


def test_s_density_one_particle():
    p = SParams(1.5, 0.7)
    for u in (-2.0, 0.3, 1.7):
        assert abs(s_measure_density([u], p) - (1 + u * u) ** -1.5) < 1e-14
        assert abs(s_measure_density([u], p) - s_measure_density([-u], p)) < 1e-14


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=3, unique=True), st.floats(0.6, 3), st.floats(-2, 2))
def test_s_density_real(u, re_s, im_s):
    u = sorted(u, reverse=True)
    if len(u) > 1 and min(a - b for a, b in zip(u, u[1:])) < 1e-3:
        return
    p = SParams(complex(re_s, im_s), 0.8)
    z = s_measure_density_complex(u, p)
    assert abs(z.imag) < 1e-10 * abs(z)
    assert abs(z.real - s_measure_density(u, p)) < 1e-10 * abs(z)


def test_s_density_reflection_for_real_s():
    p = SParams(1.2, 0.6)
    u = np.array([1.4, 0.2, -0.9])
    assert abs(s_measure_density(u, p) - s_measure_density(-u[::-1], p)) < 1e-14


def test_s_measure_normalization_and_cdf():
    p = SParams(1.3 + 0.4j, 0.7)
    assert abs(s_measure_z1(p, 100) - s_measure_z1(p, 200)) < 1e-8
    # s = 1: Cauchy law, Z_1 = pi and F(x) = 1/2 + atan(x)/pi
    c = SParams(1, 1.0)
    assert abs(s_measure_z1(c) - math.pi) < 1e-12
    x = np.array([-2.0, 0.0, 0.7])
    assert np.allclose(s_measure_cdf1(x, c), 0.5 + np.arctan(x) / math.pi, atol=1e-12)


def test_dixon_anderson_uniform_case():
    assert dixon_anderson_kernel([1.0, -1.0], [0.3], 1.0) == pytest.approx(0.5)
    assert dixon_anderson_kernel([1.0, -1.0], [1.3], 1.0) == 0.0


@pytest.mark.parametrize("tau", [0.5, 1.0, 2.0])
def test_dixon_anderson_integral(tau):
    assert abs(dixon_anderson_integral([1.5, 0.2, -1.0], tau) - 1) < 1e-6


def test_continuous_coherency():
    assert continuous_coherency_residual(SParams(1, 1.0), np.linspace(-3, 3, 7)) < 1e-5


def test_scalar_limit_finite_product_oracle():
    # (v q^2; q)_oo / (v; q)_oo = 1 / ((1 - v)(1 - v q)) exactly
    r = scalar_limit(Fraction(1, 3), 2, 0, [0.9, 0.99])
    for q, val in zip(r["q"], r["value"]):
        assert abs(val - 1 / ((1 - 1 / 3) * (1 - q / 3))) < 1e-14
    assert r["target"] == pytest.approx(9 / 4)
