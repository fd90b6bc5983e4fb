from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from qtbeta.bigqjacobi import (CoefficientTable, ParameterDegeneracy, Quadruple, big_q_jacobi,
                               big_q_jacobi_via_interpolation, binomial_qts, clear_caches, extracted_pi, pi,
                               pi_symmetry_defect, rho, s_parameter, sigma, stability_check)
from qtbeta.partitions import Partition, partitions_up_to, subpartitions
from qtbeta.polyfamilies import interpolation, macdonald
from qtbeta.qspecial import qt_pochhammer
from qtbeta.scalars import I, GaussianRational, to_mp

Q, T = Fraction(1, 2), Fraction(1, 3)


def test_sigma_triangularity():
    assert sigma((2, 1), (2, 1), Q, T) == 1
    assert sigma((2,), (1, 1), Q, T) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sigma_expands_interpolation(n):
    # I_mu/(t^N)_mu = sum_nu sigma(mu, nu) P_nu/(t^N)_nu
    tn = T**n
    for mu in partitions_up_to(3, n):
        lhs = interpolation(mu, n, Q, T)
        rhs = sum((macdonald(nu, n, Q, T).scale(sigma(mu, nu, Q, T) * qt_pochhammer(tn, Q, T, mu)
                                                  / qt_pochhammer(tn, Q, T, nu))
                   for nu in subpartitions(mu) if len(nu) <= n), start=macdonald((), n, Q, T).scale(0))
        assert lhs == rhs


def test_binomial_properties(degenerate_quad):
    s = s_parameter(Q, degenerate_quad)
    assert s == GaussianRational(0, Fraction(1, 2))
    for lam in partitions_up_to(3):
        assert binomial_qts(lam, lam, Q, T, s) == 1
        for mu in subpartitions(lam):
            b = binomial_qts(lam, mu, Q, T, s)
            assert b == binomial_qts(lam, mu, Q, T, -s)
            assert b == binomial_qts(lam, mu, Q, T, s, max(len(lam), 1) + 1)
            assert isinstance(b, Fraction)


def test_pi_is_real_and_unitriangular(degenerate_quad):
    for lam in partitions_up_to(3):
        assert pi(lam, lam, Q, T, degenerate_quad) == 1
        for nu in subpartitions(lam):
            assert isinstance(pi(lam, nu, Q, T, degenerate_quad), Fraction)


def test_two_routes_agree(degenerate_quad):
    for lam in partitions_up_to(3, 2):
        assert big_q_jacobi(lam, 2, Q, T, degenerate_quad) == big_q_jacobi_via_interpolation(lam, 2, Q, T, degenerate_quad)


def test_extracted_pi_matches_closed_formula(degenerate_quad):
    lam = Partition((2, 1))
    phi = big_q_jacobi_via_interpolation(lam, 2, Q, T, degenerate_quad)
    got = extracted_pi(phi, lam, Q, T)
    assert got == {nu: pi(lam, nu, Q, T, degenerate_quad) for nu in subpartitions(lam)}


def test_stability_detects_a_wrong_quadruple(degenerate_quad):
    assert stability_check((2,), 1, Q, T, degenerate_quad)
    clear_caches()


def test_pi_symmetry(degenerate_quad):
    assert pi_symmetry_defect(2, Q, T, degenerate_quad) == 0


def test_float_parameters_match_exact(degenerate_quad):
    fq = Quadruple(mpmath.mpf(1), mpmath.mpf(-2), mpmath.mpc(0, 1), mpmath.mpc(0, -1))
    for nu in subpartitions(Partition((2, 1))):
        a = pi((2, 1), nu, Q, T, degenerate_quad)
        b = pi((2, 1), nu, to_mp(Q), to_mp(T), fq)
        assert abs(to_mp(a) - b) < 1e-25


def test_degenerate_parameters_raise():
    # gamma q / alpha = 1 kills a Pochhammer symbol in the denominator of rho
    bad = Quadruple(Fraction(1, 2), Fraction(-2), Fraction(1), Fraction(1))
    with pytest.raises(ParameterDegeneracy):
        rho((1,), (1,), Q, T, bad)


def test_quadruple_validation():
    Quadruple(Fraction(1), Fraction(-2), I, -I).validate()
    with pytest.raises(ValueError):
        Quadruple(Fraction(1), Fraction(2), I, -I).validate()
    with pytest.raises(ValueError):
        Quadruple(1, -2, I, -I, series="nonsense")


def test_table_round_trip(degenerate_quad):
    import json

    tab = CoefficientTable.build(2, Q, T, degenerate_quad)
    rows = json.loads(tab.to_json())["rows"]
    assert len(rows) == sum(len(subpartitions(l)) for l in partitions_up_to(2))
    assert tab[(Partition((1,)), Partition(()))] == pi((1,), (), Q, T, degenerate_quad)
