from __future__ import annotations

from fractions import Fraction

import pytest

from qtbeta.partitions import Partition, contains, partitions_up_to
from qtbeta.polyfamilies import (bc_interpolation, grid_a, grid_bc, interpolation, interpolation_eval, macdonald,
                                 macdonald_gram_schmidt_oracle, principal_specialization, schur_jacobi_trudi,
                                 shifted_eval)
from qtbeta.sympoly import SymmetricPolynomial

Q, T = Fraction(1, 2), Fraction(1, 3)


def test_two_row_macdonald_closed_form():
    # P_(2) = m_2 + (1+q)(1-t)/(1-qt) m_11
    p = macdonald((2,), 2, Q, T)
    assert p.coefficient((2,)) == 1
    assert p.coefficient((1, 1)) == (1 + Q) * (1 - T) / (1 - Q * T)


def test_hook_macdonald_closed_form():
    # P_(2,1) = m_21 + (1-t)(2+q+t+2qt)/(1-qt^2) m_111
    p = macdonald((2, 1), 3, Q, T)
    assert p.coefficient((1, 1, 1)) == (1 - T) * (2 + Q + T + 2 * Q * T) / (1 - Q * T**2)


@pytest.mark.parametrize("nu", [(1,), (2,), (1, 1), (3,), (2, 1), (2, 2), (3, 1)])
def test_combinatorial_matches_gram_schmidt(nu):
    assert macdonald(nu, 3, Q, T) == macdonald_gram_schmidt_oracle(nu, 3, Q, T)


@pytest.mark.parametrize("nu", [(2, 1), (3, 1), (2, 2, 1)])
def test_schur_at_t_equal_q(nu):
    assert macdonald(nu, 3, Q, Q) == schur_jacobi_trudi(nu, 3)


@pytest.mark.parametrize("nu", [(1,), (2, 1), (3, 1, 1)])
def test_principal_specialization(nu):
    n = 3
    p = macdonald(nu, n, Q, T)
    assert p.evaluate([T**i for i in range(n)]) == principal_specialization(nu, n, Q, T)


def test_first_interpolation_polynomial():
    # vanishing at X_N(empty) = (1, t, t^2) and top term m_1 fix I_(1) = m_1 - (1 + t + t^2)
    p = interpolation((1,), 3, Q, T)
    assert p == SymmetricPolynomial(3, {Partition((1,)): 1, Partition(()): -(1 + T + T**2)})


@pytest.mark.parametrize("n", [1, 2, 3])
def test_interpolation_vanishing(n):
    for mu in partitions_up_to(3, n):
        for lam in partitions_up_to(3, n):
            v = interpolation_eval(mu, n, Q, T, grid_a(lam, n, Q, T))
            if not contains(lam, mu):
                assert v == 0
            elif lam == mu:
                assert v != 0


def test_interpolation_top_is_macdonald():
    mu = Partition((2, 1))
    assert interpolation(mu, 3, Q, T).top_component() == macdonald(mu, 3, Q, T)


def test_interpolation_stability():
    mu = Partition((2, 1))
    assert interpolation(mu, 3, Q, T).specialize_last(T**2) == interpolation(mu, 2, Q, T)


def test_shifted_eval_vanishes_off_containment():
    assert shifted_eval((2,), (1, 1), Q, T, 2) == 0
    assert shifted_eval((1,), (1,), Q, T, 2) != 0


def test_bc_interpolation_vanishing():
    s = Fraction(2, 5)
    n = 2
    for mu in partitions_up_to(2, n):
        f = bc_interpolation(mu, n, Q, T, s)
        for lam in partitions_up_to(2, n):
            v = f(grid_bc(lam, n, Q, T, s))
            assert (v == 0) == (not contains(lam, mu))


def test_bc_interpolation_inversion_symmetry():
    s = Fraction(2, 5)
    f = bc_interpolation((1,), 2, Q, T, s)
    x = [Fraction(3, 7), Fraction(5, 2)]
    assert f(x) == f([1 / x[0], x[1]])


def test_length_check():
    with pytest.raises(IndexError):
        macdonald((1, 1, 1), 2, Q, T)
