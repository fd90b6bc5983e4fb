from __future__ import annotations

import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from qtbeta.bigqjacobi import Quadruple
from qtbeta.ensembles import (Configuration, DomainError, MeasureSpec, c_constant, default_window,
                              enumerate_measure, log_partition_streaming, partition_function, sample,
                              unnormalized_weight, v_qt, v_qt_integer_tau, verify_orthogonality, z1_check)
from qtbeta.scalars import GaussianRational as G, I, to_mp

Q, T = Fraction(1, 2), Fraction(1, 3)


@pytest.fixture
def spec2(degenerate_quad):
    return MeasureSpec(Q, T, degenerate_quad, 2)


@pytest.mark.parametrize("tau", [1, 2])
@pytest.mark.parametrize("conf", [((0, 1), ()), ((2,), (1,)), ((), (0, 0)), ((1, 3), (0,))])
def test_interaction_at_integer_tau(tau, conf):
    # V is the finite product up to q^{tau(tau-1)/2} per pair
    q = Fraction(1, 3)
    t = q**tau
    X = Configuration(*conf)
    xp, xm = X.positions(q, t, 1, -1)
    pts = xp + xm
    pairs = len(pts) * (len(pts) - 1) // 2
    want = v_qt_integer_tau(pts, q, tau) / to_mp(q) ** (tau * (tau - 1) // 2 * pairs)
    assert abs(v_qt(X, q, t) / want - 1) < 1e-30


def test_configuration_checks():
    with pytest.raises(DomainError):
        Configuration((2, 1), ())
    X = Configuration((0, 3), (1,))
    assert Configuration.from_json(X.to_json()) == X


def test_principal_constraint():
    quad = Quadruple(G(1, 1), G(1, -1), G(0, 1), G(0, -1), "principal")
    with pytest.raises(DomainError):
        MeasureSpec(Q, T, quad, 1)


def test_c_constant_trivial_cases():
    assert c_constant(3, 0, Q, T) == 1
    assert c_constant(1, 1, Q, T) == 1


def test_bulk_weights_match_point_route(spec2):
    en = enumerate_measure(spec2, *default_window(spec2))
    rng = random.Random(3)
    for s in en.strata:
        for _ in range(3):
            a, b = rng.randrange(s.plus.shape[0]), rng.randrange(s.minus.shape[0])
            X = Configuration(tuple(s.plus[a]), tuple(s.minus[b]))
            w = unnormalized_weight(X, spec2)
            if w == 0:
                assert s.logw[a, b] == -np.inf
            else:
                assert abs(float(mpmath.log(w)) - s.logw[a, b]) < 1e-10


def test_degenerate_support_floor(spec2):
    lo, _ = default_window(spec2)
    # alpha = 1 = q^0 and beta * zeta_- = 2 = q^{-1}
    assert lo == {1: 1, -1: 2}


def test_streaming_matches_enumeration(spec2):
    lo, hi = default_window(spec2)
    assert abs(log_partition_streaming(spec2, lo, hi, block=50) - enumerate_measure(spec2, lo, hi).log_z) < 1e-12


def test_z1_closed_form_against_sums(degenerate_quad):
    r = z1_check(MeasureSpec(Q, T, degenerate_quad, 1))
    assert r.error < 1e-10 and r.tail < 1e-10


def test_orthogonality_one_particle(degenerate_quad):
    r = verify_orthogonality(MeasureSpec(Q, T, degenerate_quad, 1), 3)
    assert r.ok(1e-8)


def test_sampling_is_seeded(spec2):
    a = sample(spec2, 7, 20)
    assert a == sample(spec2, 7, 20)
    assert all(len(x) == 2 for x in a)


def test_partition_function_reports_tail(spec2):
    z = partition_function(spec2)
    assert 0 < z.tail <= spec2.tail_budget
    assert math.isclose(z.value, math.exp(z.log_value))
