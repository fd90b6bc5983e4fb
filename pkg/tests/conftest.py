from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from qtbeta.bigqjacobi import Quadruple
from qtbeta.scalars import I

settings.register_profile("qt", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qt")

Q, T = Fraction(1, 2), Fraction(1, 3)


@pytest.fixture
def qt():
    return Q, T


@pytest.fixture
def degenerate_quad():
    # alpha = 1 sits on the plus lattice, beta = -2 on the minus lattice
    return Quadruple(Fraction(1), Fraction(-2), I, -I, "degenerate")
