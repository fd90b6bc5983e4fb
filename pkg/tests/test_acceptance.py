"""One test per acceptance criterion, at the tolerances of the build contract."""

from __future__ import annotations

import random
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from qtbeta.bigqjacobi import Quadruple, pi_symmetry_defect, stability_check
from qtbeta.degenerations import (SParams, ZwParams, check_degeneration_continuous, check_degeneration_discrete,
                                  discrete_link, discrete_link_tau1, dixon_anderson_integral, interlacing_box,
                                  link_row_sum, scalar_limit, verify_discrete_coherency)
from qtbeta.ensembles import MeasureSpec, convergence_probe, verify_orthogonality, z1_check
from qtbeta.partitions import Partition, contains, partitions_up_to
from qtbeta.polyfamilies import (grid_a, interpolation, interpolation_eval, macdonald, macdonald_gram_schmidt_oracle,
                                 schur_jacobi_trudi)
from qtbeta.scalars import GaussianRational as G, I

Q, T = Fraction(1, 2), Fraction(1, 3)
DEGENERATE = Quadruple(Fraction(1), Fraction(-2), I, -I, "degenerate")
ZW = dict(z=-0.5 + 1j, w=4 + 0.5j)
Q_SEQ = [0.9, 0.99, 0.995]


def test_1_expansion_stability():
    start = time.perf_counter()
    for lam in partitions_up_to(4):
        assert stability_check(lam, max(len(lam), 1), Q, T, DEGENERATE), lam
    assert time.perf_counter() - start < 120


def test_2_interpolation_identities():
    for n in (1, 2, 3):
        for mu in partitions_up_to(4, n):
            poly = interpolation(mu, n, Q, T)
            for lam in partitions_up_to(5, n):
                val = poly.evaluate(grid_a(lam, n, Q, T))
                if lam == mu:
                    assert val != 0
                elif sum(lam) <= sum(mu) or not contains(lam, mu):
                    assert val == 0, (mu, lam)
            assert poly.top_component() == macdonald(mu, n, Q, T)
            if n > 1 and len(mu) < n:
                assert poly.specialize_last(T ** (n - 1)) == interpolation(mu, n - 1, Q, T)
            assert val == interpolation_eval(mu, n, Q, T, grid_a(lam, n, Q, T))


def test_3_dual_implementations():
    for n in (1, 2, 3, 4):
        for nu in partitions_up_to(5, n):
            assert macdonald(nu, n, Q, T) == macdonald_gram_schmidt_oracle(nu, n, Q, T), (nu, n)
            assert macdonald(nu, n, Q, Q) == schur_jacobi_trudi(nu, n), (nu, n)


Z1_CASES = [
    MeasureSpec(Q, T, DEGENERATE, 1),
    MeasureSpec(Fraction(1, 3), Fraction(1, 5), Quadruple(Fraction(3), Fraction(-9), G(1, 1), G(1, -1)), 1),
    MeasureSpec(Q, T, Quadruple(G(Fraction(3, 10), Fraction(1, 5)), G(Fraction(3, 10), Fraction(-1, 5)),
                                G(1, 2), G(1, -2), "principal"), 1),
    MeasureSpec(Fraction(7, 10), Q, Quadruple(G(Fraction(1, 5), Fraction(1, 2)), G(Fraction(1, 5), Fraction(-1, 2)),
                                              G(Fraction(1, 2), 1), G(Fraction(1, 2), -1), "principal"), 1,
                zeta_plus=Fraction(3, 2), zeta_minus=Fraction(-1, 2)),
]


def test_4_one_particle_normalization():
    series = set()
    for spec in Z1_CASES:
        r = z1_check(spec)
        series.add(spec.quad.series)
        assert abs(r.closed - r.summed_mp) <= 1e-10 * abs(r.closed)
        assert abs(r.closed - r.summed_bulk) <= 1e-10 * abs(r.closed)
    assert series == {"degenerate", "principal"}


def test_5_orthogonality():
    for n in (1, 2):
        r = verify_orthogonality(MeasureSpec(Q, T, DEGENERATE, n, tail_budget=1e-10), 3)
        assert r.tail <= 1e-10
        assert r.max_offdiag < 1e-8
        assert r.min_diag > 0


def test_6_pi_symmetry():
    assert pi_symmetry_defect(3, Q, T, DEGENERATE) <= 1e-10
    fq = Quadruple(mpmath.mpf(3), mpmath.mpf(-5), mpmath.mpc(0.5, 2), mpmath.mpc(0.5, -2))
    assert pi_symmetry_defect(3, mpmath.mpf(0.4), mpmath.mpf(0.7), fq) <= 1e-10


def test_7_stochastic_links():
    rng = random.Random(11)
    for tau in (0.5, Fraction(1), 1.5, Fraction(2)):
        for n in (2, 3, 4):
            for _ in range(4):
                top = rng.randint(-5, 5)
                nu = tuple(sorted((rng.randint(top - 10, top) for _ in range(n - 1)), reverse=True))
                nu = (top,) + nu
                assert abs(float(link_row_sum(nu, tau)) - 1) < 1e-12, (nu, tau)
                if tau == 1:
                    for mu in interlacing_box(nu):
                        assert discrete_link(nu, mu, 1) == discrete_link_tau1(nu, mu)


def test_8_discrete_coherency():
    for n in (2, 3):
        for tau in (1.0, 1.5):
            r = verify_discrete_coherency(ZwParams.principal(tau, **ZW), n, window=40)
            assert r.residual < 1e-6, r
            assert r.control_residual > 1e-2, r


def test_9_dixon_anderson():
    for u in ([1.3, -0.4], [2.0, 0.3, -1.1]):
        for tau in (0.5, 1.0, 2.0):
            assert abs(dixon_anderson_integral(u, tau) - 1) < 1e-6


def test_10_degeneration_limits():
    p = ZwParams.principal(1.0, **ZW)
    for nu in ((1,), (1, 0)):
        r = check_degeneration_discrete(Q_SEQ, p, nu)
        assert r.decreasing, r.to_dict()
        assert r.extra["mass_near_one"][-1] > 0.999
    r = check_degeneration_continuous(Q_SEQ, SParams(1, 1.0))
    assert r.decreasing, r.to_dict()
    s = scalar_limit(Fraction(1, 3), 2, 0, [0.9, 0.99, 0.999])
    e = s["abs_error"]
    assert s["target"] == pytest.approx(9 / 4, abs=1e-15)
    assert all(a >= 5 * b for a, b in zip(e, e[1:]))


def test_11_large_n_probe():
    q = Fraction(1, 4)
    quad = Quadruple(Fraction(1), Fraction(-1), I, -I, "degenerate")
    specs = [MeasureSpec(q, q, quad, n, tail_budget=1e-6) for n in range(2, 9)]
    r = convergence_probe(specs)
    print("tv by N:", dict(zip(r.ns[1:], r.tv)))
    assert int(np.argmin(r.tv)) == len(r.tv) - 1
