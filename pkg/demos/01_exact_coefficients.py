"""Exact expansion coefficients of multivariate big q-Jacobi polynomials.

All parameters are Gaussian rationals, so every number printed below is exact.
The script builds a polynomial two ways (triangular solve against interpolation
polynomials, and the direct pi expansion) and checks they agree.
"""

from __future__ import annotations

from fractions import Fraction

from qtbeta.bigqjacobi import Quadruple, big_q_jacobi, pi, pi_symmetry_defect, rho, sigma, stability_check
from qtbeta.partitions import Partition, partitions_up_to
from qtbeta.polyfamilies import macdonald, macdonald_gram_schmidt_oracle
from qtbeta.scalars import I

q, t = Fraction(1, 2), Fraction(1, 3)
quad = Quadruple(Fraction(1), Fraction(-2), I, -I, "degenerate")

lam = Partition((2, 1))
print("Macdonald P_(2,1) in 2 variables:")
print("  ", macdonald(lam, 2, q, t))
print("  equals Gram-Schmidt oracle:", macdonald(lam, 2, q, t) == macdonald_gram_schmidt_oracle(lam, 2, q, t))

print("\nCoefficients against subpartitions of (2,1):")
for mu in [Partition(()), Partition((1,)), Partition((2,)), Partition((1, 1))]:
    print(f"  mu={tuple(mu)!s:8} sigma={sigma(lam, mu, q, t)!s:14} rho={rho(lam, mu, q, t, quad)!s:24} "
          f"pi={pi(lam, mu, q, t, quad)}")

print("\nbig q-Jacobi polynomial for (2,1), N=2:")
print("  ", big_q_jacobi(lam, 2, q, t, quad))

ok = all(stability_check(nu, max(len(nu), 1), q, t, quad) for nu in partitions_up_to(3))
print("\nstability (two routes agree for |lambda| <= 3):", ok)
print("pi symmetry defect under swapping (alpha,beta) and (gamma,delta):", pi_symmetry_defect(3, q, t, quad))
