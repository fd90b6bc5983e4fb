"""From q-lattices to beta ensembles as q -> 1.

Part 1: the discrete beta ensemble, its stochastic links and their coherency.
Part 2: the continuous s-ensemble and the Dixon-Anderson kernel.
Part 3: errors against the limiting laws shrink as q approaches 1.
"""

from __future__ import annotations

from fractions import Fraction

from qtbeta.degenerations import (SParams, ZwParams, check_degeneration_continuous, check_degeneration_discrete,
                                  continuous_coherency_residual, dixon_anderson_integral, link_row_sum,
                                  scalar_limit, verify_discrete_coherency)

p = ZwParams.principal(1.5, z=-0.5 + 1j, w=4 + 0.5j)
print("link row sums, tau = 3/2:")
for nu in [(2, 0), (3, 1, 0), (4, 2, -1, -3)]:
    print(f"  nu={nu}: {float(link_row_sum(nu, 1.5)):.16f}")

r = verify_discrete_coherency(p, 3, window=40)
print(f"coherency N=3 -> 2: residual {r.residual:.1e}, tilted control {r.control_residual:.3f}, tail {r.tail:.1e}")

print("\nDixon-Anderson integrals (should be 1):")
for tau in (0.5, 1.0, 2.0):
    print(f"  tau={tau}: {dixon_anderson_integral([2.0, 0.3, -1.1], tau):.15f}")
sp = SParams(1.0, 1.0)
print(f"continuous coherency residual: {continuous_coherency_residual(sp, [-1.0, 0.0, 0.7, 2.5]):.1e}")

q_seq = [0.9, 0.99, 0.995]
print("\nq -> 1 (errors should decrease):")
s = scalar_limit(Fraction(1, 3), 2, 0, [0.9, 0.99, 0.999])
print("  scalar  ", [f"{e:.2e}" for e in s["abs_error"]])
d = check_degeneration_discrete(q_seq, ZwParams.principal(1.0, z=-0.5 + 1j, w=4 + 0.5j), (1,))
print("  discrete", [f"{e:.2e}" for e in d.abs_error], "mass near 1:", [f"{m:.4f}" for m in d.extra["mass_near_one"]])
c = check_degeneration_continuous(q_seq, sp)
print("  s-measure CDF", [f"{e:.2e}" for e in c.abs_error])
