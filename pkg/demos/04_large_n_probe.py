"""How fast does the law of the largest particle settle as N grows?

Enumerates the measure for N = 2..7 at q = t = 1/4 and prints the total
variation distance between consecutive largest-particle laws.
"""

from __future__ import annotations

from fractions import Fraction

from qtbeta.bigqjacobi import Quadruple
from qtbeta.ensembles import MeasureSpec, convergence_probe
from qtbeta.scalars import I

q = Fraction(1, 4)
quad = Quadruple(Fraction(1), Fraction(-1), I, -I, "degenerate")
specs = [MeasureSpec(q, q, quad, n, tail_budget=1e-6) for n in range(2, 8)]
r = convergence_probe(specs)
for n, d in zip(r.ns[1:], r.tv):
    print(f"N={n}: TV to N-1 = {d:.2e}")
