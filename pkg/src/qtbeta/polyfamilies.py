"""Macdonald, interpolation and BC-type interpolation polynomials.

All three families are sums over reverse tableaux weighted by psi_T(q, t);
only the per-box factor differs.  Independent oracles (Gram-Schmidt for the
Macdonald basis, Jacobi-Trudi for Schur) live here too so that callers can
cross-check the combinatorial engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import scalars
from .partitions import (
    Partition,
    enumerate_reverse_tableaux,
    n_stat,
    partitions_of,
    tableau_weight,
    transpose,
)
from .qspecial import hook_product, qt_pochhammer
from .sympoly import SymmetricPolynomial, complete


def _key(*vals):
    """Exact-valued cache key, or None when any value is a float."""
    if all(scalars.is_exact(v) for v in vals):
        return tuple(scalars.simplify(v) for v in vals)
    return None


_TABLEAU_CACHE: dict = {}


def weighted_tableaux(mu: Partition, n: int, q, t) -> list[tuple]:
    """List of (entries, psi_T) for T in RTab(mu, n); entries are (i, j, T(i,j)) triples.

    Memoized only for exact (q, t).
    """
    mu = Partition(mu)
    k = _key(q, t)
    if k is not None:
        ck = (mu, n) + k
        hit = _TABLEAU_CACHE.get(ck)
        if hit is not None:
            return hit
    out = [(tuple(T.items()), tableau_weight(T, q, t)) for T in enumerate_reverse_tableaux(mu, n)]
    if k is not None:
        _TABLEAU_CACHE[ck] = out
    return out


def _check_length(mu: Partition, n: int):
    if len(mu) > n:
        raise IndexError(f"{mu!r} has more than {n} parts")


# -- grids ----------------------------------------------------------------

@dataclass(frozen=True)
class EvaluationGrid:
    """A-type point X_N(lam) or BC-type point X^_N(lam)."""

    kind: str
    lam: Partition
    n: int
    q: object
    t: object
    s: object = None

    def point(self) -> list:
        if self.kind == "A":
            return grid_a(self.lam, self.n, self.q, self.t)
        if self.kind == "BC":
            return grid_bc(self.lam, self.n, self.q, self.t, self.s)
        raise ValueError(f"unknown grid kind {self.kind!r}")


def grid_a(lam, n: int, q, t) -> list:
    """X_N(lam) = (q^{-lam_1}, q^{-lam_2} t, ..., q^{-lam_N} t^{N-1})."""
    lam = Partition(lam)
    _check_length(lam, n)
    return [q ** (-p) * t**i for i, p in enumerate(lam.padded(n))]


def grid_bc(lam, n: int, q, t, s) -> list:
    """X^_N(lam) = (q^{lam_1} t^{N-1} s, ..., q^{lam_N} s)."""
    lam = Partition(lam)
    _check_length(lam, n)
    return [q**p * t ** (n - 1 - i) * s for i, p in enumerate(lam.padded(n))]


# -- Macdonald ------------------------------------------------------------

def macdonald(nu, n: int, q, t) -> SymmetricPolynomial:
    """P_{nu|N}(x; q, t) by the reverse-tableau formula."""
    nu = Partition(nu)
    _check_length(nu, n)
    terms: dict[Partition, object] = {}
    for items, w in weighted_tableaux(nu, n, q, t):
        counts = [0] * n
        for _, _, v in items:
            counts[v - 1] += 1
        if all(counts[i] >= counts[i + 1] for i in range(n - 1)):
            lam = Partition(counts)
            terms[lam] = terms.get(lam, 0) + w
    return SymmetricPolynomial(n, terms)


def _solve(matrix: list[list], rhs: list) -> list:
    """Gaussian elimination over an exact field (Fraction or GaussianRational)."""
    m = len(rhs)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(m):
        piv = next((r for r in range(col, m) if a[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular system")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(m):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][m] for i in range(m)]


@lru_cache(maxsize=None)
def _power_to_monomial(d: int) -> tuple[tuple[Partition, ...], tuple[tuple[int, ...], ...]]:
    """Integer matrix A with p_lam = sum_mu A[lam][mu] m_mu over partitions of d."""
    parts = sorted(partitions_of(d), reverse=True)
    nv = max(d, 1)
    rows = []
    for lam in parts:
        p = SymmetricPolynomial.constant(1, nv)
        for k in lam:
            p = p * SymmetricPolynomial.monomial((k,), nv)
        rows.append(tuple(int(p.coefficient(mu)) for mu in parts))
    return tuple(parts), tuple(rows)


def _z(lam: Partition) -> int:
    from math import factorial

    out = 1
    for k in set(lam):
        c = lam.count(k)
        out *= k**c * factorial(c)
    return out


def macdonald_gram_schmidt_oracle(nu, n: int, q, t) -> SymmetricPolynomial:
    """P_{nu|N} by orthogonalizing monomials under the (q, t) power-sum pairing.

    Works in the full space of degree-|nu| symmetric functions and restricts
    to N variables at the end.
    """
    nu = Partition(nu)
    _check_length(nu, n)
    d = sum(nu)
    if d == 0:
        return SymmetricPolynomial.constant(1, n)
    parts, a = _power_to_monomial(d)
    size = len(parts)
    # m = B p with B = A^{-1}
    a_mat = [[Fraction(x) for x in row] for row in a]
    b_cols = [_solve([[a_mat[r][c] for r in range(size)] for c in range(size)],
                     [Fraction(int(i == j)) for i in range(size)]) for j in range(size)]
    # b_cols[j] solves A^T y = e_j, so b_cols[j][r] = B[j][r]
    norms = []
    for lam in parts:
        val = Fraction(_z(lam))
        for k in lam:
            val = val * (1 - q**k) / (1 - t**k)
        norms.append(val)

    def pair(i: int, j: int):
        return sum((b_cols[i][r] * b_cols[j][r] * norms[r] for r in range(size)), 0)

    idx = parts.index(nu)
    lower = list(range(idx + 1, size))  # lexicographically smaller partitions
    if lower:
        gram = [[pair(i, j) for j in lower] for i in lower]
        rhs = [-pair(i, idx) for i in lower]
        coef = _solve(gram, rhs)
    else:
        coef = []
    terms = {nu: 1}
    for i, c in zip(lower, coef):
        if len(parts[i]) <= n:
            terms[parts[i]] = c
    return SymmetricPolynomial(n, terms)


def schur_jacobi_trudi(nu, n: int) -> SymmetricPolynomial:
    """s_nu(x_1..x_N) = det(h_{nu_i - i + j}) expanded by cofactors."""
    nu = Partition(nu)
    _check_length(nu, n)
    ell = len(nu)
    if ell == 0:
        return SymmetricPolynomial.constant(1, n)

    def h(k: int) -> SymmetricPolynomial:
        if k < 0:
            return SymmetricPolynomial(n)
        if k == 0:
            return SymmetricPolynomial.constant(1, n)
        return complete(k, n)

    mat = [[h(nu[i] - i + j) for j in range(ell)] for i in range(ell)]

    def det(rows: list[int], cols: list[int]) -> SymmetricPolynomial:
        if len(rows) == 1:
            return mat[rows[0]][cols[0]]
        out = SymmetricPolynomial(n)
        r, rest = rows[0], rows[1:]
        for k, c in enumerate(cols):
            entry = mat[r][c]
            if entry.is_zero():
                continue
            minor = det(rest, cols[:k] + cols[k + 1:])
            term = entry * minor
            out = out + (term if k % 2 == 0 else -term)
        return out

    return det(list(range(ell)), list(range(ell)))


def principal_specialization(mu, n: int, q, t):
    """P_{mu|N}(1, t, ..., t^{N-1}) in closed form."""
    mu = Partition(mu)
    _check_length(mu, n)
    return t ** n_stat(mu) * qt_pochhammer(t**n, q, t, mu) / hook_product(mu, q, t)


# -- A-type interpolation -------------------------------------------------

def _box_constant(i: int, j: int, v: int, q, t):
    return q ** (1 - j) * t ** (v + i - 2)


def interpolation(mu, n: int, q, t) -> SymmetricPolynomial:
    """I_{mu|N}(x; q, t), expanded in the monomial basis."""
    mu = Partition(mu)
    _check_length(mu, n)
    acc: dict[tuple[int, ...], object] = {}
    for items, w in weighted_tableaux(mu, n, q, t):
        poly: dict[tuple[int, ...], object] = {(0,) * n: w}
        for i, j, v in items:
            c = _box_constant(i, j, v, q, t)
            nxt: dict[tuple[int, ...], object] = {}
            for expo, coef in poly.items():
                up = list(expo)
                up[v - 1] += 1
                up = tuple(up)
                nxt[up] = nxt.get(up, 0) + coef
                nxt[expo] = nxt.get(expo, 0) - coef * c
            poly = nxt
        for expo, coef in poly.items():
            if all(expo[k] >= expo[k + 1] for k in range(n - 1)):
                acc[expo] = acc.get(expo, 0) + coef
    return SymmetricPolynomial.from_exponent_dict(n, acc)


def interpolation_eval(mu, n: int, q, t, point: Sequence):
    """I_{mu|N}(point; q, t) straight from the tableau sum, without expanding."""
    mu = Partition(mu)
    _check_length(mu, n)
    if len(point) != n:
        raise ValueError(f"expected {n} coordinates")
    total = 0
    for items, w in weighted_tableaux(mu, n, q, t):
        term = w
        for i, j, v in items:
            term = term * (point[v - 1] - _box_constant(i, j, v, q, t))
        total = total + term
    return total


def shifted_eval(nu, mu, q, t, n: int | None = None):
    """Okounkov's P*_nu(q^mu; q, t), through I_{nu|N}(.; 1/q, 1/t)."""
    nu, mu = Partition(nu), Partition(mu)
    need = max(len(nu), len(mu), 1)
    if n is None:
        n = need
    if n < need:
        raise ValueError(f"N={n} is below max(l(mu), l(nu))={need}")
    qi, ti = 1 / q, 1 / t
    point = [q**p * ti**i for i, p in enumerate(mu.padded(n))]
    return interpolation_eval(nu, n, qi, ti, point)


# -- BC-type interpolation ------------------------------------------------

class BCInterpolation:
    """Evaluator for the BC_N-invariant interpolation polynomial P^*_mu(z; q, t, s)."""

    def __init__(self, mu, n: int, q, t, s):
        self.mu = Partition(mu)
        _check_length(self.mu, n)
        if s == 0:
            raise ValueError("s must be nonzero")
        self.n, self.q, self.t, self.s = n, q, t, s
        self._terms = []
        for items, w in weighted_tableaux(self.mu, n, q, t):
            shifts = []
            for i, j, v in items:
                u = q ** (j - 1) * t ** (n - i + 1 - v) * s
                shifts.append((v - 1, u + 1 / u))
            self._terms.append((w, shifts))

    def __call__(self, z: Sequence):
        if len(z) != self.n:
            raise ValueError(f"expected {self.n} coordinates")
        if any(v == 0 for v in z):
            raise ZeroDivisionError("zero argument")
        sym = [v + 1 / v for v in z]
        total = 0
        for w, shifts in self._terms:
            term = w
            for k, c in shifts:
                term = term * (sym[k] - c)
            total = total + term
        return total

    def batch(self, points: Sequence[Sequence]) -> list:
        return [self(p) for p in points]

    def batch_numpy(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=complex)
        sym = pts + 1 / pts
        out = np.zeros(pts.shape[0], dtype=complex)
        for w, shifts in self._terms:
            term = np.full(pts.shape[0], complex(scalars.to_mp(w)))
            for k, c in shifts:
                term = term * (sym[:, k] - complex(scalars.to_mp(c)))
            out += term
        return out


def bc_interpolation(mu, n: int, q, t, s) -> BCInterpolation:
    return BCInterpolation(mu, n, q, t, s)


def evaluator(p: SymmetricPolynomial) -> Callable:
    return p.evaluate
