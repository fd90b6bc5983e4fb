"""Sparse symmetric polynomials stored in the monomial symmetric basis m_lambda."""

from __future__ import annotations

import json
from functools import lru_cache
from itertools import permutations
from typing import Callable, Iterable, Mapping

import numpy as np

from . import scalars
from .partitions import Partition

DEGREE_CAP = 12


class DegreeCapExceeded(ValueError):
    pass


@lru_cache(maxsize=None)
def distinct_permutations(vec: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(set(permutations(vec)), reverse=True))


@lru_cache(maxsize=None)
def _mono_product(lam: tuple, mu: tuple, n: int) -> tuple[tuple[Partition, int], ...]:
    a = Partition(lam).padded(n)
    b = Partition(mu).padded(n)
    # coefficient of m_nu is the number of pairs (alpha, beta) in the two
    # orbits with alpha + beta = nu, counted at the dominant nu only
    counts: dict[tuple[int, ...], int] = {}
    for alpha in distinct_permutations(a):
        for beta in distinct_permutations(b):
            s = tuple(x + y for x, y in zip(alpha, beta))
            if all(s[i] >= s[i + 1] for i in range(n - 1)):
                counts[s] = counts.get(s, 0) + 1
    return tuple((Partition(k), v) for k, v in counts.items())


def _order_key(lam: Partition):
    return (sum(lam), tuple(lam))


class SymmetricPolynomial:
    """Symmetric polynomial in ``num_vars`` variables, sum of c_lambda m_lambda."""

    __slots__ = ("num_vars", "terms")

    def __init__(self, num_vars: int, terms: Mapping | None = None):
        if num_vars < 1:
            raise ValueError("num_vars must be >= 1")
        self.num_vars = num_vars
        clean: dict[Partition, object] = {}
        for lam, c in (terms or {}).items():
            lam = Partition(lam)
            if len(lam) > num_vars:
                raise ValueError(f"{lam!r} has more than {num_vars} parts")
            if sum(lam) > DEGREE_CAP:
                raise DegreeCapExceeded(f"degree {sum(lam)} exceeds cap {DEGREE_CAP}")
            if c != 0:
                clean[lam] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------
    @classmethod
    def monomial(cls, lam, num_vars: int, coef=1) -> "SymmetricPolynomial":
        return cls(num_vars, {Partition(lam): coef})

    @classmethod
    def constant(cls, c, num_vars: int) -> "SymmetricPolynomial":
        return cls(num_vars, {Partition(): c})

    @classmethod
    def from_exponent_dict(cls, num_vars: int, coeffs: Mapping[tuple[int, ...], object]) -> "SymmetricPolynomial":
        """Build from a full monomial expansion, reading the dominant exponents only.

        The caller guarantees the expansion is symmetric.
        """
        terms = {}
        for expo, c in coeffs.items():
            if all(expo[i] >= expo[i + 1] for i in range(len(expo) - 1)):
                terms[Partition(expo)] = c
        return cls(num_vars, terms)

    # -- basic protocol -------------------------------------------------
    def _check(self, other: "SymmetricPolynomial"):
        if other.num_vars != self.num_vars:
            raise ValueError(f"mismatched num_vars: {self.num_vars} vs {other.num_vars}")

    def __eq__(self, other):
        if isinstance(other, SymmetricPolynomial):
            return self.num_vars == other.num_vars and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __repr__(self):
        body = " + ".join(f"({c})*m{list(lam)}" for lam, c in self.sorted_terms())
        return f"SymmetricPolynomial(n={self.num_vars}: {body or '0'})"

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _order_key(kv[0]), reverse=True)

    def coefficient(self, lam):
        return self.terms.get(Partition(lam), 0)

    def degree(self) -> int:
        return max((sum(lam) for lam in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, SymmetricPolynomial):
            other = SymmetricPolynomial.constant(other, self.num_vars)
        self._check(other)
        out = dict(self.terms)
        for lam, c in other.terms.items():
            out[lam] = out.get(lam, 0) + c
        return SymmetricPolynomial(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self):
        return SymmetricPolynomial(self.num_vars, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SymmetricPolynomial":
        return SymmetricPolynomial(self.num_vars, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SymmetricPolynomial):
            return self.scale(other)
        self._check(other)
        if self.degree() + other.degree() > DEGREE_CAP:
            raise DegreeCapExceeded("product degree exceeds cap")
        out: dict[Partition, object] = {}
        for lam, a in self.terms.items():
            for mu, b in other.terms.items():
                for nu, k in _mono_product(tuple(lam), tuple(mu), self.num_vars):
                    out[nu] = out.get(nu, 0) + a * b * k
        return SymmetricPolynomial(self.num_vars, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        return SymmetricPolynomial(self.num_vars, {k: v / c for k, v in self.terms.items()})

    def map_coefficients(self, fn: Callable) -> "SymmetricPolynomial":
        return SymmetricPolynomial(self.num_vars, {k: fn(v) for k, v in self.terms.items()})

    # -- structure ------------------------------------------------------
    def homogeneous_component(self, d: int) -> "SymmetricPolynomial":
        return SymmetricPolynomial(self.num_vars, {k: v for k, v in self.terms.items() if sum(k) == d})

    def top_component(self) -> "SymmetricPolynomial":
        return self.homogeneous_component(self.degree())

    def rescale_variables(self, g) -> "SymmetricPolynomial":
        """p(g x_1, ..., g x_N)."""
        return SymmetricPolynomial(self.num_vars, {k: v * g ** sum(k) for k, v in self.terms.items()})

    def specialize_last(self, value) -> "SymmetricPolynomial":
        """Substitute x_N = value, returning a polynomial in N - 1 variables."""
        n = self.num_vars
        if n < 2:
            raise ValueError("need at least two variables")
        out: dict[Partition, object] = {}
        for lam, c in self.terms.items():
            parts = list(lam.padded(n))
            for k in sorted(set(parts)):
                rest = list(parts)
                rest.remove(k)
                mu = Partition(rest)
                out[mu] = out.get(mu, 0) + c * value**k
        return SymmetricPolynomial(n - 1, out)

    # -- evaluation -----------------------------------------------------
    def evaluate(self, point) -> object:
        point = list(point)
        if len(point) != self.num_vars:
            raise ValueError(f"expected {self.num_vars} coordinates, got {len(point)}")
        total = 0
        for lam, c in self.terms.items():
            s = 0
            for alpha in distinct_permutations(lam.padded(self.num_vars)):
                term = 1
                for x, e in zip(point, alpha):
                    if e:
                        term = term * x**e
                s = s + term
            total = total + c * s
        return total

    __call__ = evaluate

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Batch evaluation in complex double precision, one row per point."""
        pts = np.asarray(points, dtype=complex)
        if pts.ndim != 2 or pts.shape[1] != self.num_vars:
            raise ValueError("points must have shape (m, num_vars)")
        out = np.zeros(pts.shape[0], dtype=complex)
        for lam, c in self.terms.items():
            cc = complex(scalars.to_mp(c))
            s = np.zeros(pts.shape[0], dtype=complex)
            for alpha in distinct_permutations(lam.padded(self.num_vars)):
                s += np.prod(pts ** np.array(alpha), axis=1)
            out += cc * s
        return out

    # -- serialization --------------------------------------------------
    def to_dict(self) -> dict:
        return {"n": self.num_vars,
                "terms": [{"lambda": list(lam), "coef": scalars.to_json(c)} for lam, c in self.sorted_terms()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "SymmetricPolynomial":
        return cls(int(obj["n"]), {Partition(t["lambda"]): scalars.from_json(t["coef"]) for t in obj["terms"]})

    @classmethod
    def from_json(cls, text: str) -> "SymmetricPolynomial":
        return cls.from_dict(json.loads(text))


def power_sum(k: int, num_vars: int) -> SymmetricPolynomial:
    return SymmetricPolynomial.monomial((k,), num_vars)


def elementary(k: int, num_vars: int) -> SymmetricPolynomial:
    if k > num_vars:
        return SymmetricPolynomial(num_vars)
    return SymmetricPolynomial.monomial((1,) * k, num_vars)


def complete(k: int, num_vars: int) -> SymmetricPolynomial:
    from .partitions import partitions_of

    return SymmetricPolynomial(num_vars, {lam: 1 for lam in partitions_of(k, num_vars)})


def expand_in_basis(p: SymmetricPolynomial, basis: Callable[[Partition], SymmetricPolynomial]) -> dict[Partition, object]:
    """Coefficients of ``p`` in a basis unitriangular w.r.t. the m_lambda basis.

    ``basis(lam)`` must return a polynomial whose largest term in the
    (degree, lexicographic) order is exactly ``m_lam`` with coefficient 1.
    """
    rest = p
    coeffs: dict[Partition, object] = {}
    while not rest.is_zero():
        lam, c = rest.sorted_terms()[0]
        b = basis(lam)
        lead, lead_c = b.sorted_terms()[0]
        if lead != lam or lead_c != 1:
            raise ArithmeticError(f"basis element for {lam!r} is not unitriangular")
        coeffs[lam] = c
        rest = rest - b.scale(c)
    return coeffs


def combine(coeffs: Mapping, basis: Callable[[Partition], SymmetricPolynomial], num_vars: int) -> SymmetricPolynomial:
    out = SymmetricPolynomial(num_vars)
    for lam, c in coeffs.items():
        out = out + basis(Partition(lam)).scale(c)
    return out


def coefficients_in_macdonald(p: SymmetricPolynomial, q, t) -> dict[Partition, object]:
    """Coefficients c_nu with p = sum c_nu P_{nu|N}(q, t)."""
    from .polyfamilies import macdonald

    return expand_in_basis(p, lambda lam: macdonald(lam, p.num_vars, q, t))


def symmetrize_sum(polys: Iterable[SymmetricPolynomial], num_vars: int) -> SymmetricPolynomial:
    out = SymmetricPolynomial(num_vars)
    for p in polys:
        out = out + p
    return out
