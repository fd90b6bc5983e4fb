"""Expansion coefficients of the multivariate big q-Jacobi polynomials.

phi_{lam|N}(x; q, t; alpha, beta, gamma t^{1-N}, delta t^{1-N}) is built from
interpolation polynomials through rho, and from Macdonald polynomials through
pi = sum_mu rho * sigma * gamma^{|nu| - |mu|}.  Both routes are exposed so
that the stability statement (pi does not depend on N) can be tested against
an independent triangular solve.
"""

from __future__ import annotations

import json
import threading
from fractions import Fraction
from dataclasses import dataclass
from typing import Iterable

import mpmath

from . import scalars
from .partitions import Partition, contains, n_stat, partitions_up_to, subpartitions, transpose
from .polyfamilies import bc_interpolation, grid_bc, interpolation, macdonald, shifted_eval
from .qspecial import c_plus, hook_product, qt_pochhammer
from .sympoly import SymmetricPolynomial, expand_in_basis

SERIES = ("degenerate", "principal", "complementary")


class ParameterDegeneracy(ArithmeticError):
    """A denominator vanished: the parameters sit on an excluded locus."""


@dataclass(frozen=True)
class Quadruple:
    alpha: object
    beta: object
    gamma: object
    delta: object
    series: str = "degenerate"

    def __post_init__(self):
        if self.series not in SERIES:
            raise ValueError(f"series must be one of {SERIES}")

    def swap_ab(self) -> "Quadruple":
        return Quadruple(self.beta, self.alpha, self.gamma, self.delta, self.series)

    def swap_cd(self) -> "Quadruple":
        return Quadruple(self.alpha, self.beta, self.delta, self.gamma, self.series)

    def is_exact(self) -> bool:
        return all(scalars.is_exact(v) for v in (self.alpha, self.beta, self.gamma, self.delta))

    def key(self):
        return tuple(scalars.simplify(v) for v in (self.alpha, self.beta, self.gamma, self.delta))

    def validate(self, tol: float = 1e-12) -> None:
        """Check the series constraints that do not depend on the lattice."""
        a, b, g, d = (scalars.to_mp(v) for v in (self.alpha, self.beta, self.gamma, self.delta))
        if abs(g - mpmath.conj(d)) > tol or abs(mpmath.im(g)) <= tol:
            raise ValueError("need gamma = conj(delta) off the real line")
        if self.series == "degenerate":
            if abs(mpmath.im(a)) > tol or abs(mpmath.im(b)) > tol or not (mpmath.re(b) < 0 < mpmath.re(a)):
                raise ValueError("degenerate series needs beta < 0 < alpha")
        elif self.series == "principal":
            if abs(a - mpmath.conj(b)) > tol or abs(mpmath.im(a)) <= tol:
                raise ValueError("principal series needs alpha = conj(beta) off the real line")

    def to_dict(self) -> dict:
        return {"alpha": scalars.to_json(self.alpha), "beta": scalars.to_json(self.beta),
                "gamma": scalars.to_json(self.gamma), "delta": scalars.to_json(self.delta),
                "series": self.series}

    @classmethod
    def from_dict(cls, obj: dict) -> "Quadruple":
        return cls(*(scalars.from_json(obj[k]) for k in ("alpha", "beta", "gamma", "delta")),
                   series=obj.get("series", "degenerate"))


# -- memo tables keyed by exact parameters --------------------------------

class _Memo:
    def __init__(self):
        self._data: dict = {}
        self._lock = threading.Lock()

    def get(self, key, compute):
        if key is None:
            return compute()
        with self._lock:
            if key in self._data:
                return self._data[key]
        val = compute()
        with self._lock:
            # idempotent: equal keys always compute equal exact values
            return self._data.setdefault(key, val)

    def clear(self):
        with self._lock:
            self._data.clear()


_SIGMA = _Memo()
_BINOM = _Memo()
_RHO = _Memo()
_PI = _Memo()


def clear_caches() -> None:
    for m in (_SIGMA, _BINOM, _RHO, _PI):
        m.clear()


def _exact_key(tag, *vals):
    flat = []
    for v in vals:
        if isinstance(v, Quadruple):
            if not v.is_exact():
                return None
            flat.append(v.key())
        elif isinstance(v, Partition):
            flat.append(v)
        elif scalars.is_exact(v):
            flat.append(scalars.simplify(v))
        else:
            return None
    return (tag,) + tuple(flat)


def _div(num, den, what: str):
    if den == 0:
        raise ParameterDegeneracy(f"vanishing denominator in {what}")
    if isinstance(num, int) and isinstance(den, int):
        return Fraction(num, den)
    return num / den


# -- sigma ----------------------------------------------------------------

def _sigma_prefactor(lam: Partition, q, t):
    return (-1) ** sum(lam) * t ** (2 * n_stat(lam)) * q ** (-n_stat(transpose(lam)))


def sigma(mu, nu, q, t):
    """Coefficient of P_nu/(t^N)_nu in I_mu/(t^N)_mu."""
    mu, nu = Partition(mu), Partition(nu)
    if not contains(mu, nu):
        return 0

    def compute():
        n = max(len(mu), 1)
        num = shifted_eval(nu, mu, q, t, n)
        den = shifted_eval(nu, nu, q, t, n)
        val = _div(_sigma_prefactor(mu, q, t), _sigma_prefactor(nu, q, t), "sigma prefactor")
        val = val * _div(num, den, "sigma")
        return val * _div(hook_product(nu, q, t), hook_product(mu, q, t), "sigma hooks")

    return _SIGMA.get(_exact_key("sigma", mu, nu, q, t), compute)


# -- binomial coefficient -------------------------------------------------

def binomial_qts(lam, mu, q, t, s, n: int | None = None):
    """[lam over mu]_{q,t,s}: ratio of BC interpolation values at X^_N(lam) and X^_N(mu)."""
    lam, mu = Partition(lam), Partition(mu)
    if not contains(lam, mu):
        return 0
    need = max(len(lam), 1)
    if n is None:
        n = need
    if n < need:
        raise ValueError(f"N={n} is below l(lam)={need}")

    def compute():
        s_shift = t ** (1 - n) * s
        f = bc_interpolation(mu, n, q, t, s_shift)
        num = f(grid_bc(lam, n, q, t, s_shift))
        den = f(grid_bc(mu, n, q, t, s_shift))
        return scalars.simplify(_div(num, den, "binomial coefficient"))

    return _BINOM.get(_exact_key("binom", lam, mu, q, t, s, n), compute)


def s_parameter(q, quad: Quadruple):
    """sqrt(gamma delta q / (alpha beta)), exact whenever possible."""
    rad = quad.gamma * quad.delta * q / (quad.alpha * quad.beta)
    if scalars.is_exact(rad):
        root = scalars.exact_sqrt(rad)
        if root is not None:
            return root
    r = scalars.to_mp(rad)
    if isinstance(r, mpmath.mpc) and r.imag == 0:
        r = r.real
    if not isinstance(r, mpmath.mpc) and r < 0:
        return mpmath.mpc(0, mpmath.sqrt(-r))
    return mpmath.sqrt(r)


def _real_if_exact_real(x):
    return scalars.simplify(x)


# -- rho and pi -----------------------------------------------------------

def rho(lam, mu, q, t, quad: Quadruple):
    """Coefficient of (t^N)_lam/(t^N)_mu * I_mu(gamma x)/gamma^{|mu|} in phi_lam."""
    lam, mu = Partition(lam), Partition(mu)
    if not contains(lam, mu):
        return 0
    a, b, g, d = quad.alpha, quad.beta, quad.gamma, quad.delta

    def compute():
        s = s_parameter(q, quad)
        val = g ** (sum(mu) - sum(lam)) * t ** (n_stat(lam) - n_stat(mu))
        val = val * binomial_qts(lam, mu, q, t, s)
        val = val * _div(qt_pochhammer(g * q / a, q, t, lam) * qt_pochhammer(g * q / b, q, t, lam),
                         qt_pochhammer(g * q / a, q, t, mu) * qt_pochhammer(g * q / b, q, t, mu),
                         "rho Pochhammer ratio")
        val = val * _div(hook_product(mu, q, t), hook_product(lam, q, t), "rho hooks")
        z = g * d / (a * b) * q
        val = val * _div(c_plus(mu, z, q, t), c_plus(lam, z, q, t), "rho C+ ratio")
        return _real_if_exact_real(val)

    return _RHO.get(_exact_key("rho", lam, mu, q, t, quad), compute)


def pi(lam, nu, q, t, quad: Quadruple):
    """Coefficient of (t^N)_lam/(t^N)_nu * P_nu in phi_lam, via rho and sigma."""
    lam, nu = Partition(lam), Partition(nu)
    if not contains(lam, nu):
        return 0

    def compute():
        total = 0
        for mu in subpartitions(lam):
            if contains(mu, nu):
                total = total + rho(lam, mu, q, t, quad) * sigma(mu, nu, q, t) * quad.gamma ** (sum(nu) - sum(mu))
        return _real_if_exact_real(total)

    return _PI.get(_exact_key("pi", lam, nu, q, t, quad), compute)


# -- the polynomials ------------------------------------------------------

def big_q_jacobi(lam, n: int, q, t, quad: Quadruple) -> SymmetricPolynomial:
    """phi_{lam|N}(x; q, t; alpha, beta, gamma t^{1-N}, delta t^{1-N}) from the Macdonald expansion."""
    lam = Partition(lam)
    if len(lam) > n:
        raise IndexError(f"{lam!r} has more than {n} parts")
    tn = t**n
    top = qt_pochhammer(tn, q, t, lam)
    out = SymmetricPolynomial(n)
    for nu in subpartitions(lam):
        if len(nu) > n:
            continue
        c = pi(lam, nu, q, t, quad)
        if c == 0:
            continue
        out = out + macdonald(nu, n, q, t).scale(c * top / qt_pochhammer(tn, q, t, nu))
    return out


def big_q_jacobi_via_interpolation(lam, n: int, q, t, quad: Quadruple) -> SymmetricPolynomial:
    """Same polynomial, assembled from interpolation polynomials and rho only."""
    lam = Partition(lam)
    if len(lam) > n:
        raise IndexError(f"{lam!r} has more than {n} parts")
    tn = t**n
    g = quad.gamma
    top = qt_pochhammer(tn, q, t, lam)
    out = SymmetricPolynomial(n)
    for mu in subpartitions(lam):
        if len(mu) > n:
            continue
        c = rho(lam, mu, q, t, quad)
        if c == 0:
            continue
        i_mu = interpolation(mu, n, q, t).rescale_variables(g)
        out = out + i_mu.scale(c * top / qt_pochhammer(tn, q, t, mu) / g ** sum(mu))
    return out


def extracted_pi(phi: SymmetricPolynomial, lam, q, t) -> dict[Partition, object]:
    """Coefficients of phi/(t^N)_lam in the basis P_nu/(t^N)_nu, by triangular solve."""
    lam = Partition(lam)
    n = phi.num_vars
    tn = t**n
    raw = expand_in_basis(phi, lambda nu: macdonald(nu, n, q, t))
    top = qt_pochhammer(tn, q, t, lam)
    return {nu: scalars.simplify(c * qt_pochhammer(tn, q, t, nu) / top) for nu, c in raw.items()}


def _close(a, b, tol: float) -> bool:
    if scalars.is_exact(a) and scalars.is_exact(b):
        return a == b
    return abs(scalars.to_mp(a) - scalars.to_mp(b)) <= tol


def stability_check(lam, n: int, q, t, quad: Quadruple, tol: float = 1e-10) -> bool:
    """pi from the closed formula equals the coefficients extracted at N and N+1.

    phi is assembled from interpolation polynomials (the rho route), so the
    comparison with pi (the rho * sigma route) is not circular: it exercises
    sigma, the Macdonald basis and the interpolation polynomials together.
    """
    lam = Partition(lam)
    for m in (n, n + 1):
        phi = big_q_jacobi_via_interpolation(lam, m, q, t, quad)
        got = extracted_pi(phi, lam, q, t)
        expect = {nu: pi(lam, nu, q, t, quad) for nu in subpartitions(lam) if len(nu) <= m}
        for nu in set(got) | set(expect):
            if not _close(got.get(nu, 0), expect.get(nu, 0), tol):
                return False
    return True


def pi_symmetry_defect(max_size: int, q, t, quad: Quadruple) -> float:
    """Largest |pi - pi'| over |lam| <= max_size, pi' taken at alpha<->beta and at gamma<->delta."""
    worst = 0.0
    for lam in partitions_up_to(max_size):
        for nu in subpartitions(lam):
            base = pi(lam, nu, q, t, quad)
            for other in (quad.swap_ab(), quad.swap_cd()):
                d = base - pi(lam, nu, q, t, other)
                if not (scalars.is_exact(d) and d == 0):
                    worst = max(worst, float(abs(scalars.to_mp(d))))
    return worst


# -- coefficient tables ---------------------------------------------------

@dataclass
class CoefficientTable:
    q: object
    t: object
    quad: Quadruple
    entries: dict

    @classmethod
    def build(cls, max_size: int, q, t, quad: Quadruple, max_length: int | None = None) -> "CoefficientTable":
        entries = {}
        for lam in partitions_up_to(max_size, max_length):
            for nu in subpartitions(lam):
                entries[(lam, nu)] = pi(lam, nu, q, t, quad)
        return cls(q, t, quad, entries)

    def __getitem__(self, key):
        lam, nu = Partition(key[0]), Partition(key[1])
        return self.entries.get((lam, nu), 0)

    def rows(self) -> Iterable[dict]:
        for (lam, nu), v in self.entries.items():
            yield {"lambda": list(lam), "nu": list(nu), "pi": scalars.to_json(v)}

    def to_json(self) -> str:
        return json.dumps({"q": scalars.to_json(self.q), "t": scalars.to_json(self.t),
                           "quad": self.quad.to_dict(), "rows": list(self.rows())})
