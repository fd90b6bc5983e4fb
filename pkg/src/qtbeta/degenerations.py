"""Discrete and continuous beta ensembles reached from the (q,t) measures as q -> 1.

Two Gamma routes are kept side by side: ``scipy.special.loggamma`` in double
precision for bulk arrays and ``mpmath.loggamma`` at working precision for
single points.  ``gamma_routes_agree`` checks one against the other.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import mpmath
import numpy as np
from scipy import special

from .bigqjacobi import Quadruple
from .ensembles import (Configuration, MeasureSpec, default_window, iter_blocks, log_partition_streaming,
                        unnormalized_weight, _logsumexp)
from .scalars import to_mp
from .qspecial import DEFAULT_TOL, DomainError, Tolerance, qpochhammer_inf


class ParameterError(ValueError):
    pass


class WindowError(RuntimeError):
    def __init__(self, message: str, tail: float):
        super().__init__(message)
        self.tail = tail


def _check_signature(nu) -> tuple[int, ...]:
    nu = tuple(int(v) for v in nu)
    if any(nu[i] < nu[i + 1] for i in range(len(nu) - 1)):
        raise ValueError(f"signature {nu} is not weakly decreasing")
    return nu


@dataclass(frozen=True)
class ZwParams:
    tau: float
    z: complex
    zp: complex
    w: complex
    wp: complex

    def __post_init__(self):
        if not self.tau > 0:
            raise DomainError("tau must be positive")

    @classmethod
    def principal(cls, tau, z: complex, w: complex) -> "ZwParams":
        p = cls(tau, complex(z), complex(z).conjugate(), complex(w), complex(w).conjugate())
        p.validate()
        return p

    def validate(self):
        if abs(self.z - self.zp.conjugate()) > 1e-14 or abs(self.z.imag) == 0:
            raise DomainError("need z = conj(z') outside the real line")
        if abs(self.w - self.wp.conjugate()) > 1e-14:
            raise DomainError("need w = conj(w')")
        if not (self.z + self.w).real > -0.5:
            raise DomainError("need Re(z + w) > -1/2")

    def swapped(self) -> "ZwParams":
        return ZwParams(self.tau, self.zp, self.z, self.wp, self.w)

    def to_dict(self) -> dict:
        c = lambda x: [x.real, x.imag]
        return {"tau": float(self.tau), "z": c(self.z), "zp": c(self.zp), "w": c(self.w), "wp": c(self.wp)}

    @classmethod
    def from_dict(cls, obj: dict) -> "ZwParams":
        c = lambda v: complex(*v) if isinstance(v, (list, tuple)) else complex(v)
        return cls(float(obj["tau"]), c(obj["z"]), c(obj["zp"]), c(obj["w"]), c(obj["wp"]))


@dataclass(frozen=True)
class SParams:
    s: complex
    tau: float

    def __post_init__(self):
        if not complex(self.s).real > 0.5:
            raise DomainError("need Re(s) > 1/2")
        if not self.tau > 0:
            raise DomainError("tau must be positive")


# -- Gamma routes --------------------------------------------------------

def gamma_routes_agree(points: Sequence[complex], tol: float = 1e-12) -> float:
    """Max relative difference of Gamma between the double and mpmath routes."""
    worst = 0.0
    for z in points:
        a = complex(np.exp(special.loggamma(complex(z))))
        b = complex(mpmath.gamma(mpmath.mpc(z)))
        worst = max(worst, abs(a - b) / abs(b))
    return worst


def _lg(x):
    """Real log Gamma of a positive real array; poles are parameter errors."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) and np.any(np.isclose(x[x <= 0], np.round(x[x <= 0]))):
        raise ParameterError("Gamma pole in a positive-argument factor")
    return special.gammaln(x)


# -- discrete beta ensembles --------------------------------------------

def _interaction_log(n: np.ndarray, tau: float) -> np.ndarray:
    """Sum over i<j of log Gamma(d+1)Gamma(d+tau)/(Gamma(d)Gamma(d+1-tau)), d = n_i - n_j."""
    out = np.zeros(n.shape[0])
    N = n.shape[1]
    for i in range(N):
        for j in range(i + 1, N):
            d = n[:, i] - n[:, j]
            out += special.gammaln(d + 1) + special.gammaln(d + tau) - special.gammaln(d) - special.gammaln(d + 1 - tau)
    return out


def discrete_log_weights(nus: np.ndarray, p: ZwParams) -> np.ndarray:
    """Log of the unnormalized discrete weight for each row of ``nus`` (double route)."""
    nus = np.atleast_2d(np.asarray(nus, dtype=float))
    N = nus.shape[1]
    n = nus + p.tau * np.arange(N - 1, -1, -1)
    lw = _interaction_log(n, p.tau)
    shift = (1 - N) * p.tau
    single = (special.loggamma(-p.z + shift + n) + special.loggamma(-p.zp + shift + n)
              - special.loggamma(p.w + 1 + n) - special.loggamma(p.wp + 1 + n))
    return lw + single.sum(axis=1).real


def discrete_beta_weight(nu, p: ZwParams, N: int | None = None):
    """Unnormalized weight of the signature ``nu`` (mpmath route)."""
    nu = _check_signature(nu)
    N = len(nu) if N is None else N
    if len(nu) != N:
        raise ValueError("signature length differs from N")
    tau = mpmath.mpf(p.tau)
    n = [nu[i] + (N - 1 - i) * tau for i in range(N)]
    out = mpmath.mpf(1)
    for i in range(N):
        for j in range(i + 1, N):
            d = n[i] - n[j]
            out *= mpmath.gamma(d + 1) * mpmath.gamma(d + tau) * mpmath.rgamma(d) * mpmath.rgamma(d + 1 - tau)
    z, zp, w, wp = (mpmath.mpc(v) for v in (p.z, p.zp, p.w, p.wp))
    shift = (1 - N) * tau
    for ni in n:
        out *= (mpmath.gamma(-z + shift + ni) * mpmath.gamma(-zp + shift + ni)
                * mpmath.rgamma(w + 1 + ni) * mpmath.rgamma(wp + 1 + ni))
    if abs(out.imag) > DEFAULT_TOL.match_tol * abs(out):
        raise ParameterError("weight is not real; parameters are off the principal series")
    return out.real


def interlaces(nu, mu) -> bool:
    return len(mu) == len(nu) - 1 and all(nu[i] >= mu[i] >= nu[i + 1] for i in range(len(mu)))


def _link_factors(nu, mu, tau):
    """(numerator Gamma args, denominator Gamma args, polynomial factors) of the link."""
    N = len(nu)
    num, den, poly = [], [], []
    for i in range(N):
        for j in range(i + 1, N):
            if i < N - 1:
                num.append(mu[i] - nu[j] + (j - i) * tau)
                den.append(mu[i] - nu[j] + (j - i - 1) * tau + 1)
            num.append(nu[i] - nu[j] + (j - i - 1) * tau + 1)
            den.append(nu[i] - nu[j] + (j - i + 1) * tau)
    for i in range(N - 1):
        for j in range(i, N - 1):
            num.append(nu[i] - mu[j] + (j - i + 1) * tau)
            # the printed denominator drops the tau on (j - i); row sums need it
            den.append(nu[i] - mu[j] + (j - i) * tau + 1)
    for i in range(N - 1):
        for j in range(i + 1, N - 1):
            poly.append(mu[i] - mu[j] + (j - i) * tau)
    num.append(N * tau)
    den.extend([tau] * N)
    return num, den, poly


def _is_integer(x) -> bool:
    return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)


def discrete_link(nu, mu, tau):
    """Interlacing link L(nu, mu); exact Fraction when tau is an integer, mpmath otherwise."""
    nu, mu = _check_signature(nu), _check_signature(mu)
    if len(mu) != len(nu) - 1:
        raise ValueError("mu must have one part fewer than nu")
    if not interlaces(nu, mu):
        return Fraction(0) if _is_integer(tau) else mpmath.mpf(0)
    num, den, poly = _link_factors(nu, mu, tau)
    if _is_integer(tau):
        out = Fraction(1)
        for a in num:
            out *= math.factorial(int(a) - 1)
        for a in den:
            out /= math.factorial(int(a) - 1)
        for a in poly:
            out *= int(a)
        return out
    t = mpmath.mpf(tau) if not isinstance(tau, Fraction) else mpmath.mpf(tau.numerator) / tau.denominator
    num, den, poly = _link_factors(nu, mu, t)
    if any(a <= 0 for a in num + den):
        raise ParameterError("Gamma pole on the interlacing support")
    out = mpmath.mpf(1)
    for a in num:
        out *= mpmath.gamma(a)
    for a in den:
        out *= mpmath.rgamma(a)
    for a in poly:
        out *= a
    return out


def discrete_link_tau1(nu, mu) -> Fraction:
    """The simplified tau = 1 link."""
    nu, mu = _check_signature(nu), _check_signature(mu)
    if not interlaces(nu, mu):
        return Fraction(0)
    N = len(nu)
    out = Fraction(math.factorial(N - 1))
    for i in range(N - 1):
        for j in range(i + 1, N - 1):
            out *= mu[i] - mu[j] + j - i
    for i in range(N):
        for j in range(i + 1, N):
            out /= nu[i] - nu[j] + j - i
    return out


def interlacing_box(nu) -> list[tuple[int, ...]]:
    ranges = [range(nu[i + 1], nu[i] + 1) for i in range(len(nu) - 1)]
    return [m for m in product(*ranges)]


def link_row_sum(nu, tau):
    return sum((discrete_link(nu, mu, tau) for mu in interlacing_box(nu)), start=0)


def _log_link_rows(nus: np.ndarray, mu: Sequence[int], tau: float) -> np.ndarray:
    """log L(nu, mu) for every row of ``nus`` (all rows must interlace mu)."""
    nus = np.asarray(nus, dtype=float)
    N = nus.shape[1]
    cols = [nus[:, i] for i in range(N)]
    num, den, poly = _link_factors(cols, list(mu), tau)
    out = np.full(nus.shape[0], 0.0)
    for a in num:
        out += _lg(np.broadcast_to(a, out.shape))
    for a in den:
        out -= _lg(np.broadcast_to(a, out.shape))
    for a in poly:
        out += math.log(a)
    return out


def tilted_link_rows(nus: np.ndarray, mu) -> np.ndarray:
    """Negative control: a product-form stochastic matrix on the same interlacing support.

    L'(nu, mu) is proportional to prod_i (mu_i - nu_{i+1} + 1).  The uniform
    matrix would not do, since it is the true link at N = 2, tau = 1.
    """
    nus = np.asarray(nus, dtype=float)
    d = nus[:, :-1] - nus[:, 1:]
    k = np.asarray(mu, dtype=float)[None, :] - nus[:, 1:] + 1
    return (np.log(k) - np.log((d + 1) * (d + 2) / 2)).sum(axis=1)


def signatures(N: int, lo: int, hi: int) -> np.ndarray:
    """All weakly decreasing N-tuples with entries in [lo, hi]."""
    if N == 1:
        return np.arange(hi, lo - 1, -1)[:, None]
    from .ensembles import _combos

    return _combos(lo, hi, N)[:, ::-1].copy()


@dataclass
class DiscreteLaw:
    """The discrete ensemble normalized on the signatures with |nu_i| <= window."""

    params: ZwParams
    N: int
    window: int
    log_z: float
    boundary_mass: float
    table: np.ndarray  # log probabilities indexed by nu + window, -inf off the signature set

    def log_prob(self, nus) -> np.ndarray:
        idx = np.asarray(nus, dtype=int) + self.window
        return self.table[tuple(idx.T)]


def discrete_law(p: ZwParams, N: int, window: int) -> DiscreteLaw:
    nus = signatures(N, -window, window)
    lw = discrete_log_weights(nus, p)
    lz = _logsumexp([lw])
    edge = (np.abs(nus) == window).any(axis=1)
    table = np.full((2 * window + 1,) * N, -np.inf)
    table[tuple((nus + window).T)] = lw - lz
    return DiscreteLaw(p, N, window, lz, float(np.exp(lw[edge] - lz).sum()), table)


@dataclass
class CoherencyReport:
    N: int
    tau: float
    window: int
    inner: int
    residual: float
    tail: float
    control_residual: float | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _pushforward(law: DiscreteLaw, mu, window: int, control: bool) -> float:
    N = law.N
    ranges = [range(mu[0], window + 1)] + [range(mu[i], mu[i - 1] + 1) for i in range(1, N - 1)]
    ranges.append(range(-window, mu[N - 2] + 1))
    grids = np.meshgrid(*[np.array(r) for r in ranges], indexing="ij")
    nus = np.stack([g.ravel() for g in grids], axis=1)
    link = tilted_link_rows(nus, mu) if control else _log_link_rows(nus, mu, law.params.tau)
    return float(np.exp(law.log_prob(nus) + link).sum())


def verify_discrete_coherency(p: ZwParams, N: int, window: int = 40, inner: int | None = None,
                              control: bool = True, report_tol: float = 1e-6, threads: int = 1) -> CoherencyReport:
    """max over inner mu of |sum_nu P_N(nu) L(nu, mu) - P_{N-1}(mu)|.

    The tail is the mass P_N puts on the window boundary; if it exceeds a
    tenth of ``report_tol`` a WindowError carries it.
    """
    if N < 2:
        raise ValueError("coherency needs N >= 2")
    inner = window // 4 if inner is None else inner
    big, small = discrete_law(p, N, window), discrete_law(p, N - 1, window)
    tail = max(big.boundary_mass, small.boundary_mass)
    if tail > report_tol / 10:
        raise WindowError(f"window {window} leaves boundary mass {tail:.3g}", tail)
    mus = signatures(N - 1, -inner, inner)
    target = np.exp(small.log_prob(mus))
    def sweep(ctl: bool) -> float:
        # map keeps index order, so the reduction is the same for any thread count
        with ThreadPoolExecutor(max_workers=max(1, threads)) as ex:
            vals = list(ex.map(lambda mu: _pushforward(big, mu, window, ctl), mus))
        return float(np.abs(np.array(vals) - target).max())

    res = sweep(False)
    ctl = sweep(True) if control else None
    return CoherencyReport(N, float(p.tau), window, inner, float(res), tail, None if ctl is None else float(ctl))


# -- continuous s-measures -----------------------------------------------

def _check_decreasing(u):
    u = np.asarray(u, dtype=float)
    if np.any(np.diff(u) >= 0):
        raise ValueError("u must be strictly decreasing")
    return u


def _log_s_density(u: np.ndarray, s: complex, tau: float) -> np.ndarray:
    """log density for rows of u; the conjugate pair gives 2 Re(a log(1 + iu))."""
    N = u.shape[-1]
    a = complex(s) + (N - 1) * tau
    out = -2 * (a * np.log1p(1j * u)).real.sum(axis=-1)
    for k in range(N):
        for l in range(k + 1, N):
            out = out + 2 * tau * np.log(u[..., k] - u[..., l])
    return out


def s_measure_density(u, p: SParams) -> float:
    u = _check_decreasing(u)
    return float(np.exp(_log_s_density(u[None, :], p.s, p.tau))[0])


def s_measure_density_complex(u, p: SParams) -> complex:
    """Direct principal-branch evaluation, kept to test real-valuedness."""
    u = _check_decreasing(u)
    N = len(u)
    s = complex(p.s)
    out = complex(1)
    for x in u:
        out *= (1 + 1j * x) ** (-(s + (N - 1) * p.tau)) * (1 - 1j * x) ** (-(s.conjugate() + (N - 1) * p.tau))
    for k in range(N):
        for l in range(k + 1, N):
            out *= (u[k] - u[l]) ** (2 * p.tau)
    return out


def _tan_rule(n: int, c: float = 0.0, lo: float = -np.pi / 2, hi: float = np.pi / 2):
    """Nodes u and weights for integrals over u = tan(theta), theta in (lo, hi).

    In theta the one-coordinate s-density behaves like cos(theta)^c at
    +-pi/2, so those endpoints get Gauss-Jacobi exponent c and the returned weights already
    divide the Jacobi weight back out.
    """
    a = c if hi >= np.pi / 2 else 0.0
    b = c if lo <= -np.pi / 2 else 0.0
    x, w = special.roots_jacobi(n, a, b)
    half = (hi - lo) / 2
    th = lo + (x + 1) * half
    lw = np.log(w * half) - 2 * np.log(np.cos(th)) - a * np.log1p(-x) - b * np.log1p(x)
    return np.tan(th), np.exp(lw)


def _jacobi_exponent(p: SParams) -> float:
    # |u|^{-2 Re s} du = cos(theta)^{2 Re s - 2} d theta
    return 2 * (complex(p.s).real - 1)


def s_measure_z1(p: SParams, n: int = 200) -> float:
    u, w = _tan_rule(n, _jacobi_exponent(p))
    return float((np.exp(_log_s_density(u[:, None], p.s, p.tau)) * w).sum())


def s_measure_z2(p: SParams, n: int = 200) -> float:
    """Z_2 by a tensor rule on the full plane, halved by symmetry."""
    u, w = _tan_rule(n, _jacobi_exponent(p))
    U1, U2 = np.meshgrid(u, u, indexing="ij")
    W = np.outer(w, w)
    a = complex(p.s) + p.tau
    lg = -2 * ((a * np.log1p(1j * U1)).real + (a * np.log1p(1j * U2)).real)
    d = np.abs(U1 - U2)
    with np.errstate(divide="ignore"):
        f = np.exp(lg + 2 * p.tau * np.log(d))
    return float(0.5 * (f * W).sum())


def s_measure_cdf1(x, p: SParams, n: int = 200) -> np.ndarray:
    """CDF of the one-particle s-measure at the points x."""
    z = s_measure_z1(p, n)
    out = []
    for xv in np.atleast_1d(x):
        u, w = _tan_rule(n, _jacobi_exponent(p), hi=math.atan(xv))
        out.append(float((np.exp(_log_s_density(u[:, None], p.s, p.tau)) * w).sum()) / z)
    return np.array(out)


def dixon_anderson_kernel(u, v, tau) -> float:
    """Density of the interlacing kernel at v given u; 0 off the interlacing set."""
    u = _check_decreasing(u)
    v = np.asarray(v, dtype=float)
    N = len(u)
    if len(v) != N - 1:
        raise ValueError("v must have N - 1 coordinates")
    if not all(u[i] > v[i] > u[i + 1] for i in range(N - 1)):
        return 0.0
    lg = math.lgamma(N * tau) - N * math.lgamma(tau)
    for i in range(N):
        for j in range(i + 1, N):
            lg += (1 - 2 * tau) * math.log(u[i] - u[j])
    for i in range(N - 1):
        for j in range(i + 1, N - 1):
            lg += math.log(v[i] - v[j])
        for j in range(N):
            lg += (tau - 1) * math.log(abs(v[i] - u[j]))
    return math.exp(lg)


def dixon_anderson_integral(u, tau, n: int = 24) -> float:
    """Integral of the kernel over v, Gauss-Jacobi in every interlacing cell.

    In cell i the rule absorbs |v - u_i|^{tau-1} |v - u_{i+1}|^{tau-1}; the
    remaining factors are smooth on the closed cell.
    """
    u = _check_decreasing(u)
    N = len(u)
    x, w = special.roots_jacobi(n, tau - 1, tau - 1)
    mids = (u[:-1] + u[1:]) / 2
    halves = (u[:-1] - u[1:]) / 2
    grids = np.meshgrid(*[mids[i] + halves[i] * x for i in range(N - 1)], indexing="ij")
    V = np.stack([g.ravel() for g in grids], axis=1)
    W = np.ones(V.shape[0])
    for i, g in enumerate(np.meshgrid(*[w] * (N - 1), indexing="ij")):
        W *= g.ravel() * halves[i] ** (2 * tau - 1)
    lg = math.lgamma(N * tau) - N * math.lgamma(tau)
    for i in range(N):
        for j in range(i + 1, N):
            lg += (1 - 2 * tau) * math.log(u[i] - u[j])
    f = np.full(V.shape[0], math.exp(lg))
    for i in range(N - 1):
        for j in range(i + 1, N - 1):
            f *= V[:, i] - V[:, j]
        for j in range(N):
            if j not in (i, i + 1):
                f *= np.abs(V[:, i] - u[j]) ** (tau - 1)
    return float((f * W).sum())


def continuous_coherency_residual(p: SParams, v_grid: Sequence[float], n: int = 200) -> float:
    """max over v of |int P_2(u) L(u, v) du - P_1(v)| for N = 2 (tau = 1 kernel form general)."""
    tau = p.tau
    z1, z2 = s_measure_z1(p, n), s_measure_z2(p, n)
    worst = 0.0
    const = math.exp(math.lgamma(2 * tau) - 2 * math.lgamma(tau))
    for v in v_grid:
        # u1 in (v, inf), u2 in (-inf, v), each mapped through tan
        a = math.atan(v)
        c = _jacobi_exponent(p)
        u1, w1 = _tan_rule(n, c, lo=a)
        u2, w2 = _tan_rule(n, c, hi=a)
        U1, U2 = np.meshgrid(u1, u2, indexing="ij")
        uu = np.stack([U1.ravel(), U2.ravel()], axis=1)
        dens = np.exp(_log_s_density(uu, p.s, tau)) / z2
        ker = const * (uu[:, 0] - uu[:, 1]) ** (1 - 2 * tau) * (np.abs(v - uu[:, 0]) * np.abs(v - uu[:, 1])) ** (tau - 1)
        lhs = float((dens * ker * np.outer(w1, w2).ravel()).sum())
        rhs = math.exp(float(_log_s_density(np.array([[v]]), p.s, p.tau)[0])) / z1
        worst = max(worst, abs(lhs - rhs))
    return worst


# -- q -> 1 limits ---------------------------------------------------------

def scalar_limit(v, A, B, q_seq: Sequence[float]) -> dict:
    """(v q^A; q)_inf / (v q^B; q)_inf against (1 - v)^{B - A}."""
    v = to_mp(v)
    target = (1 - v) ** (B - A)
    vals, errs = [], []
    tol = Tolerance(tail_bound=1e-25)
    for q in q_seq:
        q = to_mp(q)
        r = qpochhammer_inf(v * q**A, q, tol).value / qpochhammer_inf(v * q**B, q, tol).value
        vals.append(float(r))
        errs.append(float(abs(r - target)))
    return {"q": list(map(float, q_seq)), "value": vals, "target": float(target), "abs_error": errs}


def _strictly_decreasing(xs) -> bool:
    return all(b < a for a, b in zip(xs, xs[1:]))


@dataclass
class DegenerationReport:
    q: list
    abs_error: list
    extra: dict = field(default_factory=dict)

    @property
    def decreasing(self) -> bool:
        return _strictly_decreasing(self.abs_error)

    def to_dict(self) -> dict:
        return {"q": self.q, "abs_error": self.abs_error, "decreasing": self.decreasing, **self.extra}


def zw_measure_spec(q: float, p: ZwParams, N: int, tail_budget: float = 1e-8) -> MeasureSpec:
    """The q-measure whose limit is the discrete ensemble with parameters p."""
    q = mpmath.mpf(q)
    lq = mpmath.log(q)
    quad = Quadruple(mpmath.exp((p.w + 1) * lq), mpmath.exp((p.wp + 1) * lq),
                     mpmath.exp(-p.z * lq), mpmath.exp(-p.zp * lq), "principal")
    return MeasureSpec(q, q ** mpmath.mpf(p.tau), quad, N, tail_budget=tail_budget)


def check_degeneration_discrete(q_seq: Sequence[float], p: ZwParams, nu, N: int | None = None,
                                window: int = 60, eps: float = 0.1, tail_budget: float = 1e-8) -> DegenerationReport:
    nu = _check_signature(nu)
    N = len(nu) if N is None else N
    target = math.exp(float(discrete_law(p, N, window).log_prob(np.array([nu]))[0]))
    errs, conc, vals = [], [], []
    for q in q_seq:
        spec = zw_measure_spec(q, p, N, tail_budget)
        lo, hi = default_window(spec)
        # particle i (0-based) sits at q^{nu_{N-i}} t^i
        X = Configuration(tuple(nu[N - 1 - i] for i in range(N)), ())
        lw = float(mpmath.log(abs(unnormalized_weight(X, spec))))
        lz = log_partition_streaming(spec, lo, hi)
        val = math.exp(lw - lz)
        vals.append(val)
        errs.append(abs(val - target))
        conc.append(_mass_near_one(spec, lo, hi, eps, lz))
    return DegenerationReport([float(q) for q in q_seq], errs,
                              {"target": target, "value": vals, "mass_near_one": conc, "eps": eps})


def _mass_near_one(spec: MeasureSpec, lo, hi, eps: float, lz: float) -> float:
    q = float(spec.q)
    tau = spec.tau
    lq = math.log(q)
    logs = []
    for k, P, Q, lw in iter_blocks(spec, lo, hi):
        if Q.shape[1]:
            continue  # any particle left of zero is outside the interval
        logx = (P * lq + np.arange(k) * tau * lq)
        inside = (np.abs(np.exp(logx) - 1) < eps).all(axis=1)
        logs.append(lw[inside].ravel())
    return math.exp(_logsumexp(logs) - lz)


def s_measure_spec(q: float, p: SParams, N: int = 1, tail_budget: float = 1e-8) -> MeasureSpec:
    q = mpmath.mpf(q)
    s = mpmath.mpc(p.s)
    quad = Quadruple(-1j * q**s, 1j * q ** mpmath.conj(s), mpmath.mpc(0, -1), mpmath.mpc(0, 1), "principal")
    return MeasureSpec(q, q ** mpmath.mpf(p.tau), quad, N, tail_budget=tail_budget)


def check_degeneration_continuous(q_seq: Sequence[float], p: SParams, N: int = 1,
                                  grid: Sequence[float] | None = None, tail_budget: float = 1e-8) -> DegenerationReport:
    """Sup over the grid of |CDF_q(x) - CDF(x)| for the largest particle, N = 1."""
    if N != 1:
        raise NotImplementedError("the continuous CDF comparison is implemented for N = 1")
    grid = np.linspace(-5, 5, 101) if grid is None else np.asarray(grid, dtype=float)
    ref = s_measure_cdf1(grid, p)
    errs = []
    for q in q_seq:
        spec = s_measure_spec(q, p, N, tail_budget)
        lo, hi = default_window(spec)
        xs, lws = [], []
        lq = math.log(float(q))
        for k, P, Q, lw in iter_blocks(spec, lo, hi):
            x = np.exp(P[:, 0] * lq)[:, None] if k == 1 else -np.exp(Q[:, 0] * lq)[None, :]
            xs.append(np.broadcast_to(x, lw.shape).ravel())
            lws.append(lw.ravel())
        x, lw = np.concatenate(xs), np.concatenate(lws)
        w = np.exp(lw - lw.max())
        order = np.argsort(x)
        cdf = np.cumsum(w[order]) / w.sum()
        idx = np.searchsorted(x[order], grid, side="right") - 1
        fq = np.where(idx >= 0, cdf[np.maximum(idx, 0)], 0.0)
        errs.append(float(np.abs(fq - ref).max()))
    return DegenerationReport([float(q) for q in q_seq], errs, {"grid_points": len(grid)})
