"""N-particle hypergeometric ensembles on the two-sided q-lattice.

A configuration stores, for each side, nondecreasing integer exponents
m_1 <= m_2 <= ...; particle i on side +/- sits at zeta_+/- q^{m_i} t^{i-1}.
This makes the gap rule x_{i+1} in x_i t q^{Z>=0} structural.

Two evaluation routes are provided.  Single configurations go through mpmath
(``unnormalized_weight``); whole windows are enumerated in numpy float64 log
space, where every infinite product along a lattice is obtained from one
anchor value and a cumulative sum of logarithms.  Tests cross-check them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Iterator, Sequence

import mpmath
import numpy as np

from . import scalars
from .bigqjacobi import Quadruple, big_q_jacobi
from .partitions import Partition, partitions_up_to
from .qspecial import DEFAULT_TOL, DomainError, Tolerance, psi_tau, qpochhammer_inf, z1_closed_form


class TruncationError(RuntimeError):
    """The requested tail budget could not be met inside the window limit."""


# -- domain types ---------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    q: object
    zeta_plus: object = 1
    zeta_minus: object = -1
    n_min: int = -20
    n_max: int = 40

    def __post_init__(self):
        if not (0 < float(scalars.to_mp(self.q)) < 1):
            raise DomainError("q must lie in (0, 1)")
        if not (scalars.to_mp(self.zeta_plus) > 0 > scalars.to_mp(self.zeta_minus)):
            raise DomainError("need zeta_+ > 0 > zeta_-")
        if self.n_min > self.n_max:
            raise ValueError("empty window")

    def points(self, side: int) -> list:
        zeta = self.zeta_plus if side > 0 else self.zeta_minus
        return [zeta * self.q**n for n in range(self.n_min, self.n_max + 1)]


@dataclass(frozen=True)
class Configuration:
    """Exponents of the particles on each half-line, each list nondecreasing."""

    plus: tuple[int, ...] = ()
    minus: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "plus", tuple(int(v) for v in self.plus))
        object.__setattr__(self, "minus", tuple(int(v) for v in self.minus))
        for seq in (self.plus, self.minus):
            if any(a > b for a, b in zip(seq, seq[1:])):
                raise DomainError(f"exponents must be nondecreasing: {seq}")

    def __len__(self) -> int:
        return len(self.plus) + len(self.minus)

    def positions(self, q, t, zeta_plus, zeta_minus) -> tuple[list, list]:
        """(X^+, X^-) with X^+ decreasing toward 0 and X^- increasing toward 0."""
        xp = [zeta_plus * q**m * t**i for i, m in enumerate(self.plus)]
        xm = [zeta_minus * q**m * t**i for i, m in enumerate(self.minus)]
        return xp, xm

    def to_dict(self) -> dict:
        return {"plus": list(self.plus), "minus": list(self.minus)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "Configuration":
        return cls(tuple(obj.get("plus", ())), tuple(obj.get("minus", ())))

    @classmethod
    def from_json(cls, text: str) -> "Configuration":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class MeasureSpec:
    """Parameters of M_N = M_N(.; q, t; alpha, beta, gamma t^{1-N}, delta t^{1-N})."""

    q: object
    t: object
    quad: Quadruple
    n: int
    zeta_plus: object = 1
    zeta_minus: object = -1
    tol: Tolerance = DEFAULT_TOL
    window: tuple[int, int] | None = None
    tail_budget: float = 1e-10

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("N must be >= 1")
        qf, tf = float(scalars.to_mp(self.q)), float(scalars.to_mp(self.t))
        if not (0 < qf < 1 and 0 < tf < 1):
            raise DomainError("q and t must lie in (0, 1)")
        if self.quad.series == "principal":
            ab = abs(complex(scalars.to_mp(self.quad.alpha * self.quad.beta)))
            cd = abs(complex(scalars.to_mp(self.quad.gamma * self.quad.delta)))
            # after the t^{1-N} substitution: |ab| < |cd| t^{2-2N} q^{2 tau (N-1) + 1} = |cd| q
            if not ab < cd * qf:
                raise DomainError("principal series needs alpha*beta < gamma*delta*q")

    @property
    def tau(self) -> float:
        return math.log(float(scalars.to_mp(self.t))) / math.log(float(scalars.to_mp(self.q)))

    @property
    def abcd(self) -> tuple:
        shift = self.t ** (1 - self.n)
        return (self.quad.alpha, self.quad.beta, self.quad.gamma * shift, self.quad.delta * shift)

    def with_n(self, n: int) -> "MeasureSpec":
        return MeasureSpec(self.q, self.t, self.quad, n, self.zeta_plus, self.zeta_minus,
                           self.tol, self.window, self.tail_budget)

    def with_window(self, window: tuple[int, int]) -> "MeasureSpec":
        return MeasureSpec(self.q, self.t, self.quad, self.n, self.zeta_plus, self.zeta_minus,
                           self.tol, window, self.tail_budget)


# -- single-point (mpmath) route -----------------------------------------

def _mp_tau(q, t):
    return mpmath.log(scalars.to_mp(t)) / mpmath.log(scalars.to_mp(q))


def _pair_factor(u, q, t, tol: Tolerance):
    """(q t^{-1} u; q)_oo / (t u; q)_oo."""
    num = qpochhammer_inf(q / t * u, q, tol).value
    den = qpochhammer_inf(t * u, q, tol).value
    if den == 0:
        raise DomainError("vanishing interaction denominator")
    return num / den


def v_qt(X: Configuration, q, t, zeta_plus=1, zeta_minus=-1, tol: Tolerance = DEFAULT_TOL):
    """The (q, t) interaction V_{q,t}(X); positive on admissible configurations."""
    with mpmath.workprec(tol.bits):
        qm, tm = scalars.to_mp(q), scalars.to_mp(t)
        tau = _mp_tau(q, t)
        xp, xm = X.positions(qm, tm, scalars.to_mp(zeta_plus), scalars.to_mp(zeta_minus))
        pts = sorted(xm + xp)
        out = mpmath.mpf(1)
        for a in range(len(pts)):
            for b in range(a):
                out *= pts[a] - pts[b]
        for x in xp:
            for y in pts:
                if y < x:
                    out *= x ** (2 * tau - 1) * _pair_factor(y / x, qm, tm, tol)
        for x in xm:
            for y in xm:
                if y < x:
                    out *= abs(y) ** (2 * tau - 1) * _pair_factor(x / y, qm, tm, tol)
        if out <= 0:
            raise DomainError("V_{q,t} must be positive; configuration violates the gap rule")
        return out


def v_qt_integer_tau(points: Sequence, q, tau: int):
    """|prod_{i != j} prod_{r < tau} (x_i - x_j q^r)| for integer tau."""
    if int(tau) != tau or tau < 1:
        raise ValueError("tau must be a positive integer")
    out = 1
    for i, x in enumerate(points):
        for j, y in enumerate(points):
            if i != j:
                for r in range(int(tau)):
                    out = out * (x - y * q**r)
    return abs(scalars.to_mp(out))


def weight_w(x, q, a, b, c, d, tol: Tolerance = DEFAULT_TOL):
    """(1 - q)|x| (ax, bx; q)_oo / (cx, dx; q)_oo, returned as a real mpf."""
    with mpmath.workprec(tol.bits):
        xm = scalars.to_mp(x)
        num = qpochhammer_inf(a * x, q, tol).value * qpochhammer_inf(b * x, q, tol).value
        den = qpochhammer_inf(c * x, q, tol).value * qpochhammer_inf(d * x, q, tol).value
        if den == 0:
            raise DomainError("weight denominator vanishes")
        val = (1 - scalars.to_mp(q)) * abs(xm) * num / den
        return mpmath.re(val) if isinstance(val, mpmath.mpc) else val


def weight_w_complex(x, q, a, b, c, d, tol: Tolerance = DEFAULT_TOL):
    """Same as ``weight_w`` without discarding the imaginary part."""
    with mpmath.workprec(tol.bits):
        num = qpochhammer_inf(a * x, q, tol).value * qpochhammer_inf(b * x, q, tol).value
        den = qpochhammer_inf(c * x, q, tol).value * qpochhammer_inf(d * x, q, tol).value
        return (1 - scalars.to_mp(q)) * abs(scalars.to_mp(x)) * num / den


def c_constant(n: int, k: int, q, t, zeta_plus=1, zeta_minus=-1, tol: Tolerance = DEFAULT_TOL):
    """C_N(k; zeta_+, zeta_-) = prod_{i<j<=N, i<=k} psi_tau(zeta_- / zeta_+ t^{N-i-j+1})."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= N")
    with mpmath.workprec(tol.bits):
        tau = _mp_tau(q, t)
        r = scalars.to_mp(zeta_minus) / scalars.to_mp(zeta_plus)
        tm = scalars.to_mp(t)
        out = mpmath.mpf(1)
        for i in range(1, k + 1):
            for j in range(i + 1, n + 1):
                out *= psi_tau(r * tm ** (n - i - j + 1), q, tau, tol)
        return out


def unnormalized_weight(X: Configuration, spec: MeasureSpec):
    """C_N(|X^+|) V_{q,t}(X) prod_x W(x; q; alpha, beta, gamma t^{1-N}, delta t^{1-N})."""
    if len(X) != spec.n:
        raise ValueError(f"configuration has {len(X)} particles, expected {spec.n}")
    tol = spec.tol
    with mpmath.workprec(tol.bits):
        a, b, c, d = spec.abcd
        qm, tm = scalars.to_mp(spec.q), scalars.to_mp(spec.t)
        xp, xm = X.positions(qm, tm, scalars.to_mp(spec.zeta_plus), scalars.to_mp(spec.zeta_minus))
        w = mpmath.mpf(1)
        for x in xp + xm:
            w *= weight_w(x, qm, a, b, c, d, tol)
        if w == 0:
            return w
        return (c_constant(spec.n, len(X.plus), spec.q, spec.t, spec.zeta_plus, spec.zeta_minus, tol)
                * v_qt(X, spec.q, spec.t, spec.zeta_plus, spec.zeta_minus, tol) * w)


# -- bulk (numpy) route ---------------------------------------------------

def _log_poch_table(u0: complex, q: float, k_lo: int, k_hi: int) -> np.ndarray:
    """log (u0 q^k; q)_oo for k = k_lo..k_hi (complex logs, real part is log|.|)."""
    ks = np.arange(k_lo, k_hi + 1)
    factors = 1 - u0 * np.power(q, ks.astype(float))
    with np.errstate(divide="ignore"):
        logs = np.log(factors.astype(complex))
    with mpmath.workprec(64):
        anchor = qpochhammer_inf(mpmath.mpc(u0) * mpmath.mpf(q) ** (k_hi + 1), mpmath.mpf(q),
                                 Tolerance(tail_bound=1e-18)).value
    base = complex(mpmath.log(anchor)) if anchor != 0 else complex(-np.inf)
    return base + np.cumsum(logs[::-1])[::-1]


def _lattice_exponent(v: complex, q: float) -> int | None:
    """k with v = q^k, when v is (numerically) a positive power of q."""
    if abs(v.imag) > 1e-12 * abs(v) or v.real <= 0:
        return None
    k = round(math.log(v.real) / math.log(q))
    return k if abs(v.real / q**k - 1) < 1e-9 else None


@dataclass
class _Tables:
    spec: MeasureSpec
    lo: dict
    hi: int
    logw: dict = field(default_factory=dict)      # (side, i) -> array over m
    same: dict = field(default_factory=dict)      # delta -> array over d
    cross: dict = field(default_factory=dict)     # delta -> array over e (offset)
    cross_off: int = 0
    log_c: list = field(default_factory=list)
    tau: float = 1.0


def _support_floor(spec: MeasureSpec) -> dict:
    """Smallest admissible exponent per side (degenerate series kill points)."""
    q = float(scalars.to_mp(spec.q))
    a, b = (complex(scalars.to_mp(v)) for v in (spec.quad.alpha, spec.quad.beta))
    zp, zm = complex(scalars.to_mp(spec.zeta_plus)), complex(scalars.to_mp(spec.zeta_minus))
    out = {}
    for side, par, zeta in ((1, a, zp), (-1, b, zm)):
        k = _lattice_exponent(par * zeta, q) if spec.quad.series == "degenerate" else None
        out[side] = None if k is None else 1 - k
    return out


def default_window(spec: MeasureSpec, reach: int | None = None) -> tuple[dict, int]:
    """Exponent window from the one-particle weight profile.

    The profile is log W(x) plus the far-field growth 2 tau (N - 1) log|x| of
    the interaction.  The window keeps every exponent whose profile lies
    within log(1 / (budget (1 - q))) of the maximum; the (1 - q) accounts for
    the geometric sum over the discarded tail.
    """
    q = float(scalars.to_mp(spec.q))
    floor = _support_floor(spec)
    if spec.window is not None:
        lo_w, hi = spec.window
        lo = {s: (lo_w if floor[s] is None else max(lo_w, floor[s])) for s in (1, -1)}
        return lo, hi
    drop = math.log(1 / (spec.tail_budget * (1 - q)))
    if reach is None:
        reach = int(math.ceil(drop / -math.log(q))) + 8
    a, b, c, d = (complex(scalars.to_mp(v)) for v in spec.abcd)
    zeta = {1: float(scalars.to_mp(spec.zeta_plus)), -1: float(scalars.to_mp(spec.zeta_minus))}
    tau = spec.tau
    lo, his = {}, []
    for s in (1, -1):
        start = floor[s] if floor[s] is not None else -reach
        ms = np.arange(start, reach + 1)
        logx = math.log(abs(zeta[s])) + ms * math.log(q)
        prof = logx + (_log_poch_table(a * zeta[s], q, start, reach) + _log_poch_table(b * zeta[s], q, start, reach)
                       - _log_poch_table(c * zeta[s], q, start, reach) - _log_poch_table(d * zeta[s], q, start, reach)).real
        prof = prof + 2 * tau * (spec.n - 1) * np.maximum(logx, 0.0)
        keep = np.nonzero(prof >= prof[np.isfinite(prof)].max() - drop)[0]
        lo[s] = int(ms[keep[0]]) if floor[s] is None else floor[s]
        his.append(int(ms[keep[-1]]))
    return lo, max(his) + 2


def _build_tables(spec: MeasureSpec, lo: dict, hi: int) -> _Tables:
    q = float(scalars.to_mp(spec.q))
    t = float(scalars.to_mp(spec.t))
    tau = spec.tau
    n = spec.n
    a, b, c, d = (complex(scalars.to_mp(v)) for v in spec.abcd)
    zeta = {1: float(scalars.to_mp(spec.zeta_plus)), -1: float(scalars.to_mp(spec.zeta_minus))}
    tb = _Tables(spec, lo, hi)
    for s in (1, -1):
        ms = np.arange(lo[s], hi + 1)
        for i in range(n):
            base = zeta[s] * t**i
            lw = (math.log(1 - q) + np.log(abs(base)) + ms * math.log(q)).astype(complex)
            lw = lw + _log_poch_table(a * base, q, lo[s], hi) + _log_poch_table(b * base, q, lo[s], hi)
            lw = lw - _log_poch_table(c * base, q, lo[s], hi) - _log_poch_table(d * base, q, lo[s], hi)
            tb.logw[s, i] = lw.real
    span = hi - min(lo.values())
    for delta in range(1, n):
        u0 = t**delta
        ds = np.arange(0, span + 1)
        val = np.log(1 - u0 * q ** ds.astype(float))
        val = val + (_log_poch_table(q / t * u0, q, 0, span) - _log_poch_table(t * u0, q, 0, span)).real
        tb.same[delta] = val
    r = zeta[-1] / zeta[1]
    tb.cross_off = span
    for delta in range(-(n - 1), n):
        u0 = r * t**delta
        es = np.arange(-span, span + 1)
        val = np.log(1 - u0 * np.power(q, es.astype(float)))
        val = val + (_log_poch_table(q / t * u0, q, -span, span) - _log_poch_table(t * u0, q, -span, span)).real
        tb.cross[delta] = val
    tb.log_c = [float(mpmath.log(c_constant(n, k, spec.q, spec.t, spec.zeta_plus, spec.zeta_minus, spec.tol)))
                for k in range(n + 1)]
    tb.tau = tau
    return tb


def _side_logs(tb: _Tables, s: int, combos: np.ndarray) -> np.ndarray:
    """Single-particle and same-side pair contributions for each combo row."""
    q = float(scalars.to_mp(tb.spec.q))
    t = float(scalars.to_mp(tb.spec.t))
    tau = tb.tau
    zeta = abs(float(scalars.to_mp(tb.spec.zeta_plus if s > 0 else tb.spec.zeta_minus)))
    k = combos.shape[1]
    out = np.zeros(combos.shape[0])
    for i in range(k):
        out += tb.logw[s, i][combos[:, i] - tb.lo[s]]
    for i in range(k):
        logx = math.log(zeta) + combos[:, i] * math.log(q) + i * math.log(t)
        for j in range(i + 1, k):
            dd = combos[:, j] - combos[:, i]
            out += 2 * tau * logx + tb.same[j - i][dd]
    return out


def _cross_logs(tb: _Tables, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    q = float(scalars.to_mp(tb.spec.q))
    t = float(scalars.to_mp(tb.spec.t))
    tau = tb.tau
    zp = float(scalars.to_mp(tb.spec.zeta_plus))
    out = np.zeros((P.shape[0], Q.shape[0]))
    for i in range(P.shape[1]):
        logx = (math.log(zp) + P[:, i] * math.log(q) + i * math.log(t))[:, None]
        for j in range(Q.shape[1]):
            e = Q[None, :, j] - P[:, i, None]
            out += 2 * tau * logx + tb.cross[j - i][e + tb.cross_off]
    return out


def _combos(lo: int, hi: int, k: int) -> np.ndarray:
    """Nondecreasing exponent tuples of length k in [lo, hi], one per row."""
    if k == 0:
        return np.zeros((1, 0), dtype=int)
    if hi < lo:
        return np.zeros((0, k), dtype=int)
    if k == 1:
        return np.arange(lo, hi + 1)[:, None]
    if k == 2:
        i, j = np.triu_indices(hi - lo + 1)
        return np.stack([i + lo, j + lo], axis=1)
    rows = list(combinations_with_replacement(range(lo, hi + 1), k))
    return np.array(rows, dtype=int).reshape(len(rows), k)


def iter_blocks(spec: MeasureSpec, lo: dict, hi: int, block: int = 2_000_000):
    """Yield (k, plus_block, minus, logw_block) covering every configuration in the window.

    Blocks are produced in a fixed order, so reductions over them are
    reproducible.
    """
    tb = _build_tables(spec, lo, hi)
    for k in range(spec.n + 1):
        P = _combos(lo[1], hi, k)
        Q = _combos(lo[-1], hi, spec.n - k)
        if P.shape[0] == 0 or Q.shape[0] == 0:
            continue
        side_p = _side_logs(tb, 1, P)
        side_q = _side_logs(tb, -1, Q)
        rows = max(1, block // Q.shape[0])
        for start in range(0, P.shape[0], rows):
            Pb = P[start:start + rows]
            lw = side_p[start:start + rows, None] + side_q[None, :] + _cross_logs(tb, Pb, Q) + tb.log_c[k]
            yield k, Pb, Q, lw


def _logsumexp(values: Iterator[np.ndarray]) -> float:
    top, acc = -np.inf, 0.0
    for v in values:
        v = v[np.isfinite(v)]
        if not v.size:
            continue
        m = float(v.max())
        if m > top:
            acc = acc * math.exp(top - m) if np.isfinite(top) else 0.0
            top = m
        acc += float(np.exp(v - top).sum())
    return top + math.log(acc) if acc > 0 else -np.inf


def log_partition_streaming(spec: MeasureSpec, lo: dict | None = None, hi: int | None = None,
                            block: int = 2_000_000) -> float:
    """log Z_N over the window without materializing all weights."""
    if lo is None or hi is None:
        lo, hi = default_window(spec)
    return _logsumexp(lw.ravel() for _, _, _, lw in iter_blocks(spec, lo, hi, block))


@dataclass
class Stratum:
    k: int
    plus: np.ndarray
    minus: np.ndarray
    logw: np.ndarray  # shape (len(plus), len(minus))

    def configurations(self) -> Iterator[Configuration]:
        for a in range(self.plus.shape[0]):
            for b in range(self.minus.shape[0]):
                yield Configuration(tuple(self.plus[a]), tuple(self.minus[b]))


@dataclass
class Enumeration:
    spec: MeasureSpec
    lo: dict
    hi: int
    strata: list
    log_z: float

    def probabilities(self) -> list[np.ndarray]:
        return [np.exp(s.logw - self.log_z) for s in self.strata]

    def flat(self) -> tuple[list[Configuration], np.ndarray]:
        configs, probs = [], []
        for s, p in zip(self.strata, self.probabilities()):
            configs.extend(s.configurations())
            probs.append(p.ravel())
        return configs, np.concatenate(probs) if probs else np.zeros(0)

    def positions(self, stratum: Stratum) -> np.ndarray:
        """Float coordinates, shape (len(plus) * len(minus), N)."""
        spec = self.spec
        q = float(scalars.to_mp(spec.q))
        t = float(scalars.to_mp(spec.t))
        zp = float(scalars.to_mp(spec.zeta_plus))
        zm = float(scalars.to_mp(spec.zeta_minus))
        P, Q = stratum.plus, stratum.minus
        xp = zp * q ** P.astype(float) * t ** np.arange(P.shape[1])
        xm = zm * q ** Q.astype(float) * t ** np.arange(Q.shape[1])
        mp_, mq_ = P.shape[0], Q.shape[0]
        left = np.repeat(xp, mq_, axis=0)
        right = np.tile(xm, (mp_, 1))
        return np.concatenate([left, right], axis=1)

    def edge_masses(self) -> dict:
        """Mass touching the near-zero edge (exponent hi) and the far edge (exponent lo)."""
        near = far = 0.0
        near_prev = far_prev = 0.0
        for s, p in zip(self.strata, self.probabilities()):
            P, Q = s.plus, s.minus
            pmax = P.max(axis=1) if P.shape[1] else np.full(P.shape[0], -10**9)
            qmax = Q.max(axis=1) if Q.shape[1] else np.full(Q.shape[0], -10**9)
            top = np.maximum(pmax[:, None], qmax[None, :])
            near += p[top == self.hi].sum()
            near_prev += p[top == self.hi - 1].sum()
            pmin = P[:, 0] if P.shape[1] else np.full(P.shape[0], 10**9)
            qmin = Q[:, 0] if Q.shape[1] else np.full(Q.shape[0], 10**9)
            on_far = (pmin[:, None] == self.lo[1]) | (qmin[None, :] == self.lo[-1])
            on_far_next = (pmin[:, None] == self.lo[1] + 1) | (qmin[None, :] == self.lo[-1] + 1)
            far += p[on_far].sum()
            far_prev += p[on_far_next & ~on_far].sum()
        return {"near": near, "near_prev": near_prev, "far": far, "far_prev": far_prev}


def enumerate_measure(spec: MeasureSpec, lo: dict | None = None, hi: int | None = None) -> Enumeration:
    """All configurations inside the exponent window, with log weights."""
    if lo is None or hi is None:
        lo, hi = default_window(spec)
    strata = []
    for k, P, Q, lw in iter_blocks(spec, lo, hi, block=10**12):
        strata.append(Stratum(k, P, Q, lw))
    finite = [s.logw[np.isfinite(s.logw)] for s in strata]
    top = max((f.max() for f in finite if f.size), default=0.0)
    total = sum(np.exp(f - top).sum() for f in finite)
    return Enumeration(spec, lo, hi, strata, top + math.log(total))


@dataclass
class PartitionResult:
    value: float
    log_value: float
    tail: float
    window: tuple
    enumeration: Enumeration


def _tail_estimate(en: Enumeration, principal: bool) -> float:
    """Relative tail bound: edge mass times r / (1 - r) with r the observed edge ratio."""
    e = en.edge_masses()
    tail = 0.0
    for edge, prev in (("near", "near_prev"), ("far", "far_prev")):
        if edge == "far" and not principal:
            continue
        m, mp_ = e[edge], e[prev]
        if m == 0:
            continue
        r = m / mp_ if mp_ > 0 else 1.0
        if r >= 1:
            return float("inf")
        tail += m * r / (1 - r)
    return tail


def partition_function(spec: MeasureSpec, max_widen: int = 6) -> PartitionResult:
    """Z_N by stratified enumeration; widens the window until the tail estimate fits the budget."""
    lo, hi = default_window(spec)
    principal = spec.quad.series != "degenerate"
    q = float(scalars.to_mp(spec.q))
    step = max(2, int(math.ceil(math.log(10) / -math.log(q))))
    for _ in range(max_widen + 1):
        en = enumerate_measure(spec, lo, hi)
        tail = _tail_estimate(en, principal)
        if tail <= spec.tail_budget:
            return PartitionResult(math.exp(en.log_z), en.log_z, tail, (dict(lo), hi), en)
        if spec.window is not None:
            break
        hi += step
        if principal:
            lo = {s: v - step for s, v in lo.items()}
    raise TruncationError(f"tail estimate {tail:.3g} exceeds budget {spec.tail_budget:.3g}")


def measure_weight(X: Configuration, spec: MeasureSpec, z: PartitionResult | None = None):
    if z is None:
        z = partition_function(spec)
    return unnormalized_weight(X, spec) / mpmath.e ** z.log_value


# -- one-particle normalization ---------------------------------------------

def z1_mp_sum(spec: MeasureSpec, rel_tol: float = 1e-16, patience: int = 8):
    """Sum of W over the two-sided lattice in mpmath, independent of the float tables.

    Each half-line is summed outward until ``patience`` consecutive terms fall
    below ``rel_tol`` times the running total.
    """
    if spec.n != 1:
        raise ValueError("the one-particle sum needs N = 1")
    tol = spec.tol
    floor = _support_floor(spec)
    total = mpmath.mpf(0)
    with mpmath.workprec(tol.bits):
        q = scalars.to_mp(spec.q)
        a, b, c, d = spec.abcd
        for side, zeta in ((1, spec.zeta_plus), (-1, spec.zeta_minus)):
            z = scalars.to_mp(zeta)
            start = floor[side] if floor[side] is not None else 0
            directions = (1,) if floor[side] is not None else (1, -1)
            for step in directions:
                m = start if step == 1 else start - 1
                quiet = 0
                while quiet < patience:
                    term = weight_w(z * q**m, q, a, b, c, d, tol)
                    total += term
                    quiet = quiet + 1 if abs(term) <= rel_tol * abs(total) else 0
                    m += step
    return total


@dataclass
class Z1Report:
    closed: float
    summed_mp: float
    summed_bulk: float
    tail: float

    @property
    def error(self) -> float:
        return max(abs(self.closed - self.summed_mp), abs(self.closed - self.summed_bulk)) / abs(self.closed)

    def to_dict(self) -> dict:
        return {"closed": self.closed, "summed_mp": self.summed_mp, "summed_bulk": self.summed_bulk,
                "tail": self.tail, "rel_error": self.error}


def z1_check(spec: MeasureSpec) -> Z1Report:
    """Closed form of Z_1 against the mpmath lattice sum and the bulk enumeration."""
    spec = spec.with_n(1)
    closed = z1_closed_form(spec.q, *spec.abcd, spec.zeta_plus, spec.zeta_minus, spec.tol)
    if abs(mpmath.im(closed)) > spec.tol.match_tol * abs(closed):
        raise ArithmeticError("closed-form Z_1 is not real")
    z = partition_function(spec)
    return Z1Report(float(mpmath.re(closed)), float(z1_mp_sum(spec)), float(z.value), float(z.tail))


# -- orthogonality --------------------------------------------------------

@dataclass
class OrthogonalityReport:
    n: int
    labels: list
    gram: np.ndarray
    max_offdiag: float
    min_diag: float
    tail: float

    def ok(self, tol: float) -> bool:
        return self.max_offdiag < tol and self.min_diag > 0

    def to_dict(self) -> dict:
        return {"N": self.n, "labels": [list(l) for l in self.labels],
                "max_normalized_offdiag": self.max_offdiag, "min_diag": self.min_diag,
                "tail": self.tail, "gram": self.gram.tolist()}


def verify_orthogonality(spec: MeasureSpec, degree_cap: int) -> OrthogonalityReport:
    """Normalized Gram matrix of phi_{lam|N}, |lam| <= degree_cap, under M_N."""
    if spec.quad.series != "degenerate":
        raise ValueError("orthogonality is checked on the degenerate series")
    z = partition_function(spec)
    en = z.enumeration
    labels = [lam for lam in partitions_up_to(degree_cap, spec.n)]
    polys = [big_q_jacobi(lam, spec.n, spec.q, spec.t, spec.quad) for lam in labels]
    k = len(labels)
    gram = np.zeros((k, k))
    for s, p in zip(en.strata, en.probabilities()):
        pts = en.positions(s)
        w = p.ravel()
        vals = np.array([poly.evaluate_many(pts) for poly in polys])
        if np.max(np.abs(vals.imag)) > 1e-8 * max(1.0, np.max(np.abs(vals.real))):
            raise ArithmeticError("big q-Jacobi values are not real")
        v = vals.real
        gram += (v * w) @ v.T
    d = np.sqrt(np.abs(np.diag(gram)))
    norm = gram / np.outer(d, d)
    off = np.abs(norm - np.diag(np.diag(norm)))
    return OrthogonalityReport(spec.n, labels, gram, float(off.max()) if k > 1 else 0.0,
                               float(np.diag(gram).min()), z.tail)


# -- sampling -------------------------------------------------------------

def sample(spec: MeasureSpec, seed: int, count: int) -> list[Configuration]:
    """Exact inverse-CDF sampling from the truncated, renormalized weights."""
    z = partition_function(spec)
    configs, probs = z.enumeration.flat()
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    rng = np.random.default_rng(seed)
    idx = np.searchsorted(cdf, rng.random(count), side="right")
    return [configs[i] for i in np.minimum(idx, len(configs) - 1)]


# -- large-N probe --------------------------------------------------------

def largest_particle_law(en: Enumeration) -> dict:
    """Law of x^+_1 as a map exponent -> mass; key None when X^+ is empty."""
    law: dict = {}
    for s, p in zip(en.strata, en.probabilities()):
        if s.k == 0:
            law[None] = law.get(None, 0.0) + float(p.sum())
            continue
        row = p.sum(axis=1)
        for m, v in zip(s.plus[:, 0], row):
            law[int(m)] = law.get(int(m), 0.0) + float(v)
    return law


def outside_law(en: Enumeration, eps: float) -> dict:
    """Law of the set of particles outside (-eps, eps), keyed by their exponent tuples."""
    law: dict = {}
    q = float(scalars.to_mp(en.spec.q))
    t = float(scalars.to_mp(en.spec.t))
    zp = float(scalars.to_mp(en.spec.zeta_plus))
    zm = abs(float(scalars.to_mp(en.spec.zeta_minus)))
    for s, p in zip(en.strata, en.probabilities()):
        for a in range(s.plus.shape[0]):
            kp = tuple(int(m) for i, m in enumerate(s.plus[a]) if zp * q**m * t**i >= eps)
            for b in range(s.minus.shape[0]):
                km = tuple(int(m) for i, m in enumerate(s.minus[b]) if zm * q**m * t**i >= eps)
                key = (kp, km)
                law[key] = law.get(key, 0.0) + float(p[a, b])
    return law


def total_variation(p: dict, r: dict) -> float:
    keys = set(p) | set(r)
    return 0.5 * sum(abs(p.get(k, 0.0) - r.get(k, 0.0)) for k in keys)


@dataclass
class ProbeReport:
    ns: list
    tv: list
    boundary_mass: list

    def to_dict(self) -> dict:
        return {"N": self.ns[1:], "tv_distance": self.tv, "boundary_mass": self.boundary_mass}


def convergence_probe(specs: Sequence[MeasureSpec], statistic: str = "largest", eps: float = 0.1) -> ProbeReport:
    """TV distances between consecutive-N laws of a statistic."""
    laws, ns, boundary = [], [], []
    for spec in specs:
        lo, hi = default_window(spec)
        en = enumerate_measure(spec, lo, hi)
        if statistic == "largest":
            laws.append(largest_particle_law(en))
        elif statistic == "outside":
            laws.append(outside_law(en, eps))
        else:
            raise ValueError(f"unknown statistic {statistic!r}")
        boundary.append(float(en.edge_masses()["near"]))
        ns.append(spec.n)
    tv = [total_variation(laws[i], laws[i + 1]) for i in range(len(laws) - 1)]
    return ProbeReport(ns, tv, boundary)
