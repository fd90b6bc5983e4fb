"""q-Pochhammer symbols, theta functions and the products built from them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import mpmath
from mpmath import mpf

from .partitions import Partition, transpose
from .scalars import DEFAULT_BITS, is_exact, to_mp


class DomainError(ValueError):
    """Argument outside the domain where a q-function is defined."""


@dataclass(frozen=True)
class Tolerance:
    """Truncation target for infinite products plus a comparison tolerance."""

    tail_bound: float = 1e-30
    match_tol: float = 1e-10
    bits: int = DEFAULT_BITS

    def __post_init__(self):
        if not (self.tail_bound > 0 and self.match_tol > 0):
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


class Bounded(NamedTuple):
    """A truncated value together with a bound on |log(exact / value)|."""

    value: object
    error: float


def qpochhammer(u, q, n: int):
    """(u; q)_n, exact on exact inputs."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = 1
    power = 1
    for _ in range(n):
        out = out * (1 - u * power)
        power = power * q
    return out


def qpochhammer_inf(u, q, tol: Tolerance = DEFAULT_TOL) -> Bounded:
    """(u; q)_oo truncated by the analytic tail bound.

    The product stops at the first ``n`` with ``|u| |q|^n / (1 - |q|)`` below
    ``tol.tail_bound``; the returned error bounds the log of the omitted tail.
    """
    with mpmath.workprec(tol.bits):
        qa = abs(to_mp(q))
        if qa >= 1:
            raise DomainError("|q| must be < 1")
        if u == 0:
            return Bounded(mpf(1), 0.0)
        ua = abs(to_mp(u))
        exact = is_exact(u) and is_exact(q)
        out = mpf(1)
        uq = u
        n = 0
        while ua * qa**n / (1 - qa) >= tol.tail_bound:
            if exact and uq == 1:
                return Bounded(mpf(0), 0.0)
            out *= 1 - to_mp(uq)
            uq = uq * q
            n += 1
        tail = ua * qa**n
        err = float(tail / ((1 - qa) * (1 - tail))) if tail < 1 else float("inf")
        return Bounded(+out, err)


def qpochhammer_ratio_inf(u, v, q, tol: Tolerance = DEFAULT_TOL):
    """(u; q)_oo / (v; q)_oo."""
    num = qpochhammer_inf(u, q, tol)
    den = qpochhammer_inf(v, q, tol)
    if den.value == 0:
        raise DomainError("vanishing denominator")
    return num.value / den.value


def qt_pochhammer(u, q, t, nu: Partition):
    """(u; q, t)_nu = prod_i (u t^{1-i}; q)_{nu_i}."""
    out = 1
    shift = 1
    for part in nu:
        out = out * qpochhammer(u * shift, q, part)
        shift = shift / t
    return out


def theta(v, q, tol: Tolerance = DEFAULT_TOL):
    """theta_q(v) = (v; q)_oo (q/v; q)_oo."""
    if v == 0:
        raise DomainError("theta_q(0) is undefined")
    with mpmath.workprec(tol.bits):
        return qpochhammer_inf(v, q, tol).value * qpochhammer_inf(q / v, q, tol).value


def theta_prod(args, q, tol: Tolerance = DEFAULT_TOL):
    out = 1
    for v in args:
        out = out * theta(v, q, tol)
    return out


def psi_tau(u, q, tau, tol: Tolerance = DEFAULT_TOL):
    """Quasi-constant (-u)^{2 tau - 1} theta_q(t u) / theta_q(t / u), with t = q^tau.

    Only negative real ``u`` are allowed, so the power is taken through the
    real logarithm of ``-u``.
    """
    with mpmath.workprec(tol.bits):
        um = to_mp(u)
        if isinstance(um, mpmath.mpc):
            if um.imag != 0:
                raise DomainError("psi_tau needs real u")
            um = um.real
        if um >= 0:
            raise DomainError("psi_tau needs u < 0")
        qm, taum = to_mp(q), to_mp(tau)
        t = qm**taum
        den = theta(t / um, qm, tol)
        if den == 0:
            raise DomainError("theta_q(t/u) vanishes")
        val = mpmath.exp((2 * taum - 1) * mpmath.log(-um)) * theta(t * um, qm, tol) / den
        return mpmath.re(val) if isinstance(val, mpmath.mpc) else val


def c_minus(lam: Partition, z, q, t):
    """prod over boxes (1 - z q^{arm} t^{leg})."""
    conj = transpose(lam)
    out = 1
    for i, j in lam.boxes():
        out = out * (1 - z * q ** (lam.part(i) - j) * t ** (conj.part(j) - i))
    return out


def c_plus(lam: Partition, z, q, t):
    """prod over boxes (1 - z q^{lam_i + j - 1} t^{2 - lam'_j - i})."""
    conj = transpose(lam)
    out = 1
    for i, j in lam.boxes():
        out = out * (1 - z * q ** (lam.part(i) + j - 1) * t ** (2 - conj.part(j) - i))
    return out


def hook_product(lam: Partition, q, t):
    """prod over boxes (1 - q^{arm} t^{leg + 1}) = c_minus(lam, t)."""
    return c_minus(lam, t, q, t)


def z1_closed_form(q, a, b, c, d, zeta_plus, zeta_minus, tol: Tolerance = DEFAULT_TOL):
    """Closed-form total mass of the one-particle hypergeometric weight on the two-sided lattice."""
    with mpmath.workprec(tol.bits):
        q, a, b, c, d = (to_mp(x) for x in (q, a, b, c, d))
        zp, zm = to_mp(zeta_plus), to_mp(zeta_minus)
        den_theta = theta_prod([c * zm, d * zm, c * zp, d * zp], q, tol)
        if den_theta == 0:
            raise DomainError("parameter collides with the lattice")
        pochs = 1
        for u in (q, a / c, a / d, b / c, b / d):
            pochs *= qpochhammer_inf(u, q, tol).value
        lower = qpochhammer_inf(a * b / (c * d * q), q, tol).value
        if lower == 0:
            raise DomainError("(ab/(cdq); q)_oo vanishes")
        num_theta = theta(zm / zp, q, tol) * theta(c * d * zm * zp, q, tol)
        return (1 - q) * zp * pochs / lower * num_theta / den_theta
