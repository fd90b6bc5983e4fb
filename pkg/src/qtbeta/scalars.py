"""Three-tier number tower: Fraction, GaussianRational, mpmath floats.

Exact values stay exact through ``+ - * /`` and integer powers.  Anything
touching an ``mpf``/``mpc`` is promoted to mpmath at the current working
precision.
"""

from __future__ import annotations

import math
import numbers
import os
import re
from fractions import Fraction

import mpmath
from mpmath import mpc, mpf

DEFAULT_BITS = int(os.environ.get("QT_PRECISION_BITS", "128"))
# float-mode arithmetic outside explicit workprec blocks runs at this precision
mpmath.mp.prec = DEFAULT_BITS

_MP = (mpf, mpc)


class GaussianRational:
    """Exact complex number a + b*i with rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- coercion -------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def _mpmath_(self, prec, rounding):
        return mpc(mpf(self.re.numerator) / self.re.denominator,
                   mpf(self.im.numerator) / self.im.denominator)._mpc_

    def to_mp(self):
        return mpc(mpf(self.re.numerator) / self.re.denominator,
                   mpf(self.im.numerator) / self.im.denominator)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.to_mp() + other if isinstance(other, _MP + (float, complex)) else NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.to_mp() - other if isinstance(other, _MP + (float, complex)) else NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return other - self.to_mp() if isinstance(other, _MP + (float, complex)) else NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.to_mp() * other if isinstance(other, _MP + (float, complex)) else NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.to_mp() / other if isinstance(other, _MP + (float, complex)) else NotImplemented
        d = o.norm2()
        if d == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        num = self * o.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / self.to_mp() if isinstance(other, _MP + (float, complex)) else NotImplemented
        return o / self

    def __pow__(self, n):
        if not isinstance(n, numbers.Integral):
            return self.to_mp() ** n
        if n < 0:
            return GaussianRational(1) / (self ** (-n))
        result, base = GaussianRational(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, _MP + (float, complex)):
                return self.to_mp() == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __abs__(self):
        return mpmath.sqrt(mpf(self.norm2().numerator) / self.norm2().denominator)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = GaussianRational(0, 1)


def is_exact(x) -> bool:
    return isinstance(x, (numbers.Integral, Fraction, GaussianRational))


def to_mp(x):
    """Promote any scalar to mpmath."""
    if isinstance(x, GaussianRational):
        return x.to_mp()
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, complex):
        return mpc(x)
    if isinstance(x, _MP):
        return x
    return mpf(x)


def conj(x):
    if isinstance(x, (GaussianRational, mpc, complex)):
        return x.conjugate()
    return x


def real(x):
    if isinstance(x, GaussianRational):
        return x.re
    if isinstance(x, (mpc, complex)):
        return x.real
    return x


def imag(x):
    if isinstance(x, GaussianRational):
        return x.im
    if isinstance(x, (mpc, complex)):
        return x.imag
    return 0


def simplify(x):
    """Drop a vanishing imaginary part of an exact value."""
    if isinstance(x, GaussianRational) and x.im == 0:
        return x.re
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    return x


def is_zero(x) -> bool:
    return x == 0


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def exact_sqrt(x):
    """Exact square root when one exists in the exact tiers, else ``None``.

    A negative rational gives a purely imaginary GaussianRational.  The root
    with nonnegative real part (nonnegative imaginary part on ties) is chosen.
    """
    if isinstance(x, numbers.Integral):
        x = Fraction(x)
    if isinstance(x, Fraction):
        if x >= 0:
            return _rational_sqrt(x)
        r = _rational_sqrt(-x)
        return None if r is None else GaussianRational(0, r)
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return exact_sqrt(x.re)
        modulus = _rational_sqrt(x.norm2())
        if modulus is None:
            return None
        a = _rational_sqrt((x.re + modulus) / 2)
        if a is None or a == 0:
            return None
        return GaussianRational(a, x.im / (2 * a))
    return None


def sqrt(x):
    r = exact_sqrt(x)
    if r is not None:
        return r
    return mpmath.sqrt(to_mp(x))


_NUMBER = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*$")


def parse_scalar(text):
    """Parse CLI text: ``"1/2"`` and integers are exact, decimals become mpf.

    Complex literals use Python syntax (``"0.5+1j"``); a Gaussian rational
    may be written ``"1/2+1/3i"`` style only through JSON (see ``from_json``).
    """
    if isinstance(text, (numbers.Number, GaussianRational, mpf, mpc)):
        return Fraction(text) if isinstance(text, int) else text
    s = str(text).strip()
    m = _NUMBER.match(s)
    if m:
        return Fraction(int(m.group(1)), int(m.group(2)))
    if re.fullmatch(r"[+-]?\d+", s):
        return Fraction(int(s))
    if s.endswith(("j", "i")) and any(c in s for c in "+-") or s in ("i", "j", "-i", "-j"):
        s = s.replace("i", "j")
        if s in ("j", "-j"):
            s = s.replace("j", "1j")
        return mpc(complex(s))
    return mpf(s)


def to_json(x) -> dict:
    """Serialize a scalar as ``{"rat": ...}``, ``{"gauss": ...}`` or ``{"float": ...}``."""
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, numbers.Integral):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return {"rat": [x.numerator, x.denominator]}
    if isinstance(x, GaussianRational):
        return {"gauss": [[x.re.numerator, x.re.denominator], [x.im.numerator, x.im.denominator]]}
    v = to_mp(x)
    prec = mpmath.mp.prec
    re_, im_ = (v.real, v.imag) if isinstance(v, mpc) else (v, mpf(0))
    digits = max(17, int(prec * 0.30103) + 2)
    return {"float": [mpmath.nstr(re_, digits), mpmath.nstr(im_, digits)], "bits": prec}


def from_json(obj):
    if isinstance(obj, (int, float, str)):
        return parse_scalar(obj)
    if "rat" in obj:
        p, q = obj["rat"]
        return Fraction(p, q)
    if "gauss" in obj:
        (a, b), (c, d) = obj["gauss"]
        return GaussianRational(Fraction(a, b), Fraction(c, d))
    if "float" in obj:
        bits = int(obj.get("bits", DEFAULT_BITS))
        with mpmath.workprec(bits):
            re_, im_ = (mpf(v) for v in obj["float"])
            return mpc(re_, im_) if im_ != 0 else re_
    raise ValueError(f"not a scalar: {obj!r}")
