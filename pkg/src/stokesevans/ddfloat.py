"""Minimal double-double arithmetic for near-cancelling index assembly.

Error-free transforms (two-sum, two-prod via fused multiply-add when the
platform exposes one, Dekker splitting otherwise) carry roughly 31 decimal
digits through the handful of products and one quotient that form the bubble
index; the surrounding pipeline stays in binary64.
"""

from __future__ import annotations

import math

_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    return s, b - (s - a)


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    if hasattr(math, "fma"):
        return p, math.fma(a, b, -p)
    ca = _SPLIT * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLIT * b
    bhi = cb - (cb - b)
    blo = b - bhi
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


class DD:
    """Unevaluated sum hi + lo with |lo| <= 0.5 ulp(hi)."""

    __slots__ = ("hi", "lo")

    def __init__(self, hi: float, lo: float = 0.0):
        self.hi = hi
        self.lo = lo

    def __add__(self, other: "DD") -> "DD":
        s, e = _two_sum(self.hi, other.hi)
        e += self.lo + other.lo
        s, e = _quick_two_sum(s, e)
        return DD(s, e)

    def __sub__(self, other: "DD") -> "DD":
        return self + DD(-other.hi, -other.lo)

    def __mul__(self, other: "DD") -> "DD":
        p, e = _two_prod(self.hi, other.hi)
        e += self.hi * other.lo + self.lo * other.hi
        p, e = _quick_two_sum(p, e)
        return DD(p, e)

    def __truediv__(self, other: "DD") -> "DD":
        q1 = self.hi / other.hi
        r = self - other * DD(q1)
        q2 = r.hi / other.hi
        r = r - other * DD(q2)
        q3 = r.hi / other.hi
        s, e = _quick_two_sum(q1, q2)
        s, e = _quick_two_sum(s, e + q3)
        return DD(s, e)

    def __float__(self) -> float:
        return self.hi + self.lo


class DDComplex:
    __slots__ = ("re", "im")

    def __init__(self, re: DD, im: DD):
        self.re = re
        self.im = im

    @staticmethod
    def from_complex(z: complex) -> "DDComplex":
        return DDComplex(DD(z.real), DD(z.imag))

    def __add__(self, o: "DDComplex") -> "DDComplex":
        return DDComplex(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "DDComplex") -> "DDComplex":
        return DDComplex(self.re - o.re, self.im - o.im)

    def __mul__(self, o: "DDComplex") -> "DDComplex":
        return DDComplex(self.re * o.re - self.im * o.im,
                         self.re * o.im + self.im * o.re)

    def __truediv__(self, o: "DDComplex") -> "DDComplex":
        den = o.re * o.re + o.im * o.im
        re = (self.re * o.re + self.im * o.im) / den
        im = (self.im * o.re - self.re * o.im) / den
        return DDComplex(re, im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))
