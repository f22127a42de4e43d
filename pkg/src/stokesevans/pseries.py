"""Truncated trivariate power series for determinant expansions.

Coefficients are stored on integer exponent triples with a hard total-degree
truncation; multiplication drops everything beyond it.  This is enough to
expand the period-map determinant in its three small parameters and to
substitute root ansatz series back in.
"""

from __future__ import annotations

import math


class TSeries:
    """sum c[(i, j, k)] * v0^i v1^j v2^k, truncated at total degree <= order."""

    __slots__ = ("order", "c")

    def __init__(self, order: int, c: dict | None = None):
        self.order = order
        self.c = {}
        if c:
            for e, v in c.items():
                if sum(e) <= order and v != 0:
                    self.c[e] = self.c.get(e, 0.0) + v

    @staticmethod
    def const(order: int, v: complex) -> "TSeries":
        return TSeries(order, {(0, 0, 0): complex(v)})

    @staticmethod
    def var(order: int, which: int, coeff: complex = 1.0) -> "TSeries":
        e = [0, 0, 0]
        e[which] = 1
        return TSeries(order, {tuple(e): complex(coeff)})

    def __add__(self, other: "TSeries") -> "TSeries":
        out = dict(self.c)
        for e, v in other.c.items():
            out[e] = out.get(e, 0.0) + v
        return TSeries(self.order, out)

    def __sub__(self, other: "TSeries") -> "TSeries":
        out = dict(self.c)
        for e, v in other.c.items():
            out[e] = out.get(e, 0.0) - v
        return TSeries(self.order, out)

    def __mul__(self, other):
        if not isinstance(other, TSeries):
            return TSeries(self.order, {e: v * other for e, v in self.c.items()})
        out: dict = {}
        for e1, v1 in self.c.items():
            d1 = sum(e1)
            for e2, v2 in other.c.items():
                if d1 + sum(e2) > self.order:
                    continue
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, 0.0) + v1 * v2
        return TSeries(self.order, out)

    __rmul__ = __mul__

    def __neg__(self) -> "TSeries":
        return self * (-1.0)

    def coeff(self, i: int, j: int, k: int) -> complex:
        return self.c.get((i, j, k), 0.0 + 0.0j)

    def max_abs(self) -> float:
        return max((abs(v) for v in self.c.values()), default=0.0)

    def subs0(self, series: "TSeries") -> "TSeries":
        """Substitute variable 0 by a series in variables (1, 2)."""
        if any(e[0] != 0 for e in series.c):
            raise ValueError("substituted series must not contain variable 0")
        out = TSeries.const(self.order, 0.0)
        # group by power of variable 0
        by_pow: dict[int, TSeries] = {}
        for (i, j, k), v in self.c.items():
            by_pow.setdefault(i, TSeries(self.order))
            by_pow[i] = by_pow[i] + TSeries(self.order, {(0, j, k): v})
        pow_cache = {0: TSeries.const(self.order, 1.0)}
        mx = max(by_pow, default=0)
        for i in range(1, mx + 1):
            pow_cache[i] = pow_cache[i - 1] * series
        for i, s in by_pow.items():
            out = out + s * pow_cache[i]
        return out


def exp_series(order: int, which: int, rate: complex) -> TSeries:
    """exp(rate * v_which) truncated: sum rate^m v^m / m!."""
    c = {}
    e = [0, 0, 0]
    for m_ in range(order + 1):
        e2 = list(e)
        e2[which] = m_
        c[tuple(e2)] = rate**m_ / math.factorial(m_)
    return TSeries(order, c)


def det_series(M: list[list[TSeries]]) -> TSeries:
    """Cofactor-expansion determinant of a matrix of series (dim 2 or 4)."""
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = TSeries(M[0][0].order)
    for k in range(n):
        minor = [[M[r][c] for c in range(n) if c != k] for r in range(1, n)]
        term = M[0][k] * det_series(minor)
        total = total + term if k % 2 == 0 else total - term
    return total
