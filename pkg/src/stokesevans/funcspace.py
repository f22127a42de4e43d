"""Exact closed algebra for products of x-harmonics and y-hyperbolics.

Every field appearing in the perturbation pipeline is a finite sum of terms

    coeff * x**q * exp(i*omega*x) * y**p * {1, cosh(a*y), sinh(a*y)},

where omega and a live on an integer frequency lattice spanned by the
generators (1, kappa, k2, k4, kA, kB); the two spare slots hold the
below-critical branch roots when those are in play.  Storing lattice
vectors instead of float frequencies makes the resonant/non-resonant
dichotomy exact: under an active
resonance constraint k2 - k4 = N*kappa the canonical form eliminates the k2
component, so "omega == 0" is decided by integer arithmetic, never by a
floating-point tolerance.

The class is closed under multiplication, differentiation in x and y, the
definite integral over y in [0, 1], and the running integral in x from 0.
A Gauss-Legendre quadrature oracle provides an independent numeric check of
the closed-form y-integrals and inner products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

Y_POWER_CAP = 6
X_POWER_CAP = 6

PRUNE_REL = 1e-14

KIND_CONST = 0
KIND_COSH = 1
KIND_SINH = 2

_ZERO = (0, 0, 0, 0, 0, 0)


class UnsupportedDegreeError(ValueError):
    """A product left the supported x/y polynomial degree range.

    The pipeline's formulas never exceed y-degree 2 per factor; hitting the
    cap signals an assembly bug upstream, not a representable function.
    """


class FrequencyVector(NamedTuple):
    """Integer lattice point n1*1 + nk*kappa + n2*k2 + n4*k4 + nA*kA + nB*kB."""

    n1: int
    nk: int
    n2: int
    n4: int
    nA: int
    nB: int


@dataclass(frozen=True)
class FreqBasis:
    """Numeric values of the lattice generators plus the resonance rule.

    When ``resonance_order`` is N, the constraint k2 = k4 + N*kappa is active
    and canonicalization substitutes the k2 component away, so lattice zero
    tests see through the resonance exactly.
    """

    kappa: float
    k2: float = 0.0
    k4: float = 0.0
    kA: float = 0.0
    kB: float = 0.0
    resonance_order: int | None = None

    def canon(self, v: tuple) -> tuple:
        if self.resonance_order is not None and v[2] != 0:
            n1, nk, n2, n4, na, nb = v
            return (n1, nk + self.resonance_order * n2, 0, n4 + n2, na, nb)
        return v

    def value(self, v: tuple) -> float:
        n1, nk, n2, n4, na, nb = self.canon(v)
        return (n1 * 1.0 + nk * self.kappa + n2 * self.k2 + n4 * self.k4
                + na * self.kA + nb * self.kB)

    def is_zero(self, v: tuple) -> bool:
        return self.canon(v) == _ZERO


def fv(n1: int = 0, nk: int = 0, n2: int = 0, n4: int = 0,
       na: int = 0, nb: int = 0) -> tuple:
    return (n1, nk, n2, n4, na, nb)


def _neg(v: tuple) -> tuple:
    return (-v[0], -v[1], -v[2], -v[3], -v[4], -v[5])


def _add(a: tuple, b: tuple) -> tuple:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3], a[4] + b[4], a[5] + b[5])


class Term(NamedTuple):
    """Read-only view of one canonical term (public introspection type)."""

    coeff: complex
    x_power: int
    x_freq: FrequencyVector
    y_power: int
    y_kind: int
    y_rate: FrequencyVector


# Term keys inside TermFunction are plain tuples for speed:
#   (x_power, x_freq, y_power, y_kind, y_rate)


class TermFunction:
    """Canonical finite term sum over a fixed frequency basis.

    Instances are immutable by convention: every operation returns a new
    TermFunction, so values are safe to share across sweep workers.
    """

    __slots__ = ("basis", "_t")

    def __init__(self, basis: FreqBasis, terms: dict | None = None, _canonical: bool = False):
        self.basis = basis
        if terms is None:
            self._t = {}
        elif _canonical:
            self._t = terms
        else:
            self._t = _canonicalize(basis, terms)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(basis: FreqBasis) -> "TermFunction":
        return TermFunction(basis, {}, _canonical=True)

    @staticmethod
    def const(basis: FreqBasis, c: complex) -> "TermFunction":
        return TermFunction(basis, {(0, _ZERO, 0, KIND_CONST, _ZERO): complex(c)})

    @staticmethod
    def monomial(
        basis: FreqBasis,
        coeff: complex,
        x_power: int = 0,
        x_freq: tuple = _ZERO,
        y_power: int = 0,
        y_kind: int = KIND_CONST,
        y_rate: tuple = _ZERO,
    ) -> "TermFunction":
        key = (x_power, tuple(x_freq), y_power, y_kind, tuple(y_rate))
        return TermFunction(basis, {key: complex(coeff)})

    # -- bookkeeping ----------------------------------------------------

    def terms(self) -> Iterator[Term]:
        for (q, xf, p, kind, yr), c in sorted(self._t.items()):
            yield Term(c, q, FrequencyVector(*xf), p, kind, FrequencyVector(*yr))

    def __len__(self) -> int:
        return len(self._t)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self._t.values()), default=0.0)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self._t.values())

    def has_x_dependence(self) -> bool:
        return any(q != 0 or not self.basis.is_zero(xf) for (q, xf, _, _, _) in self._t)

    def has_y_dependence(self) -> bool:
        return any(p != 0 or kind != KIND_CONST for (_, _, p, kind, _) in self._t)

    def const_value(self, tol_rel: float = 1e-11) -> complex:
        """Value of an (x,y)-independent function; raises if it is not one."""
        val = 0.0 + 0.0j
        scale = max(self.max_abs_coeff(), 1.0)
        for (q, xf, p, kind, yr), c in self._t.items():
            if q == 0 and p == 0 and kind == KIND_CONST and self.basis.is_zero(xf):
                val += c
            elif abs(c) > tol_rel * scale:
                raise ValueError("function is not constant")
        return val

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        bits = []
        for t in self.terms():
            bits.append(
                f"({t.coeff:.6g})*x^{t.x_power}*e(i{t.x_freq}x)*y^{t.y_power}"
                f"*[{('1', 'cosh', 'sinh')[t.y_kind]}{t.y_rate}]"
            )
        return "TermFunction[" + " + ".join(bits) + "]" if bits else "TermFunction[0]"

    # -- linear structure -------------------------------------------------

    def __add__(self, other: "TermFunction") -> "TermFunction":
        _check_basis(self, other)
        out = dict(self._t)
        for k, c in other._t.items():
            out[k] = out.get(k, 0.0) + c
        return TermFunction(self.basis, out)

    def __sub__(self, other: "TermFunction") -> "TermFunction":
        return self + (other * (-1.0))

    def __neg__(self) -> "TermFunction":
        return self * (-1.0)

    def __mul__(self, scalar: complex) -> "TermFunction":
        if isinstance(scalar, TermFunction):
            return multiply(self, scalar)
        s = complex(scalar)
        if s == 0:
            return TermFunction.zero(self.basis)
        return TermFunction(self.basis, {k: c * s for k, c in self._t.items()}, _canonical=True)

    __rmul__ = __mul__

    def conj(self) -> "TermFunction":
        out: dict = {}
        for (q, xf, p, kind, yr), c in self._t.items():
            key = (q, _neg(xf), p, kind, yr)
            out[key] = out.get(key, 0.0) + c.conjugate()
        return TermFunction(self.basis, out)

    # -- calculus -----------------------------------------------------------

    def diff_x(self) -> "TermFunction":
        out: dict = {}
        for (q, xf, p, kind, yr), c in self._t.items():
            om = self.basis.value(xf)
            if not self.basis.is_zero(xf):
                k1 = (q, xf, p, kind, yr)
                out[k1] = out.get(k1, 0.0) + 1j * om * c
            if q > 0:
                k2 = (q - 1, xf, p, kind, yr)
                out[k2] = out.get(k2, 0.0) + q * c
        return TermFunction(self.basis, out)

    def diff_y(self) -> "TermFunction":
        out: dict = {}
        for (q, xf, p, kind, yr), c in self._t.items():
            if p > 0:
                k1 = (q, xf, p - 1, kind, yr)
                out[k1] = out.get(k1, 0.0) + p * c
            if kind != KIND_CONST:
                a = self.basis.value(yr)
                flip = KIND_SINH if kind == KIND_COSH else KIND_COSH
                k2 = (q, xf, p, flip, yr)
                out[k2] = out.get(k2, 0.0) + a * c
        return TermFunction(self.basis, out)

    def mul_y(self) -> "TermFunction":
        out: dict = {}
        for (q, xf, p, kind, yr), c in self._t.items():
            if p + 1 > Y_POWER_CAP:
                raise UnsupportedDegreeError(f"y power {p + 1} exceeds cap {Y_POWER_CAP}")
            out[(q, xf, p + 1, kind, yr)] = c
        return TermFunction(self.basis, out, _canonical=True)

    def mul_x(self) -> "TermFunction":
        out: dict = {}
        for (q, xf, p, kind, yr), c in self._t.items():
            if q + 1 > X_POWER_CAP:
                raise UnsupportedDegreeError(f"x power {q + 1} exceeds cap {X_POWER_CAP}")
            out[(q + 1, xf, p, kind, yr)] = c
        return TermFunction(self.basis, out, _canonical=True)

    def shift_x_freq(self, dxf: tuple) -> "TermFunction":
        """Multiply by exp(i*omega(dxf)*x)."""
        out: dict = {}
        for (q, xf, p, kind, yr), c in self._t.items():
            key = (q, _add(xf, dxf), p, kind, yr)
            out[key] = out.get(key, 0.0) + c
        return TermFunction(self.basis, out)

    # -- evaluation -----------------------------------------------------------

    def eval(self, x: float, y: float) -> complex:
        val = 0.0 + 0.0j
        for (q, xf, p, kind, yr), c in self._t.items():
            om = self.basis.value(xf)
            a = self.basis.value(yr)
            v = c * (x**q if q else 1.0) * (np.exp(1j * om * x) if om != 0.0 else 1.0)
            v *= y**p if p else 1.0
            if kind == KIND_COSH:
                v *= math.cosh(a * y)
            elif kind == KIND_SINH:
                v *= math.sinh(a * y)
            val += v
        return val

    def eval_y_at(self, y0: float) -> "TermFunction":
        """Freeze y = y0; returns an x-only TermFunction."""
        out: dict = {}
        for (q, xf, p, kind, yr), c in self._t.items():
            a = self.basis.value(yr)
            v = c * (y0**p if p else 1.0)
            if kind == KIND_COSH:
                v *= math.cosh(a * y0)
            elif kind == KIND_SINH:
                v *= math.sinh(a * y0)
            key = (q, xf, 0, KIND_CONST, _ZERO)
            out[key] = out.get(key, 0.0) + v
        return TermFunction(self.basis, out)

    def eval_x_at(self, x0: float) -> "TermFunction":
        """Freeze x = x0; returns a y-only TermFunction."""
        out: dict = {}
        for (q, xf, p, kind, yr), c in self._t.items():
            om = self.basis.value(xf)
            v = c * (x0**q if q else 1.0) * (np.exp(1j * om * x0) if om != 0.0 else 1.0)
            key = (0, _ZERO, p, kind, yr)
            out[key] = out.get(key, 0.0) + v
        return TermFunction(self.basis, out)

    def encode(self) -> np.ndarray:
        """Pack terms for the batch evaluation kernels.

        Columns: coeff_re, coeff_im, x_power, omega, y_power, y_kind, rate.
        """
        rows = np.empty((len(self._t), 7))
        for i, ((q, xf, p, kind, yr), c) in enumerate(self._t.items()):
            rows[i] = (c.real, c.imag, q, self.basis.value(xf), p, kind, self.basis.value(yr))
        return rows


def _canonicalize(basis: FreqBasis, raw: dict) -> dict:
    out: dict = {}
    for (q, xf, p, kind, yr), c in raw.items():
        if c == 0:
            continue
        if p > Y_POWER_CAP:
            raise UnsupportedDegreeError(f"y power {p} exceeds cap {Y_POWER_CAP}")
        if q > X_POWER_CAP:
            raise UnsupportedDegreeError(f"x power {q} exceeds cap {X_POWER_CAP}")
        xf = basis.canon(tuple(xf))
        yr = basis.canon(tuple(yr))
        if yr == _ZERO:
            if kind == KIND_SINH:
                continue  # sinh(0) == 0
            kind = KIND_CONST
        elif kind == KIND_CONST:
            yr = _ZERO
        else:
            # cosh is even, sinh is odd: normalize the rate sign on the lattice
            first = next((v for v in yr if v != 0), 0)
            if first < 0:
                yr = _neg(yr)
                if kind == KIND_SINH:
                    c = -c
        key = (q, xf, p, kind, yr)
        out[key] = out.get(key, 0.0) + c
    if not out:
        return out
    cut = PRUNE_REL * max(abs(c) for c in out.values())
    return {k: c for k, c in out.items() if abs(c) > cut}


def _check_basis(f: TermFunction, g: TermFunction) -> None:
    if f.basis is not g.basis and f.basis != g.basis:
        raise ValueError("operands live on different frequency bases")


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

def multiply(f: TermFunction, g: TermFunction) -> TermFunction:
    """Pointwise product, re-expanded by product-to-sum identities."""
    _check_basis(f, g)
    out: dict = {}

    def acc(key, c):
        out[key] = out.get(key, 0.0) + c

    for (q1, xf1, p1, k1, r1), c1 in f._t.items():
        for (q2, xf2, p2, k2, r2), c2 in g._t.items():
            q = q1 + q2
            p = p1 + p2
            if p > Y_POWER_CAP:
                raise UnsupportedDegreeError(f"product y power {p} exceeds cap {Y_POWER_CAP}")
            if q > X_POWER_CAP:
                raise UnsupportedDegreeError(f"product x power {q} exceeds cap {X_POWER_CAP}")
            xf = _add(xf1, xf2)
            c = c1 * c2
            if k1 == KIND_CONST and k2 == KIND_CONST:
                acc((q, xf, p, KIND_CONST, _ZERO), c)
            elif k1 == KIND_CONST:
                acc((q, xf, p, k2, r2), c)
            elif k2 == KIND_CONST:
                acc((q, xf, p, k1, r1), c)
            else:
                rs = _add(r1, r2)
                rd = _add(r1, _neg(r2))
                h = 0.5 * c
                if k1 == KIND_COSH and k2 == KIND_COSH:
                    # cosh*cosh = (cosh(+) + cosh(-))/2
                    acc((q, xf, p, KIND_COSH, rs), h)
                    acc((q, xf, p, KIND_COSH, rd), h)
                elif k1 == KIND_SINH and k2 == KIND_SINH:
                    # sinh*sinh = (cosh(+) - cosh(-))/2
                    acc((q, xf, p, KIND_COSH, rs), h)
                    acc((q, xf, p, KIND_COSH, rd), -h)
                elif k1 == KIND_SINH:
                    # sinh(a)cosh(b) = (sinh(a+b) + sinh(a-b))/2
                    acc((q, xf, p, KIND_SINH, rs), h)
                    acc((q, xf, p, KIND_SINH, rd), h)
                else:
                    # cosh(a)sinh(b) = (sinh(a+b) - sinh(a-b))/2
                    acc((q, xf, p, KIND_SINH, rs), h)
                    acc((q, xf, p, KIND_SINH, rd), -h)
    return TermFunction(f.basis, out)


# ---------------------------------------------------------------------------
# y-integration over [0, 1]
# ---------------------------------------------------------------------------

def _int_y01_series(p: int, kind: int, a: float) -> float:
    # Taylor series of the entire functions a -> int_0^1 y^p cosh/sinh(ay) dy;
    # used for small |a| where the closed antiderivative cancels badly
    total = 0.0
    if kind == KIND_COSH:
        num = 1.0  # a^{2m} / (2m)!
        for m in range(0, 40):
            total += num / (p + 2 * m + 1)
            num *= a * a / ((2 * m + 1) * (2 * m + 2))
            if abs(num) < 1e-22:
                break
        return total
    num = a  # a^{2m+1} / (2m+1)!
    for m in range(0, 40):
        total += num / (p + 2 * m + 2)
        num *= a * a / ((2 * m + 2) * (2 * m + 3))
        if abs(num) < 1e-22:
            break
    return total


def _int_y01_closed(p: int, kind: int, a: float) -> float:
    # C(p) = int y^p cosh(ay); S(p) = int y^p sinh(ay), both over [0, 1]
    sa, ca = math.sinh(a), math.cosh(a)
    C = [0.0] * (p + 1)
    S = [0.0] * (p + 1)
    C[0] = sa / a
    S[0] = (ca - 1.0) / a
    for m in range(1, p + 1):
        C[m] = sa / a - (m / a) * S[m - 1]
        S[m] = ca / a - (m / a) * C[m - 1]
    return C[p] if kind == KIND_COSH else S[p]


def int_y01_profile(p: int, kind: int, a: float) -> float:
    """Exact value of the definite integral of y**p * h(a*y) over [0, 1]."""
    if kind == KIND_CONST:
        return 1.0 / (p + 1)
    if a < 0:  # parity
        return int_y01_profile(p, kind, -a) * (1.0 if kind == KIND_COSH else -1.0)
    if a < 1.0:
        return _int_y01_series(p, kind, a)
    return _int_y01_closed(p, kind, a)


def integrate_y(f: TermFunction) -> TermFunction:
    """Integrate over y in [0, 1]; returns an x-only TermFunction."""
    out: dict = {}
    for (q, xf, p, kind, yr), c in f._t.items():
        a = f.basis.value(yr)
        v = c * int_y01_profile(p, kind, a)
        key = (q, xf, 0, KIND_CONST, _ZERO)
        out[key] = out.get(key, 0.0) + v
    return TermFunction(f.basis, out)


def integrate_y01(f: TermFunction) -> complex:
    """Definite y-integral of an x-independent TermFunction."""
    if f.has_x_dependence():
        raise ValueError("integrate_y01 requires an x-independent function")
    return integrate_y(f).const_value()


# ---------------------------------------------------------------------------
# x-integration from 0
# ---------------------------------------------------------------------------

def integrate_x(f: TermFunction, upper: float | None = None):
    """Running integral from 0 in x.

    Terms whose frequency vector is exactly zero on the lattice produce the
    secular x*(y-part) branch; nonzero frequencies produce bounded
    (exp(i*omega*x) - 1) combinations.  With ``upper`` given, the primitive
    is evaluated there (returns a y-only TermFunction).
    """
    out: dict = {}

    def acc(key, c):
        out[key] = out.get(key, 0.0) + c

    for (q, xf, p, kind, yr), c in f._t.items():
        if f.basis.is_zero(xf):
            if q + 1 > X_POWER_CAP:
                raise UnsupportedDegreeError(f"x power {q + 1} exceeds cap {X_POWER_CAP}")
            acc((q + 1, xf, p, kind, yr), c / (q + 1))
        else:
            om = f.basis.value(xf)
            # primitive of t^q e^{i om t} = e^{i om t} * sum_j coef[j] t^j
            coef = [0.0 + 0.0j] * (q + 1)
            coef[q] = 1.0 / (1j * om)
            for j in range(q, 0, -1):
                coef[j - 1] = -j * coef[j] / (1j * om)
            for j, cf in enumerate(coef):
                acc((j, xf, p, kind, yr), c * cf)
            acc((0, _ZERO, p, kind, yr), -c * coef[0])
    prim = TermFunction(f.basis, out)
    if upper is None:
        return prim
    return prim.eval_x_at(upper)


# ---------------------------------------------------------------------------
# state vectors and the energy pairing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StateVec:
    """Triple (phi, upsilon, eta); eta is a function of x only."""

    phi: TermFunction
    ups: TermFunction
    eta: TermFunction

    @staticmethod
    def make(basis: FreqBasis, phi: TermFunction, ups: TermFunction, eta) -> "StateVec":
        if not isinstance(eta, TermFunction):
            eta = TermFunction.const(basis, eta)
        return StateVec(phi, ups, eta)

    @staticmethod
    def zero(basis: FreqBasis) -> "StateVec":
        z = TermFunction.zero(basis)
        return StateVec(z, z, z)

    @property
    def basis(self) -> FreqBasis:
        return self.phi.basis

    def __add__(self, other: "StateVec") -> "StateVec":
        return StateVec(self.phi + other.phi, self.ups + other.ups, self.eta + other.eta)

    def __sub__(self, other: "StateVec") -> "StateVec":
        return StateVec(self.phi - other.phi, self.ups - other.ups, self.eta - other.eta)

    def __mul__(self, s: complex) -> "StateVec":
        return StateVec(self.phi * s, self.ups * s, self.eta * s)

    __rmul__ = __mul__

    def scale_x(self, g: TermFunction) -> "StateVec":
        """Multiply all components by an x-only TermFunction."""
        return StateVec(multiply(self.phi, g), multiply(self.ups, g), multiply(self.eta, g))

    def max_abs_coeff(self) -> float:
        return max(self.phi.max_abs_coeff(), self.ups.max_abs_coeff(), self.eta.max_abs_coeff())

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.phi.is_zero(tol) and self.ups.is_zero(tol) and self.eta.is_zero(tol)

    def dom_residual(self, mu0: float | None = None) -> float:
        """Max violation of the domain conditions eta - ups(1) = 0, phi_y(0) = 0."""
        r1 = (self.eta - self.ups.eval_y_at(1.0)).max_abs_coeff()
        r2 = self.phi.diff_y().eval_y_at(0.0).max_abs_coeff()
        return max(r1, r2)


def _kahan_sum(values) -> complex:
    s = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    for v in values:
        t = v - comp
        tot = s + t
        comp = (tot - s) - t
        s = tot
    return s


def inner_x(u1: StateVec, u2: StateVec) -> TermFunction:
    """Energy pairing with the second argument conjugated; x kept symbolic."""
    p2c = u2.phi.conj()
    part1 = integrate_y(multiply(u1.phi, p2c) + multiply(u1.phi.diff_y(), u2.phi.diff_y().conj()))
    part2 = integrate_y(multiply(u1.ups, u2.ups.conj()))
    part3 = multiply(u1.eta, u2.eta.conj())
    return part1 + part2 + part3


def inner(u1: StateVec, u2: StateVec) -> complex:
    """Scalar energy pairing of x-independent (or x-frozen) state vectors."""
    f = inner_x(u1, u2)
    # Kahan-compensated accumulation of the constant part
    vals = []
    scale = max(f.max_abs_coeff(), 1.0)
    for (q, xf, p, kind, _), c in f._t.items():
        if q == 0 and p == 0 and kind == KIND_CONST and f.basis.is_zero(xf):
            vals.append(c)
        elif abs(c) > 1e-11 * scale:
            raise ValueError("inner() requires x-independent operands")
    return _kahan_sum(vals)


def norm(u: StateVec) -> float:
    return math.sqrt(abs(inner(u, u)))


# ---------------------------------------------------------------------------
# Gauss-Legendre quadrature oracle (verification path; tests only)
# ---------------------------------------------------------------------------

def leggauss_ab(n: int, a: float = 0.0, b: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return (b - a) * 0.5 * x + (b + a) * 0.5, w * (b - a) * 0.5


def quad_eval_y(f: TermFunction, y: np.ndarray, x: float = 0.0) -> np.ndarray:
    from .evalkernel import eval_terms

    return eval_terms(f.encode(), np.full_like(y, x), y)


def quad_oracle_y01(f: TermFunction, nodes: int = 64) -> complex:
    """Gauss-Legendre value of the y-integral of an x-independent function."""
    y, w = leggauss_ab(nodes)
    return complex(np.sum(w * quad_eval_y(f, y)))


def quad_oracle_inner(u1: StateVec, u2: StateVec, nodes: int = 64) -> complex:
    """Numeric counterpart of inner(); used only as an independent check."""
    if nodes < 16:
        raise ValueError("use at least 16 nodes")
    y, w = leggauss_ab(nodes)
    t1 = np.sum(w * (quad_eval_y(u1.phi, y) * np.conj(quad_eval_y(u2.phi, y))))
    t1 += np.sum(w * (quad_eval_y(u1.phi.diff_y(), y) * np.conj(quad_eval_y(u2.phi.diff_y(), y))))
    t2 = np.sum(w * (quad_eval_y(u1.ups, y) * np.conj(quad_eval_y(u2.ups, y))))
    t3 = u1.eta.eval(0.0, 0.0) * np.conj(u2.eta.eval(0.0, 0.0))
    return complex(t1 + t2 + t3)
