"""Bracketed scalar root finding: bisection-safeguarded Newton.

All roots in this package come from monotone or simple-root problems with
known sign-change brackets, so a plain Newton iteration with bisection
fallback is both fast and unconditionally convergent.
"""

from __future__ import annotations

from typing import Callable


class BracketError(RuntimeError):
    """The supplied interval does not bracket a sign change."""


def bracketed_newton(
    f: Callable[[float], float],
    a: float,
    b: float,
    df: Callable[[float], float] | None = None,
    xtol: float = 1e-14,
    ftol: float = 0.0,
    max_iter: int = 50,
) -> float:
    """Root of f on [a, b] with f(a)*f(b) <= 0.

    Newton steps (analytic df if given, else secant) are taken whenever they
    stay inside the current bracket; otherwise the step falls back to
    bisection. Terminates on |b - a| <= xtol*(1 + |x|) or |f(x)| <= ftol.
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise BracketError(f"no sign change on [{a}, {b}]: f={fa}, {fb}")

    x, fx = (a, fa) if abs(fa) < abs(fb) else (b, fb)
    for _ in range(max_iter):
        # Newton proposal (centered-difference derivative when none is given)
        if df is not None:
            d = df(x)
        else:
            h = 1e-7 * (1.0 + abs(x))
            d = (f(x + h) - f(x - h)) / (2.0 * h)
        step_ok = d != 0.0
        x_new = x - fx / d if step_ok else None
        if not step_ok or not (min(a, b) < x_new < max(a, b)):
            x_new = 0.5 * (a + b)
        f_new = f(x_new)
        if f_new == 0.0 or abs(f_new) <= ftol:
            return x_new
        # shrink the bracket
        if fa * f_new < 0.0:
            b, fb = x_new, f_new
        else:
            a, fa = x_new, f_new
        x, fx = x_new, f_new
        if abs(b - a) <= xtol * (1.0 + abs(x)):
            return x
    return 0.5 * (a + b)


def bisect(
    f: Callable[[float], float],
    a: float,
    b: float,
    xtol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Plain bisection to interval width xtol."""
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise BracketError(f"no sign change on [{a}, {b}]")
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0:
            return m
        if fa * fm < 0.0:
            b, fb = m, fm
        else:
            a, fa = m, fm
        if b - a <= xtol:
            break
    return 0.5 * (a + b)


def grow_bracket(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    grow: float = 2.0,
    max_grow: int = 60,
) -> tuple[float, float]:
    """Extend [lo, hi] to the right geometrically until f changes sign."""
    flo = f(lo)
    fhi = f(hi)
    n = 0
    while flo * fhi > 0.0:
        n += 1
        if n > max_grow:
            raise BracketError("bracket growth failed")
        hi = lo + (hi - lo) * grow
        fhi = f(hi)
    return lo, hi
