"""Linear dispersion relation of unit-depth gravity waves and its roots.

For a wave number kappa > 0, the base state fixes mu0 = kappa*coth(kappa) and
the zero-amplitude spectrum is parametrized by sigma_pm(k) = k +- sqrt(mu0 *
k * tanh k).  This module locates the four branch roots k1..k4(sigma), the
critical point (k_c, sigma_c) of sigma_+, and the resonance values sigma_N
where k2 - k4 = N*kappa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .rootfind import bracketed_newton, grow_bracket


class Regime(Enum):
    AT_ZERO = "at_zero"
    BELOW_CRITICAL = "below_critical"
    AT_CRITICAL = "at_critical"
    ABOVE_CRITICAL = "above_critical"


@dataclass(frozen=True)
class WaveParams:
    """Wave number kappa and the constants every formula reuses."""

    kappa: float
    mu0: float
    s: float  # sinh(kappa)
    c: float  # cosh(kappa)
    period: float  # 2*pi/kappa

    @property
    def froude(self) -> float:
        return 1.0 / math.sqrt(self.mu0)


def make_wave_params(kappa: float) -> WaveParams:
    if not kappa > 0.0:
        raise ValueError(f"wave number must be positive, got {kappa}")
    if kappa < 1e-8:
        # coth(kappa) ~ 1/kappa + kappa/3 avoids cancellation in kappa*coth(kappa)
        mu0 = 1.0 + kappa * kappa / 3.0
    else:
        mu0 = kappa / math.tanh(kappa)
    return WaveParams(
        kappa=kappa,
        mu0=mu0,
        s=math.sinh(kappa),
        c=math.cosh(kappa),
        period=2.0 * math.pi / kappa,
    )


def sigma_branches(wp: WaveParams, k: float) -> tuple[float, float]:
    """(sigma_+(k), sigma_-(k)); k*tanh(k) >= 0 keeps the radicand real."""
    r = math.sqrt(max(wp.mu0 * k * math.tanh(k), 0.0))
    return k + r, k - r


def _dsqrt_part(wp: WaveParams, k: float) -> float:
    # d/dk sqrt(mu0*k*tanh(k)); near 0 the limit is sqrt(mu0)*sign(k)
    if abs(k) < 1e-8:
        return math.sqrt(wp.mu0) * math.copysign(1.0, k)
    r = math.sqrt(wp.mu0 * k * math.tanh(k))
    return wp.mu0 * (math.tanh(k) + k / math.cosh(k) ** 2) / (2.0 * r)


def _dsigma_plus(wp: WaveParams, k: float) -> float:
    return 1.0 + _dsqrt_part(wp, k)


def _dsigma_minus(wp: WaveParams, k: float) -> float:
    return 1.0 - _dsqrt_part(wp, k)


def critical_point(wp: WaveParams) -> tuple[float, float]:
    """k_c < 0 with d(sigma_+)/dk (k_c) = 0 and sigma_c = sigma_+(k_c) > 0.

    sigma_+ vanishes at k = -kappa and k = 0 and is positive between, so the
    unique interior maximum lies in (-kappa, 0) where the derivative is
    monotone through zero.
    """
    lo = -wp.kappa * (1.0 - 1e-12)
    hi = -1e-9 * wp.kappa
    k_c = bracketed_newton(lambda k: _dsigma_plus(wp, k), lo, hi, xtol=1e-15)
    resid = _dsigma_plus(wp, k_c)
    if abs(resid) > 1e-10:
        raise RuntimeError(f"critical point residual {resid} too large")
    return k_c, sigma_branches(wp, k_c)[0]


@dataclass(frozen=True)
class DispersionPoint:
    """Roots of sigma_pm(k) = sigma with the branch assignment fixed."""

    sigma: float
    regime: Regime
    k1: float | None
    k2: float
    k3: float | None
    k4: float
    sigma_c: float
    k_c: float

    def roots(self) -> tuple[float, ...]:
        if self.k1 is None:
            return (self.k2, self.k4)
        return (self.k1, self.k2, self.k3, self.k4)


_RES_TOL = 1e-12


def _root_k2(wp: WaveParams, sigma: float) -> float:
    # simple root of sigma_-(k) = sigma on k >= kappa
    f = lambda k: sigma_branches(wp, k)[1] - sigma
    lo = max(wp.kappa, sigma)
    hi = lo + wp.mu0 * (1.0 + sigma)
    lo, hi = grow_bracket(f, lo, hi)
    return bracketed_newton(f, lo, hi, df=lambda k: _dsigma_minus(wp, k), xtol=1e-15)


def _root_k4(wp: WaveParams, sigma: float) -> float:
    # simple root of sigma_+(k) = sigma on k > 0; sigma_+(k) > k gives k4 < sigma
    f = lambda k: sigma_branches(wp, k)[0] - sigma
    return bracketed_newton(f, 1e-300, sigma, df=lambda k: _dsigma_plus(wp, k), xtol=1e-15)


def roots_k(wp: WaveParams, sigma: float) -> DispersionPoint:
    if sigma < 0.0:
        raise ValueError("sigma must be nonnegative")
    k_c, sigma_c = critical_point(wp)

    if sigma == 0.0:
        return DispersionPoint(0.0, Regime.AT_ZERO, -wp.kappa, wp.kappa, 0.0, 0.0,
                               sigma_c, k_c)

    k2 = _root_k2(wp, sigma)
    k4 = _root_k4(wp, sigma)

    if abs(sigma - sigma_c) < _RES_TOL:
        return DispersionPoint(sigma, Regime.AT_CRITICAL, k_c, k2, k_c, k4, sigma_c, k_c)
    if sigma > sigma_c:
        return DispersionPoint(sigma, Regime.ABOVE_CRITICAL, None, k2, None, k4,
                               sigma_c, k_c)

    f = lambda k: sigma_branches(wp, k)[0] - sigma
    # k3 in (k_c, 0): sigma_+ decreases from sigma_c to 0
    k3 = bracketed_newton(f, k_c, -1e-300, xtol=1e-15)
    # k1 in (-kappa, k_c): sigma_+ increases from 0 to sigma_c
    k1 = bracketed_newton(f, -wp.kappa * (1.0 - 1e-15), k_c, xtol=1e-15)
    return DispersionPoint(sigma, Regime.BELOW_CRITICAL, k1, k2, k3, k4, sigma_c, k_c)


@dataclass(frozen=True)
class Resonance:
    order: int
    sigma_n: float
    k2: float
    k4: float


def gap(wp: WaveParams, sigma: float) -> float:
    """k2(sigma) - k4(sigma), monotonically increasing above sigma_c."""
    return _root_k2(wp, sigma) - _root_k4(wp, sigma)


def resonance_sigma(wp: WaveParams, order: int) -> Resonance:
    """sigma_N > sigma_c with k2 - k4 = N*kappa, by bisection then Newton."""
    if order < 2:
        raise ValueError("resonance order must be >= 2")
    _, sigma_c = critical_point(wp)
    target = order * wp.kappa
    f = lambda s: gap(wp, s) - target

    def dgap(s: float) -> float:
        # implicit differentiation of sigma_pm(k_j(sigma)) = sigma
        return 1.0 / _dsigma_minus(wp, _root_k2(wp, s)) - 1.0 / _dsigma_plus(wp, _root_k4(wp, s))

    lo = sigma_c * (1.0 + 1e-9)
    lo, hi = grow_bracket(f, lo, lo + wp.kappa * order)
    sigma_n = bracketed_newton(f, lo, hi, df=dgap, xtol=1e-15)
    k2 = _root_k2(wp, sigma_n)
    k4 = _root_k4(wp, sigma_n)
    resid = abs(k2 - k4 - target)
    if resid > 1e-12 * target:
        raise RuntimeError(f"resonance residual {resid} too large")
    return Resonance(order=order, sigma_n=sigma_n, k2=k2, k4=k4)
