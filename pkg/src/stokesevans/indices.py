"""Stability indices: the sideband criterion and the resonance bubble.

Two scalar functions of the wave number decide spectral instability of the
small-amplitude wave.  Near the origin of the spectral plane, ind1 governs
the classical sideband (Benjamin-Feir) instability: ind1 > 0 iff kappa
exceeds the threshold root kappa_1 = 1.3627827...  Away from the origin, at
the order-2 resonance point of the dispersion relation, ind2 =
a12 a21 / (a11 a22) built from the period-map coefficients governs a closed
"bubble" of unstable spectrum of diameter O(eps^2); it is positive except at
the single root kappa_2 = 1.8494041...

Both indices come with independent cross-checks: ind1 has a closed
polynomial form and must match (up to a stated rational prefactor) the
combination of period-map entries appearing in the determinant expansion;
ind2 is recomputed in double-double arithmetic when its near-cancelling
product drops below 1e-6 of scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ddfloat import DDComplex
from .dispersion import WaveParams, make_wave_params, sigma_branches
from .monodromy import MonodromySeries, build_series
from .pseries import TSeries, det_series, exp_series
from .rootfind import bisect, bracketed_newton


class ConsistencyError(RuntimeError):
    """Two supposedly-equal evaluation routes disagree beyond tolerance."""


# ---------------------------------------------------------------------------
# the sideband index
# ---------------------------------------------------------------------------

def ind1(wp: WaveParams) -> float:
    """Closed polynomial in cosh/sinh(2 kappa) and kappa; > 0 means unstable."""
    k = wp.kappa
    c2 = math.cosh(2 * k)
    s2 = math.sinh(2 * k)
    s4 = math.sinh(4 * k)
    return (
        8 * c2 + 24 * k * s2 + 2 * k * s4 + 19 * c2**2 - 8 * c2**3 - 10 * c2**4
        - 8 * k**2 * c2**2 - 28 * k**2 + 8 * k * c2**3 * s2 - 9
    )


def find_kappa1() -> float:
    """Unique zero of ind1 on [1, 2], Newton-polished."""
    f = lambda k: ind1(make_wave_params(k))
    root = bracketed_newton(f, 1.0, 2.0, xtol=1e-16)
    scale = abs(f(1.0)) + abs(f(2.0))
    if abs(f(root)) > 1e-12 * scale:
        raise RuntimeError("sideband threshold root did not converge")
    return root


def nu_from_ind1(wp: WaveParams) -> float:
    """Classical sideband index, proportional to ind1 by a rational factor."""
    mu0, s = wp.mu0, wp.s
    den = 32 * s**4 * (2 * s**2 - 6 * mu0 * s**2 - 4 * mu0 * s**4 - 2 * mu0
                       + s**4 + mu0**2 + 1)
    if abs(den) < 1e-12 * max(s**8, 1.0):
        raise ZeroDivisionError("sideband index prefactor pole")
    return -mu0 * ind1(wp) / den


def f2_identity(wp: WaveParams) -> complex:
    """Closed form of the determinant combination f2 as a multiple of ind1.

    The overall orientation (f2 is purely imaginary) is pinned by requiring
    the sideband growth-rate coefficient to be real exactly on the unstable
    side ind1 > 0; the test suite verifies that sign pattern independently
    through the determinant-series route.
    """
    mu0, s = wp.mu0, wp.s
    return (-1j * math.pi**3 * (s * s + 1) ** 2
            / (4 * s**4 * (mu0 - 1) * (s * s - mu0 + 1) ** 3) * ind1(wp))


@dataclass(frozen=True)
class BFCoeffs:
    """Sideband expansion data assembled from the period-map series."""

    wp: WaveParams
    alpha10: complex  # travelling modes (double root)
    alpha10_pair: tuple[complex, complex]  # shear-block pair of first-order slopes
    alpha20: complex  # convexity coefficient, travelling-mode branch through +kappa
    alpha11: complex  # real iff ind1 > 0
    f1: complex
    f2: complex  # from period-map entries
    f2_closed: complex  # from the ind1 identity
    ind1: float
    nu: float


def bf_coefficients(wp: WaveParams, ms: MonodromySeries | None = None,
                    rtol: float = 1e-7) -> BFCoeffs:
    """Assemble the sideband coefficients; raises when the two f2 routes split."""
    if ms is None:
        ms = build_series(wp, sigma=0.0, max_order=2)
    A10 = ms.coeffs[(1, 0)]
    T = wp.period
    a11 = A10[0, 0]
    a33 = A10[2, 2]
    a44 = A10[3, 3]
    a34_20 = ms.coeffs[(2, 0)][2, 3]
    a11_20 = ms.coeffs[(2, 0)][0, 0]
    a11_02 = ms.coeffs[(0, 2)][0, 0]
    a14_11 = ms.coeffs[(1, 1)][0, 3]
    a31_11 = ms.coeffs[(1, 1)][2, 0]
    a13_01 = ms.coeffs[(0, 1)][0, 2]
    a41_01 = ms.coeffs[(0, 1)][3, 0]

    alpha10 = 1j * T / a11

    # the shear-block pair solves the residual quadratic of the leading order
    qa = T * a34_20 - a33 * a44
    qb = 1j * T * (a33 + a44)
    qc = T * T
    disc = np.sqrt(qb * qb - 4 * qa * qc)
    pair = ((-qb + disc) / (2 * qa), (-qb - disc) / (2 * qa))

    f1 = T * T * (T * a34_20 + a11 * a33 + a11 * a44 - a33 * a44 - a11 * a11)
    f2 = (
        a11_02 * a11 * a11 - T * a11_02 * a34_20 + T * a14_11 * a31_11
        - a11_02 * a11 * a33 + a11 * a13_01 * a31_11 - a11_02 * a11 * a44
        + a11 * a14_11 * a41_01 + a11_02 * a33 * a44 - a13_01 * a31_11 * a44
        + a13_01 * a34_20 * a41_01 - a14_11 * a33 * a41_01
    )
    f2c = f2_identity(wp)
    if abs(f2 - f2c) > rtol * abs(f2c):
        raise ConsistencyError(
            f"determinant combination f2 disagrees with its closed form: "
            f"{f2} vs {f2c}")

    mag20 = T * T * (-(a11 * a11) + 2 * a11_20) / (2 * a11**3)
    # fix the branch sign by the convexity of the dispersion curve at +kappa
    h = 1e-4
    curv = (sigma_branches(wp, wp.kappa + h)[1] - 2 * sigma_branches(wp, wp.kappa)[1]
            + sigma_branches(wp, wp.kappa - h)[1]) / (h * h)
    alpha20 = mag20 if (mag20 * 1j).real * curv < 0 else -mag20
    # alpha20 should equal i/2 * curvature
    alpha11 = np.sqrt(T**4 * (2 * a11_20 - a11 * a11) / a11**4 * f2 / f1)

    return BFCoeffs(
        wp=wp,
        alpha10=alpha10,
        alpha10_pair=pair,
        alpha20=alpha20,
        alpha11=alpha11,
        f1=f1,
        f2=f2,
        f2_closed=f2c,
        ind1=ind1(wp),
        nu=nu_from_ind1(wp),
    )


# ---------------------------------------------------------------------------
# determinant expansion as a trivariate series (lambda/delta, gamma, eps)
# ---------------------------------------------------------------------------

def evans_expansion(ms: MonodromySeries, order: int = 8) -> TSeries:
    """det(e^{i(k_base + K kappa + gamma) T} I - X) as a series.

    Variables are (delta, gamma, eps); the base wavenumber contributes
    e^{i k_j T}, identical for both modes at resonance and equal to one at
    sigma = 0, so the integer offset K drops out exactly.
    """
    T = ms.wp.period
    if ms.sigma == 0.0:
        phase = 1.0 + 0.0j
    else:
        if ms.resonance is None:
            raise ValueError("series expansion needs sigma = 0 or a resonance")
        phase = np.exp(1j * ms.resonance.k4 * T)
    egam = exp_series(order, 1, 1j * T) * phase
    dim = ms.dim
    M = []
    for j in range(dim):
        row = []
        for k in range(dim):
            s = egam if j == k else TSeries(order)
            for (m, n), mat in ms.coeffs.items():
                v = mat[j, k]
                if v != 0:
                    s = s - TSeries(order, {(m, 0, n): v})
            row.append(s)
        M.append(row)
    return det_series(M)


def evans_d_coefficients(ms: MonodromySeries, order: int = 8) -> dict:
    """The d^(l,m,n) coefficients of the determinant expansion."""
    return dict(evans_expansion(ms, order).c)


def bf_substitution_coefficients(ms: MonodromySeries, bf: BFCoeffs,
                                 order: int = 8) -> dict:
    """(gamma, eps) coefficients after substituting the root ansatz.

    With the computed slopes in place, the gamma^4, gamma^5 and gamma^3 eps^2
    coefficients of the substituted series must all collapse.
    """
    ds = evans_expansion(ms, order)
    lam = TSeries(order, {
        (0, 1, 0): bf.alpha10,
        (0, 2, 0): bf.alpha20,
        (0, 1, 1): bf.alpha11,
    })
    sub = ds.subs0(lam)
    return dict(sub.c)


# ---------------------------------------------------------------------------
# the resonance bubble index
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BubbleCoeffs:
    """Quadratic-factor data of the determinant at the order-2 resonance."""

    wp: WaveParams
    sigma: float
    k2: float
    k4: float
    d200: complex
    d020: complex
    d004: complex
    d110: complex
    d102: complex
    d012: complex
    alpha10: complex  # purely imaginary drift slope
    alpha02: complex  # purely imaginary drift offset
    alpha20: float  # < 0
    alpha12: float
    alpha04: float
    gamma_star: float  # argmax of Q per unit eps^2
    ind2: float
    witness12: float  # Im(a12^(0,2) / a11^(1,0))
    witness21: float  # Im(a21^(0,2) / a22^(1,0))


_DD_RESOLVE = 1e-6


def ind2_coeffs(wp: WaveParams, ms: MonodromySeries | None = None) -> BubbleCoeffs:
    """Assemble the bubble data at the order-2 resonance of this wave number."""
    if ms is None:
        ms = build_series(wp, resonance_order=2, orders=((1, 0), (0, 1), (0, 2)))
    res = ms.resonance
    T = wp.period
    A10 = ms.coeffs[(1, 0)]
    A02 = ms.coeffs[(0, 2)]
    a11, a22 = A10[0, 0], A10[1, 1]
    p11, p22v = A02[0, 0], A02[1, 1]
    r12, r21 = A02[0, 1], A02[1, 0]
    E = np.exp(1j * res.k4 * T)

    d200 = a11 * a22
    d020 = -T * T * E * E
    d004 = p11 * p22v - r12 * r21
    d110 = -1j * T * E * (a11 + a22)
    d102 = p11 * a22 + p22v * a11
    d012 = -1j * T * E * (p11 + p22v)

    alpha10 = -d110 / (2 * d200)
    alpha02 = -d102 / (2 * d200)
    alpha20 = (d110 * d110 - 4 * d200 * d020) / (4 * d200 * d200)
    alpha12 = (d110 * d102 - 2 * d200 * d012) / (2 * d200 * d200)
    alpha04 = (d102 * d102 - 4 * d200 * d004) / (4 * d200 * d200)

    _assert_small(alpha10.real, abs(alpha10), "drift slope should be imaginary")
    _assert_small(alpha02.real, abs(alpha02), "drift offset should be imaginary")
    _assert_small(alpha20.imag, abs(alpha20), "alpha20 should be real")
    _assert_small(alpha12.imag, max(abs(alpha12), abs(alpha20)), "alpha12 should be real")
    _assert_small(alpha04.imag, max(abs(alpha04), abs(alpha20)), "alpha04 should be real")

    ind2_val = (r12 * r21 / (a11 * a22)).real
    scale = abs(r12) * abs(r21) / (abs(a11) * abs(a22))
    if scale > 0 and abs(ind2_val) < _DD_RESOLVE * scale:
        # near the index zero the product cancels; redo in double-double
        num = DDComplex.from_complex(complex(r12)) * DDComplex.from_complex(complex(r21))
        den = DDComplex.from_complex(complex(a11)) * DDComplex.from_complex(complex(a22))
        ind2_val = float((num / den).re)
    qmax = alpha04.real - alpha12.real**2 / (4 * alpha20.real)
    if abs(qmax - ind2_val) > 1e-7 * max(abs(ind2_val), abs(alpha04.real), 1e-30):
        raise ConsistencyError(
            f"bubble index routes disagree: quadratic max {qmax}, "
            f"entry ratio {ind2_val}")

    return BubbleCoeffs(
        wp=wp,
        sigma=res.sigma_n,
        k2=res.k2,
        k4=res.k4,
        d200=d200,
        d020=d020,
        d004=d004,
        d110=d110,
        d102=d102,
        d012=d012,
        alpha10=1j * alpha10.imag,
        alpha02=1j * alpha02.imag,
        alpha20=alpha20.real,
        alpha12=alpha12.real,
        alpha04=alpha04.real,
        gamma_star=-alpha12.real / (2 * alpha20.real),
        ind2=ind2_val,
        witness12=(r12 / a11).imag,
        witness21=(r21 / a22).imag,
    )


def _assert_small(err: float, scale: float, msg: str, tol: float = 1e-8) -> None:
    if abs(err) > tol * max(scale, 1e-30):
        raise ConsistencyError(f"{msg}: residual {err:.3e} at scale {scale:.3e}")


def ind2(wp: WaveParams) -> float:
    return ind2_coeffs(wp).ind2


def ind2_mu0_variant(wp: WaveParams, ms: MonodromySeries | None = None) -> float:
    """Alternate index from the slope route; positive only on a kappa window."""
    if ms is None:
        ms = build_series(wp, resonance_order=2, orders=((1, 0), (0, 1), (0, 2)))
    A10 = ms.coeffs[(1, 0)]
    A02 = ms.coeffs[(0, 2)]
    a11, a22 = A10[0, 0], A10[1, 1]
    p11, p22v = A02[0, 0], A02[1, 1]
    val = (((p11 * a22 - a11 * p22v) ** 2
            + 4 * A02[0, 1] * A02[1, 0] * a11 * a22)
           / (a11 * a22) ** 2)
    _assert_small(val.imag, abs(val), "variant index should be real")
    return val.real


def _witness(kappa: float) -> float:
    wp = make_wave_params(kappa)
    ms = build_series(wp, resonance_order=2, orders=((1, 0), (0, 1), (0, 2)))
    return (ms.coeffs[(0, 2)][0, 1] / ms.coeffs[(1, 0)][0, 0]).imag


def find_kappa2(lo: float = 1.5, hi: float = 2.2, width: float = 1e-6) -> float:
    """Zero of the bubble index located through its sign witness.

    The imaginary parts of a12^(0,2)/a11^(1,0) and a21^(0,2)/a22^(1,0) both
    flip sign exactly at the index zero, so bisection on the first witness is
    well-posed even though ind2 itself only touches zero quadratically.
    """
    root = bisect(_witness, lo, hi, xtol=width)
    # confirm the second witness flips across the final bracket
    def w2(kappa: float) -> float:
        wp = make_wave_params(kappa)
        ms = build_series(wp, resonance_order=2, orders=((1, 0), (0, 1), (0, 2)))
        return (ms.coeffs[(0, 2)][1, 0] / ms.coeffs[(1, 0)][1, 1]).imag

    if w2(root - 50 * width) * w2(root + 50 * width) > 0:
        raise ConsistencyError("second sign witness does not flip at the root")
    return root


@dataclass(frozen=True)
class BubbleCurve:
    """Sampled leading-order spectrum bubble; both square-root branches."""

    gamma: np.ndarray
    re_plus: np.ndarray
    im_plus: np.ndarray
    re_minus: np.ndarray
    im_minus: np.ndarray
    gamma_star: float
    max_re: float
    coeffs: BubbleCoeffs
    eps: float


def bubble_spectrum(wp: WaveParams, eps: float, n_points: int = 201,
                    coeffs: BubbleCoeffs | None = None) -> BubbleCurve:
    """Leading-part spectrum curve near the resonance for one amplitude.

    Samples gamma over the interval bounded by the two real roots of the
    quadratic under the square root; an empty curve (not an error) signals
    the stable side where the quadratic is negative throughout.
    """
    if eps > 0.01:
        import warnings

        warnings.warn("amplitude beyond the bubble validity guard (eps > 0.01)")
    bc = coeffs if coeffs is not None else ind2_coeffs(wp)
    a20, a12, a04 = bc.alpha20, bc.alpha12, bc.alpha04
    disc = a12 * a12 - 4 * a20 * a04
    if disc <= 0.0 or bc.ind2 <= 0.0:
        empty = np.array([])
        return BubbleCurve(empty, empty, empty, empty, empty,
                           bc.gamma_star * eps * eps, 0.0, bc, eps)
    e2 = eps * eps
    g_lo = (-a12 - math.sqrt(disc)) / (2 * a20) * e2
    g_hi = (-a12 + math.sqrt(disc)) / (2 * a20) * e2
    g_lo, g_hi = min(g_lo, g_hi), max(g_hi, g_lo)
    gam = np.linspace(g_lo, g_hi, n_points)
    Q = a20 * gam * gam + a12 * gam * e2 + a04 * e2 * e2
    Q = np.maximum(Q, 0.0)
    root = np.sqrt(Q)
    drift = bc.alpha10.imag * gam + bc.alpha02.imag * e2
    return BubbleCurve(
        gamma=gam,
        re_plus=root,
        im_plus=drift,
        re_minus=-root,
        im_minus=drift,
        gamma_star=bc.gamma_star * e2,
        max_re=math.sqrt(max(bc.ind2, 0.0)) * e2,
        coeffs=bc,
        eps=eps,
    )


@dataclass(frozen=True)
class Resonance3Report:
    kappa: float
    max_offdiag_n3: float
    min_diag_n3: float
    min_offdiag_n2: float


def resonance3_stability_check(wp: WaveParams) -> Resonance3Report:
    """Order-3 resonance carries no bubble: off-diagonal entries vanish."""
    ms3 = build_series(wp, resonance_order=3, orders=((1, 0), (0, 1), (0, 2)))
    ms2 = build_series(wp, resonance_order=2, orders=((1, 0), (0, 1), (0, 2)))
    A3 = ms3.coeffs[(0, 2)]
    A2 = ms2.coeffs[(0, 2)]
    return Resonance3Report(
        kappa=wp.kappa,
        max_offdiag_n3=float(max(abs(A3[0, 1]), abs(A3[1, 0]))),
        min_diag_n3=float(min(abs(A3[0, 0]), abs(A3[1, 1]))),
        min_offdiag_n2=float(min(abs(A2[0, 1]), abs(A2[1, 0]))),
    )
