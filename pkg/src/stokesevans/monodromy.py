"""Expansion of the period map of the reduced system in (delta, eps).

Writing the reduced flow's fundamental matrix as a double series, each order
(m, n) satisfies a linear ODE with the flat-state generator on the diagonal
and a forcing built from all lower orders.  Variation of parameters turns
every entry into running x-integrals of energy pairings, all exact in the
term algebra: resonant frequency combinations produce the secular branch of
the x-integral, non-resonant ones the bounded branch, decided on the integer
lattice.  Evaluating at one period gives the coefficient matrices feeding
the determinant expansion; closed forms printed for a subset of entries act
as regression targets for the quadrature pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dispersion import Resonance, WaveParams, resonance_sigma, roots_k
from .eigensystem import Projector, basis_for, modes_at
from .funcspace import StateVec, TermFunction, fv, inner_x, integrate_x
from .operator_b import BContext, make_b_context
from .reduction import build_forcing, solve_w

MAX_TOTAL_ORDER = 2

ORDER_SEQUENCE = ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2))


class AbsentEntryError(KeyError):
    """The requested closed-form entry is not printed anywhere; use the
    quadrature pipeline instead."""


@dataclass
class MonodromySeries:
    """Period-map coefficients a^(m,n)(T) plus the recursion byproducts."""

    wp: WaveParams
    sigma: float
    dim: int
    coeffs: dict = field(default_factory=dict)  # (m, n) -> complex matrix at T
    provenance: dict = field(default_factory=dict)  # (m, n) -> matrix of path tags
    resonance: Resonance | None = None
    projector: Projector | None = None
    a_funcs: dict = field(default_factory=dict)  # (m, n) -> [column][j] TermFunction
    w_funcs: dict = field(default_factory=dict)  # (m, n) -> [column] StateVec

    def entry(self, m: int, n: int, j: int, k: int) -> complex:
        return self.coeffs[(m, n)][j, k]


def _a00_columns(pr: Projector) -> list[list[TermFunction]]:
    """Zeroth-order flow: diagonal phases, plus the shear block at sigma 0."""
    basis = pr.basis
    zero = TermFunction.zero(basis)
    if pr.sigma == 0.0:
        em = TermFunction.monomial(basis, 1.0, x_freq=fv(nk=-1))
        ep = TermFunction.monomial(basis, 1.0, x_freq=fv(nk=1))
        one = TermFunction.const(basis, 1.0)
        x1 = TermFunction.monomial(basis, 1.0, x_power=1)
        return [
            [em, zero, zero, zero],
            [zero, ep, zero, zero],
            [zero, zero, one, x1],
            [zero, zero, zero, one],
        ]
    e2 = TermFunction.monomial(basis, 1.0, x_freq=fv(n2=1))
    e4 = TermFunction.monomial(basis, 1.0, x_freq=fv(n4=1))
    return [[e2, zero], [zero, e4]]


def _integrate_column(pr: Projector, F: list[TermFunction]) -> list[TermFunction]:
    """Solve a' = A0 a + F with a(0) = 0 for one column."""
    basis = pr.basis
    if pr.sigma == 0.0:
        a1 = integrate_x(F[0].shift_x_freq(fv(nk=1))).shift_x_freq(fv(nk=-1))
        a2 = integrate_x(F[1].shift_x_freq(fv(nk=-1))).shift_x_freq(fv(nk=1))
        a3 = integrate_x(F[2])
        a4 = integrate_x(a3 + F[3])
        return [a1, a2, a3, a4]
    out = []
    for j, mode in enumerate(pr.modes):
        shift = fv(n2=1) if j == 0 else fv(n4=1)
        neg = fv(n2=-1) if j == 0 else fv(n4=-1)
        out.append(integrate_x(F[j].shift_x_freq(neg)).shift_x_freq(shift))
    return out


def a_quadrature(pr: Projector, bctx: BContext, column: int,
                 m: int, n: int, a_funcs: dict, w_funcs: dict
                 ) -> tuple[list[TermFunction], StateVec]:
    """Order-(m, n) expansion functions for one column, plus its forcing."""
    a_cols = {mn: cols[column] for mn, cols in a_funcs.items()}
    w_low = {mn: cols[column] for mn, cols in w_funcs.items()}
    f = build_forcing(bctx, pr, m, n, a_cols, w_low)
    F = [inner_x(f, mode.psi) for mode in pr.modes]
    return _integrate_column(pr, F), f


def build_series(wp: WaveParams, sigma: float | None = None,
                 resonance_order: int | None = None,
                 max_order: int = 2,
                 orders: tuple | None = None,
                 use_closed: bool = True) -> MonodromySeries:
    """Fill the coefficient matrices for all requested orders.

    Either sigma = 0, or a resonance order N >= 2 (sigma = sigma_N), or a
    plain sigma above critical.  The pipeline computes every entry; printed
    closed forms overwrite matching entries when use_closed is set, with the
    provenance recorded per entry.
    """
    if max_order > MAX_TOTAL_ORDER:
        raise ValueError(f"max_order {max_order} beyond supported {MAX_TOTAL_ORDER}")
    res = None
    if resonance_order is not None:
        res = resonance_sigma(wp, resonance_order)
        sigma = res.sigma_n
        dp = roots_k(wp, sigma)
        basis = basis_for(wp, dp, resonance_order=resonance_order)
        pr = modes_at(wp, sigma, basis=basis, dp=dp)
    else:
        if sigma is None:
            sigma = 0.0
        dp = roots_k(wp, sigma)
        pr = modes_at(wp, sigma, dp=dp)
    bctx = make_b_context(wp, pr.basis)
    dim = len(pr.modes)
    T = wp.period

    if orders is None:
        orders = tuple((m, n) for (m, n) in ORDER_SEQUENCE if m + n <= max_order)

    ms = MonodromySeries(wp=wp, sigma=sigma, dim=dim, resonance=res, projector=pr)
    a00 = _a00_columns(pr)
    ms.a_funcs[(0, 0)] = a00
    ms.coeffs[(0, 0)] = np.array(
        [[a00[k][j].eval(T, 0.0) for k in range(dim)] for j in range(dim)])
    ms.provenance[(0, 0)] = np.full((dim, dim), "pipeline", dtype=object)

    # first-order corrections are needed whenever any second-order entry is built
    if any(m + n == 2 for m, n in orders):
        need_w = {(1, 0), (0, 1)} & set(orders)
    else:
        need_w = set()

    for (m, n) in ORDER_SEQUENCE:
        if (m, n) not in orders:
            continue
        cols_a = []
        cols_w = []
        for k in range(dim):
            a_col, forcing = a_quadrature(pr, bctx, k, m, n, ms.a_funcs, ms.w_funcs)
            cols_a.append(a_col)
            if (m, n) in need_w:
                cols_w.append(solve_w(pr, forcing, k=k, m=m, n=n).w)
        ms.a_funcs[(m, n)] = cols_a
        if cols_w:
            ms.w_funcs[(m, n)] = cols_w
        ms.coeffs[(m, n)] = np.array(
            [[cols_a[k][j].eval(T, 0.0) for k in range(dim)] for j in range(dim)])
        ms.provenance[(m, n)] = np.full((dim, dim), "pipeline", dtype=object)

    if use_closed:
        _overlay_closed(ms)
    return ms


def _overlay_closed(ms: MonodromySeries) -> None:
    for mn in list(ms.coeffs):
        if mn == (0, 0):
            continue
        try:
            closed = a_closed(ms.wp, mn[0], mn[1], sigma=ms.sigma,
                              resonance=ms.resonance)
        except AbsentEntryError:
            continue
        mask = ~np.isnan(closed.real)
        ms.coeffs[mn][mask] = closed[mask]
        ms.provenance[mn][mask] = "closed-form"


# ---------------------------------------------------------------------------
# printed closed forms (regression anchors; NaN marks absent entries)
# ---------------------------------------------------------------------------

def a_closed(wp: WaveParams, m: int, n: int, sigma: float = 0.0,
             resonance: Resonance | None = None) -> np.ndarray:
    """Matrix of printed entries for order (m, n); NaN where none exists."""
    if resonance is not None:
        return _a_closed_resonant(wp, m, n, resonance)
    if sigma != 0.0:
        raise AbsentEntryError("closed forms are printed only at sigma = 0 "
                               "and at resonance")
    return _a_closed_zero(wp, m, n)


def _a_closed_zero(wp: WaveParams, m: int, n: int) -> np.ndarray:
    mu0, s, c, kap = wp.mu0, wp.s, wp.c, wp.kappa
    pi = math.pi
    NA = complex(np.nan, np.nan)
    if (m, n) == (1, 0):
        d11 = 4 * pi * c**3 / (mu0 * s * (s * s - mu0 + 1))
        return np.array([
            [d11, 0, 0, 0],
            [0, d11, 0, 0],
            [0, 0, 2 * pi * c * (mu0 + 1) / (mu0 * s * (1 - mu0)), 0],
            [4 * pi * (s * s + 1) / (mu0 * (mu0 - 1) * s),
             4 * pi * (s * s + 1) / (mu0 * (mu0 - 1) * s),
             4 * pi**2 * (s * s + 1) / (mu0**2 * s * s * (1 - mu0)),
             2 * pi / kap],
        ], dtype=complex)
    if (m, n) == (0, 1):
        a13 = pi * (2 * s * s + 3) / (s * s - mu0 + 1)
        a41 = (4 * pi * math.exp(2 * kap) * (mu0 - 4 * c * c) * (c * c - 1) * 1j
               / ((math.exp(4 * kap) - 1) * (mu0 - 1)))
        return np.array([
            [0, 0, a13, 0],
            [0, 0, a13, 0],
            [0, 0, 0, 0],
            [a41, -a41, 2 * pi * c * (mu0**2 + mu0 + 1) / (mu0 * (mu0 - 1)), 0],
        ], dtype=complex)
    if (m, n) == (2, 0):
        a11 = (8 * pi**2 * c**6 / (mu0**2 * (mu0 - c * c) ** 2 * (c * c - 1))
               + 2 * pi * c**4 * (c**4 + 4 * mu0**2 * c * c - 3 * mu0**2
                                  - 2 * mu0 * c * c) * 1j
               / (mu0**2 * (mu0 - c * c) ** 3 * (c * c - 1)))
        a31 = (4 * pi * (s * s + 1) * (s * s - 3 * mu0 * s * s - 2 * mu0 + mu0**2 + 1)
               / (mu0 * s * (mu0 - 1) ** 2 * (s * s - mu0 + 1)))
        a34 = 2 * pi * c * (c + s) / (mu0 + c * s + c * c - mu0 * c * c
                                      - mu0 * c * s - 1)
        a44 = -2 * pi**2 * (s * s + 1) / (mu0**2 * s * s * (mu0 - 1))
        return np.array([
            [a11, 0, NA, 0],
            [0, np.conj(a11), NA, 0],
            [a31, a31, NA, a34],
            [NA, NA, NA, a44],
        ], dtype=complex)
    if (m, n) == (1, 1):
        a11 = -2 * pi * (c + 2 * c**3) / ((mu0 - c * c) * (mu0 - 1))
        a14 = 2 * pi * (s * s + 1) / (s * s - mu0 + 1)
        a31 = (-2 * pi * 1j
               * (4 * c**4 + 4 * s * c**3 - 5 * c * c - 3 * s * c + 1)
               * (-2 * c**4 * mu0**2 - 4 * c**4 * mu0 + 2 * c**4 + 3 * c * c * mu0**2
                  + 2 * c * c * mu0 - mu0**3)
               / (c * (mu0 - 1) ** 2 * (mu0 - c * c)
                  * (-4 * c**3 - 4 * s * c * c + 3 * c + s)))
        return np.array([
            [a11, a11, NA, a14],
            [a11, a11, NA, a14],
            [a31, NA, NA, 0],
            [NA, NA, NA, NA],
        ], dtype=complex)
    if (m, n) == (0, 2):
        a11 = (-1j * mu0 * pi
               * (24 * s**2 - 21 * mu0 * s**2 - 20 * mu0 * s**4 - 8 * mu0 * s**6
                  - 9 * mu0 + 40 * s**4 + 16 * s**6 + 15 * mu0**2 * s**2
                  + 16 * mu0**2 * s**4 + 8 * mu0**2 * s**6 + 9 * mu0**2)
               / (4 * (s**2 + 1) * (mu0 - 1) * (s**2 - mu0 + 1)))
        return np.array([
            [a11, NA, NA, 0],
            [NA, NA, NA, 0],
            [NA, NA, NA, 0],
            [NA, NA, NA, 0],
        ], dtype=complex)
    raise AbsentEntryError(f"no printed entries for order {(m, n)} at sigma = 0")


def _a_closed_resonant(wp: WaveParams, m: int, n: int, res: Resonance) -> np.ndarray:
    T = wp.period
    sg, k2, k4 = res.sigma_n, res.k2, res.k4
    if (m, n) == (1, 0):
        s22 = math.sinh(2 * k2)
        s44 = math.sinh(2 * k4)
        a11 = (2 * k2 * s22 / (k2 * s22 + sg * s22 + 2 * k2 * sg - 2 * k2 * k2)
               * T * np.exp(1j * k2 * T))
        a22 = (2 * k4 * s44 / (k4 * s44 + sg * s44 + 2 * k4 * sg - 2 * k4 * k4)
               * T * np.exp(1j * k4 * T))
        NA = complex(np.nan, np.nan)
        return np.array([[a11, 0], [0, a22]], dtype=complex)
    if (m, n) == (0, 1):
        return np.zeros((2, 2), dtype=complex)
    raise AbsentEntryError(f"no printed entries for order {(m, n)} at resonance")


def closed_entry(wp: WaveParams, m: int, n: int, j: int, k: int,
                 sigma: float = 0.0, resonance: Resonance | None = None) -> complex:
    """One printed entry; raises AbsentEntryError for the omitted ones."""
    mat = a_closed(wp, m, n, sigma=sigma, resonance=resonance)
    v = mat[j, k]
    if np.isnan(v.real):
        raise AbsentEntryError(
            f"entry ({j}, {k}) of order {(m, n)} is not printed; "
            "use a_quadrature")
    return v


def compare_with_closed(ms: MonodromySeries) -> dict:
    """Pipeline-vs-printed relative differences per order (NaN-masked)."""
    out = {}
    for mn in ms.coeffs:
        if mn == (0, 0):
            continue
        try:
            closed = a_closed(ms.wp, mn[0], mn[1], sigma=ms.sigma,
                              resonance=ms.resonance)
        except AbsentEntryError:
            continue
        pipe = _pipeline_matrix(ms, mn)
        mask = ~np.isnan(closed.real)
        # all-zero printed matrices are checked absolutely
        scale = max(np.max(np.abs(closed[mask])), 1.0)
        out[mn] = float(np.max(np.abs(pipe[mask] - closed[mask])) / scale)
    return out


def _pipeline_matrix(ms: MonodromySeries, mn: tuple) -> np.ndarray:
    cols = ms.a_funcs[mn]
    T = ms.wp.period
    return np.array([[cols[k][j].eval(T, 0.0) for k in range(ms.dim)]
                     for j in range(ms.dim)])


# ---------------------------------------------------------------------------
# the determinant
# ---------------------------------------------------------------------------

def _det2(M: np.ndarray) -> complex:
    return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]


def _det4(M: np.ndarray) -> complex:
    # cofactor expansion along the first row (kept explicit: no pivoting noise)
    total = 0.0 + 0.0j
    for k in range(4):
        rows = [1, 2, 3]
        cols = [c for c in range(4) if c != k]
        m3 = M[np.ix_(rows, cols)]
        det3 = (
            m3[0, 0] * (m3[1, 1] * m3[2, 2] - m3[1, 2] * m3[2, 1])
            - m3[0, 1] * (m3[1, 0] * m3[2, 2] - m3[1, 2] * m3[2, 0])
            + m3[0, 2] * (m3[1, 0] * m3[2, 1] - m3[1, 1] * m3[2, 0])
        )
        total += ((-1) ** k) * M[0, k] * det3
    return total


@dataclass(frozen=True)
class EvansExpansion:
    """Determinant expansion data around one spectral branch point.

    ``d[(l, m, n)]`` multiplies delta^l gamma^m eps^n; the integer offset K
    of the wavenumber drops out of the determinant exactly (one-period
    phases), so a single coefficient table serves every K.
    """

    d: dict
    K: int
    branch_lambda: complex
    branch_k: float


def evans_expansion_data(ms: MonodromySeries, K: int = 0, j: int = 0,
                         order: int = 8) -> EvansExpansion:
    from .indices import evans_d_coefficients

    if ms.sigma == 0.0:
        base_k = 0.0
    else:
        base_k = (ms.resonance.k2, ms.resonance.k4)[j]
    return EvansExpansion(
        d=evans_d_coefficients(ms, order),
        K=K,
        branch_lambda=1j * ms.sigma,
        branch_k=base_k + K * ms.wp.kappa,
    )


VALIDITY_GUARD = 0.05


def period_map(ms: MonodromySeries, delta: complex, eps: float) -> np.ndarray:
    """Truncated period map X(T) = sum a^(m,n)(T) delta^m eps^n."""
    X = np.zeros((ms.dim, ms.dim), dtype=complex)
    for (m, n), mat in ms.coeffs.items():
        X = X + mat * (delta**m) * (eps**n)
    return X


def evans_value(ms: MonodromySeries, lam: complex, k: float, eps: float,
                warn: bool = True) -> complex:
    """det(e^{ikT} I - X(T)) from the truncated series at lambda, k, eps."""
    delta = lam - 1j * ms.sigma
    if warn and (abs(delta) > VALIDITY_GUARD or abs(eps) > VALIDITY_GUARD):
        import warnings

        warnings.warn("evans_value outside truncation validity "
                      f"(|delta|={abs(delta):.3g}, eps={eps:.3g})")
    X = period_map(ms, delta, eps)
    M = np.exp(1j * k * ms.wp.period) * np.eye(ms.dim) - X
    return _det2(M) if ms.dim == 2 else _det4(M)
