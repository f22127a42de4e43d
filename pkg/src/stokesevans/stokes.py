"""Small-amplitude expansion of the periodic travelling wave to third order.

The travelling wave solves, order by order in the amplitude parameter eps,
a Laplace problem with a bottom Neumann condition and coupled kinematic and
dynamic surface conditions at y = 1.  The closed-form coefficients are
transcribed here and, as a guard against transcription slips, re-derived at
construction time by solving the order-2 and order-3 linear systems by
undetermined coefficients over the term basis; any disagreement beyond
1e-10 relative aborts the build.

Conventions: phi_i odd in x, eta_i even in x with zero mean; the linear-in-x
drifts phibar_i absorb the mean of the dynamic condition.  Odd-order
corrections to mu vanish (eps -> -eps is a half-period phase shift).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dispersion import WaveParams
from .evalkernel import eval_terms
from .funcspace import (
    KIND_COSH,
    KIND_SINH,
    FreqBasis,
    TermFunction,
    fv,
    multiply,
)
from .linsolve import solve_block_system

REDERIVE_RTOL = 1e-10


def _sin(basis: FreqBasis, n: int, coeff: complex = 1.0) -> TermFunction:
    """coeff * sin(n kappa x) as complex exponentials."""
    return (
        TermFunction.monomial(basis, coeff / 2j, x_freq=fv(nk=n))
        + TermFunction.monomial(basis, -coeff / 2j, x_freq=fv(nk=-n))
    )


def _cos(basis: FreqBasis, n: int, coeff: complex = 1.0) -> TermFunction:
    return (
        TermFunction.monomial(basis, coeff / 2, x_freq=fv(nk=n))
        + TermFunction.monomial(basis, coeff / 2, x_freq=fv(nk=-n))
    )


def _ych(basis: FreqBasis, p: int, n: int, kind: int = KIND_COSH) -> TermFunction:
    return TermFunction.monomial(basis, 1.0, y_power=p, y_kind=kind, y_rate=fv(nk=n))


@dataclass(frozen=True)
class StokesExpansion:
    wp: WaveParams
    basis: FreqBasis
    phibar: tuple[float, float, float]  # orders 1..3
    mu: tuple[float, float, float, float]  # mu_0 .. mu_3
    phi: tuple[TermFunction, TermFunction, TermFunction]
    eta: tuple[TermFunction, TermFunction, TermFunction]
    u: tuple[TermFunction, TermFunction, TermFunction]

    def phi_order(self, i: int) -> TermFunction:
        return self.phi[i - 1]

    def eta_order(self, i: int) -> TermFunction:
        return self.eta[i - 1]

    def u_order(self, i: int) -> TermFunction:
        return self.u[i - 1]


def build_stokes(wp: WaveParams, basis: FreqBasis | None = None,
                 rederive: bool = True) -> StokesExpansion:
    """Populate the third-order expansion; cross-checked by re-derivation."""
    if basis is None:
        basis = FreqBasis(kappa=wp.kappa, k2=wp.kappa, k4=0.0)
    mu0, s, c = wp.mu0, wp.s, wp.c
    s2 = math.sinh(2.0 * wp.kappa)

    phi1 = multiply(_sin(basis, 1), _ych(basis, 0, 1))
    eta1 = _cos(basis, 1, s)

    phibar2 = (mu0 * mu0 / 4.0) * math.tanh(wp.kappa) ** 2
    phi2 = (
        multiply(_sin(basis, 2, 3.0 * mu0 / (8.0 * s * c)), _ych(basis, 0, 2))
        + multiply(_sin(basis, 2, mu0 * s * s / (2.0 * c)), _ych(basis, 1, 1, KIND_SINH))
    )
    eta2 = _cos(basis, 2, mu0 / 4.0 * (2.0 * s * s + 3.0))
    mu1 = 0.0

    phibar3 = 0.0
    s2q = s * s
    phi3 = (
        multiply(_sin(basis, 3, -mu0**2 * (4.0 * s2q - 9.0) / (16.0 * s2 * s2)),
                 _ych(basis, 0, 3))
        + multiply(_sin(basis, 3, 3.0 * mu0**2 * s / (8.0 * (s2q + 1.0))),
                   _ych(basis, 1, 2, KIND_SINH))
        + multiply(_sin(basis, 3, mu0**2 * s * (2.0 * s2q + 3.0) / (8.0 * c)),
                   _ych(basis, 1, 1, KIND_SINH))
        + multiply(_sin(basis, 3, mu0**2 * s2q * s2q / (8.0 * (s2q + 1.0))),
                   _ych(basis, 2, 1))
        + multiply(_sin(basis, 1, 3.0 * mu0**2 * s / (8.0 * (s2q + 1.0))),
                   _ych(basis, 1, 2, KIND_SINH))
        + multiply(_sin(basis, 1, -mu0**2 * s * (2.0 * s2q + 3.0) / (8.0 * c)),
                   _ych(basis, 1, 1, KIND_SINH))
        + multiply(_sin(basis, 1, mu0**2 * s2q * s2q / (8.0 * (s2q + 1.0))),
                   _ych(basis, 2, 1))
    )
    eta3 = (
        _cos(basis, 3, mu0**2 * (24.0 * s**6 + 72.0 * s**4 + 72.0 * s2q + 27.0)
             / (64.0 * (s**3 + s)))
        + _cos(basis, 1, mu0**2 * s * (5.0 * s**4 + 13.0 * s2q + 6.0) / (8.0 * (s2q + 1.0)))
    )
    mu2 = -mu0**3 * (8.0 * s**4 + 12.0 * s2q + 9.0) / (8.0 * (s2q + 1.0))

    # horizontal velocity: u = phi_x - y eta_x phi_y / (1 + eta), order by order
    u1 = phi1.diff_x()
    u2 = (
        TermFunction.const(basis, phibar2)
        + phi2.diff_x()
        - multiply(eta1.diff_x(), phi1.diff_y()).mul_y()
    )
    u3 = (
        phi3.diff_x()
        - (
            multiply(eta1.diff_x(), phi2.diff_y())
            + multiply(eta2.diff_x(), phi1.diff_y())
            - multiply(multiply(eta1, eta1.diff_x()), phi1.diff_y())
        ).mul_y()
    )

    se = StokesExpansion(
        wp=wp,
        basis=basis,
        phibar=(0.0, phibar2, phibar3),
        mu=(mu0, mu1, mu2, 0.0),
        phi=(phi1, phi2, phi3),
        eta=(eta1, eta2, eta3),
        u=(u1, u2, u3),
    )
    if rederive:
        _check_against_rederivation(se)
    return se


# ---------------------------------------------------------------------------
# order-by-order residual systems
# ---------------------------------------------------------------------------

def _order_system(se: StokesExpansion, order: int) -> dict[str, TermFunction]:
    """Residual of the order-eps^order equations; all entries should vanish."""
    basis = se.basis
    mu0 = se.mu[0]
    phi1, phi2, phi3 = se.phi
    eta1, eta2, eta3 = se.eta
    zero = TermFunction.zero(basis)

    if order == 1:
        lap = phi1.diff_x().diff_x() + phi1.diff_y().diff_y()
        bot = phi1.diff_y().eval_y_at(0.0)
        kin = eta1.diff_x() + phi1.diff_y().eval_y_at(1.0)
        dyn = phi1.diff_x().eval_y_at(1.0) - mu0 * eta1
        return {"laplace": lap, "bottom": bot, "kinematic": kin, "dynamic": dyn}

    e1x = eta1.diff_x()
    p1y = phi1.diff_y()
    if order == 2:
        force = (
            2.0 * multiply(eta1, phi1.diff_y().diff_y())
            + multiply(e1x.diff_x(), p1y).mul_y()
            + 2.0 * multiply(e1x, p1y.diff_x()).mul_y()
        )
        lap = phi2.diff_x().diff_x() + phi2.diff_y().diff_y() - force
        bot = phi2.diff_y().eval_y_at(0.0)
        kin = (
            eta2.diff_x() + phi2.diff_y().eval_y_at(1.0)
            - multiply(e1x, phi1.diff_x().eval_y_at(1.0))
            - multiply(eta1, p1y.eval_y_at(1.0))
        )
        p1x1 = phi1.diff_x().eval_y_at(1.0)
        p1y1 = p1y.eval_y_at(1.0)
        dyn = (
            TermFunction.const(basis, se.phibar[1])
            + phi2.diff_x().eval_y_at(1.0)
            - mu0 * eta2
            - multiply(e1x, p1y1)
            - 0.5 * (multiply(p1x1, p1x1) + multiply(p1y1, p1y1))
            - se.mu[1] * eta1
        )
        return {"laplace": lap, "bottom": bot, "kinematic": kin, "dynamic": dyn}

    if order == 3:
        e2x = eta2.diff_x()
        p2y = phi2.diff_y()
        force = (
            2.0 * multiply(e1x, phi2.diff_y().diff_x()).mul_y()
            + 2.0 * multiply(eta1, phi2.diff_y().diff_y())
            + multiply(e1x.diff_x(), p2y).mul_y()
            + 2.0 * multiply(e2x - multiply(eta1, e1x), p1y.diff_x()).mul_y()
            + multiply(
                2.0 * eta2 - 3.0 * multiply(eta1, eta1)
                - multiply(e1x, e1x).mul_y().mul_y(),
                phi1.diff_y().diff_y(),
            )
            + multiply(
                e2x.diff_x() - 2.0 * multiply(e1x, e1x) - multiply(eta1, e1x.diff_x()),
                p1y,
            ).mul_y()
        )
        lap = phi3.diff_x().diff_x() + phi3.diff_y().diff_y() - force
        bot = phi3.diff_y().eval_y_at(0.0)
        p1x1 = phi1.diff_x().eval_y_at(1.0)
        p1y1 = p1y.eval_y_at(1.0)
        p2x1 = phi2.diff_x().eval_y_at(1.0)
        p2y1 = p2y.eval_y_at(1.0)
        pb2 = TermFunction.const(basis, se.phibar[1])
        kin = (
            eta3.diff_x() + phi3.diff_y().eval_y_at(1.0)
            - multiply(e1x, p2x1 + pb2)
            - multiply(eta1, p2y1)
            - multiply(e2x, p1x1)
            - multiply(eta2 - multiply(e1x, e1x) - multiply(eta1, eta1), p1y1)
        )
        dyn = (
            TermFunction.const(basis, se.phibar[2])
            + phi3.diff_x().eval_y_at(1.0)
            - mu0 * eta3
            - multiply(p1x1, p2x1 + pb2)
            - multiply(e1x, p2y1)
            - multiply(p1y1, p2y1 + e2x)
            + multiply(multiply(eta1, e1x) + multiply(p1x1, e1x), p1y1)
            + multiply(eta1, multiply(p1y1, p1y1))
            - se.mu[2] * eta1
        )
        return {"laplace": lap, "bottom": bot, "kinematic": kin, "dynamic": dyn}

    raise ValueError("order must be 1, 2 or 3")


def collocation_grid(wp: WaveParams, n_y: int = 16, n_x: int = 24):
    """Chebyshev nodes in y on [0, 1] crossed with equispaced x per period."""
    i = np.arange(n_y)
    y = 0.5 * (1.0 - np.cos(np.pi * (2 * i + 1) / (2 * n_y)))
    x = np.linspace(0.0, wp.period, n_x, endpoint=False)
    X, Y = np.meshgrid(x, y)
    return X.ravel(), Y.ravel()


def stokes_residual(se: StokesExpansion, order: int,
                    grid: tuple[np.ndarray, np.ndarray] | None = None) -> float:
    """Max collocation residual of the order-eps^order system."""
    if grid is None:
        grid = collocation_grid(se.wp)
    X, Y = grid
    worst = 0.0
    for name, r in _order_system(se, order).items():
        if len(r) == 0:
            continue
        vals = eval_terms(r.encode(), X, Y)
        worst = max(worst, float(np.max(np.abs(vals))))
    return worst


# ---------------------------------------------------------------------------
# independent re-derivation by undetermined coefficients
# ---------------------------------------------------------------------------

def _pick_key(f: TermFunction, key) -> TermFunction:
    return TermFunction.const(f.basis, f._t.get(key, 0.0))


def _rederive_order(se: StokesExpansion, order: int) -> dict[str, complex]:
    """Solve the order-2 or order-3 system from scratch; returns named values."""
    basis = se.basis
    mu0 = se.mu[0]
    zero = TermFunction.zero(basis)

    if order == 2:
        phi_sigs = [(0, 2, 0, KIND_COSH, 2), (0, 2, 1, KIND_SINH, 1),
                    (0, 2, 1, KIND_SINH, 2), (0, 2, 0, KIND_COSH, 1)]
        eta_ns = [2]
        phibar_name, mu_name = "phibar2", "mu1"
        mu_multiplier = se.eta[0]
    else:
        phi_sigs = [
            (0, 3, 0, KIND_COSH, 3), (0, 3, 1, KIND_SINH, 2), (0, 3, 1, KIND_SINH, 1),
            (0, 3, 2, KIND_COSH, 1), (0, 3, 0, KIND_COSH, 2), (0, 3, 0, KIND_COSH, 1),
            (0, 1, 1, KIND_SINH, 2), (0, 1, 1, KIND_SINH, 1), (0, 1, 2, KIND_COSH, 1),
            (0, 1, 0, KIND_COSH, 2), (0, 1, 0, KIND_COSH, 1),
        ]
        eta_ns = [3, 1]
        phibar_name, mu_name = "phibar3", "mu2"
        mu_multiplier = se.eta[0]

    # forcing sides assembled with the transcribed lower orders and the
    # candidate order's fields stripped out of the residual system
    sys_full = _order_system(se, order)
    phi_t = se.phi[order - 1]
    eta_t = se.eta[order - 1]
    pb_t = se.phibar[order - 1]
    mu_t = se.mu[order - 1] if order == 2 else se.mu[2]
    rhs = {
        "laplace": -(sys_full["laplace"] - (phi_t.diff_x().diff_x() + phi_t.diff_y().diff_y())),
        "bottom": zero,
        "kinematic": -(sys_full["kinematic"]
                       - (eta_t.diff_x() + phi_t.diff_y().eval_y_at(1.0))),
        "dynamic": -(sys_full["dynamic"]
                     - (TermFunction.const(basis, pb_t)
                        + phi_t.diff_x().eval_y_at(1.0) - mu0 * eta_t
                        - mu_t * mu_multiplier)),
        "gauge": zero,
    }
    gauge_key = (0, basis.canon(fv(nk=1)), 0, KIND_COSH, basis.canon(fv(nk=1)))

    columns = []
    names = []
    for (_, n, p, kind, rn) in phi_sigs:
        cf = multiply(_sin(basis, n), _ych(basis, p, rn, kind))
        columns.append({
            "laplace": cf.diff_x().diff_x() + cf.diff_y().diff_y(),
            "bottom": cf.diff_y().eval_y_at(0.0),
            "kinematic": cf.diff_y().eval_y_at(1.0),
            "dynamic": cf.diff_x().eval_y_at(1.0),
            "gauge": _pick_key(cf, gauge_key),
        })
        names.append(("phi", n, p, kind, rn))
    for n in eta_ns:
        ef = _cos(basis, n)
        columns.append({"kinematic": ef.diff_x(), "dynamic": -mu0 * ef})
        names.append(("eta", n))
    columns.append({"dynamic": TermFunction.const(basis, 1.0)})
    names.append((phibar_name,))
    columns.append({"dynamic": -1.0 * mu_multiplier})
    names.append((mu_name,))

    x, resid = solve_block_system(columns, rhs, rtol=1e-9)
    out = {}
    for nm, xv in zip(names, x):
        out[nm] = xv
    out[("residual",)] = resid
    return out


def _check_against_rederivation(se: StokesExpansion) -> None:
    """Abort the build when transcription and re-derivation disagree."""
    for order in (2, 3):
        got = _rederive_order(se, order)
        expected = {}
        phi_t, eta_t = se.phi[order - 1], se.eta[order - 1]
        for nm, val in got.items():
            if nm[0] == "phi":
                _, n, p, kind, rn = nm
                key = (0, se.basis.canon(fv(nk=n)), p, kind, se.basis.canon(fv(nk=rn)))
                # coefficient of sin(n kx)*profile: the e^{+ink x} part is coeff/2i
                expected[nm] = 2j * phi_t._t.get(key, 0.0)
            elif nm[0] == "eta":
                n = nm[1]
                key = (0, se.basis.canon(fv(nk=n)), 0, 0, se.basis.canon(fv()))
                expected[nm] = 2.0 * eta_t._t.get(key, 0.0)
            elif nm[0] == "phibar2":
                expected[nm] = se.phibar[1]
            elif nm[0] == "phibar3":
                expected[nm] = se.phibar[2]
            elif nm[0] == "mu1":
                expected[nm] = se.mu[1]
            elif nm[0] == "mu2":
                expected[nm] = se.mu[2]
            else:
                continue
        scale = max(max(abs(v) for v in expected.values()), 1.0)
        for nm, val in expected.items():
            diff = abs(got[nm] - val)
            if diff > REDERIVE_RTOL * scale:
                raise RuntimeError(
                    f"order-{order} coefficient {nm} mismatch: transcribed {val}, "
                    f"re-derived {got[nm]} (diff {diff:.3e})"
                )


# ---------------------------------------------------------------------------
# evaluation of the truncated wave
# ---------------------------------------------------------------------------

def eval_wave(se: StokesExpansion, eps: float, x: float, y: float
              ) -> tuple[float, float, float, float]:
    """Truncated (phi, u, eta, mu) at one point, drift terms included."""
    if abs(eps) > 0.1:
        warnings.warn("amplitude beyond the expansion's validity guard (|eps| > 0.1)")
    phi = 0.0
    u = 0.0
    eta = 0.0
    for i in (1, 2, 3):
        e = eps**i
        phi += e * (se.phibar[i - 1] * x + se.phi[i - 1].eval(x, y).real)
        u += e * se.u[i - 1].eval(x, y).real
        eta += e * se.eta[i - 1].eval(x, 0.0).real
    mu = se.mu[0] + se.mu[2] * eps * eps
    return phi, u, eta, mu
