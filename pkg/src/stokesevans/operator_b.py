"""Expanded perturbation operators acting on state vectors.

The linearized problem about the small-amplitude wave splits off a flat-state
part L(i sigma) plus a periodic-in-x remainder expanded in the spectral shift
delta and the amplitude eps.  The five expansion orders needed through total
order two are implemented here on the term algebra:

    (1,0): u -> (phi, -ups - 2 i sigma phi / mu0, eta)
    (2,0): u -> (0, -phi / mu0, 0)
    (0,1), (1,1), (0,2): x-periodic coefficients built from the first- and
    second-order wave fields and their y = 1 traces.

The (0,2) block is the longest coefficient set in the pipeline; its
transcription is double-checked in the test suite against an independently
keyed-in numeric evaluator (double-entry bookkeeping).
"""

from __future__ import annotations

from dataclasses import dataclass

from .dispersion import WaveParams
from .funcspace import FreqBasis, StateVec, TermFunction, multiply
from .stokes import StokesExpansion, build_stokes

SUPPORTED_ORDERS = ((1, 0), (2, 0), (0, 1), (1, 1), (0, 2))


class UnsupportedOrderError(ValueError):
    pass


@dataclass(frozen=True)
class BContext:
    """Wave fields and their y = 1 traces, precomputed once per basis.

    Traces appear dozens of times inside the second-order coefficients, so
    they are built a single time from the expansion.
    """

    wp: WaveParams
    basis: FreqBasis
    se: StokesExpansion
    # first-order bulk fields
    p1y: TermFunction
    p1yy: TermFunction
    p1xy: TermFunction
    # first-order traces and surface fields
    e1: TermFunction
    e1x: TermFunction
    e1xx: TermFunction
    t1x: TermFunction
    t1y: TermFunction
    t1xx: TermFunction
    t1xy: TermFunction
    # second-order bulk fields
    p2y: TermFunction
    p2yy: TermFunction
    p2xy: TermFunction
    # second-order traces and surface fields
    e2: TermFunction
    e2x: TermFunction
    t2x: TermFunction
    t2y: TermFunction
    t2xx: TermFunction
    t2xy: TermFunction
    pb2: float
    mu2: float


def make_b_context(wp: WaveParams, basis: FreqBasis,
                   se: StokesExpansion | None = None) -> BContext:
    if se is None:
        se = build_stokes(wp, basis=basis)
    phi1, phi2 = se.phi[0], se.phi[1]
    eta1, eta2 = se.eta[0], se.eta[1]
    p1y = phi1.diff_y()
    p2y = phi2.diff_y()
    return BContext(
        wp=wp,
        basis=basis,
        se=se,
        p1y=p1y,
        p1yy=p1y.diff_y(),
        p1xy=p1y.diff_x(),
        e1=eta1,
        e1x=eta1.diff_x(),
        e1xx=eta1.diff_x().diff_x(),
        t1x=phi1.diff_x().eval_y_at(1.0),
        t1y=p1y.eval_y_at(1.0),
        t1xx=phi1.diff_x().diff_x().eval_y_at(1.0),
        t1xy=p1y.diff_x().eval_y_at(1.0),
        p2y=p2y,
        p2yy=p2y.diff_y(),
        p2xy=p2y.diff_x(),
        e2=eta2,
        e2x=eta2.diff_x(),
        t2x=phi2.diff_x().eval_y_at(1.0),
        t2y=p2y.eval_y_at(1.0),
        t2xx=phi2.diff_x().diff_x().eval_y_at(1.0),
        t2xy=p2y.diff_x().eval_y_at(1.0),
        pb2=se.phibar[1],
        mu2=se.mu[2],
    )


def apply_B(order: tuple[int, int], ctx: BContext, sigma: float,
            u: StateVec) -> StateVec:
    if order == (1, 0):
        return _b10(ctx, sigma, u)
    if order == (2, 0):
        return _b20(ctx, u)
    if order == (0, 1):
        return _b01(ctx, sigma, u)
    if order == (1, 1):
        return _b11(ctx, sigma, u)
    if order == (0, 2):
        return _b02(ctx, sigma, u)
    raise UnsupportedOrderError(f"order {order} outside the supported set")


def _b10(ctx: BContext, sigma: float, u: StateVec) -> StateVec:
    mu0 = ctx.wp.mu0
    return StateVec(u.phi, -1.0 * u.ups - (2j * sigma / mu0) * u.phi, u.eta)


def _b20(ctx: BContext, u: StateVec) -> StateVec:
    z = TermFunction.zero(ctx.basis)
    return StateVec(z, (-1.0 / ctx.wp.mu0) * u.phi, z)


def _b01(ctx: BContext, sigma: float, u: StateVec) -> StateVec:
    mu0 = ctx.wp.mu0
    s = 1j * sigma
    phi, ups, eta = u.phi, u.ups, u.eta
    phi_y = phi.diff_y()
    phi_yy = phi_y.diff_y()
    ups_y = ups.diff_y()
    tr_phi = phi.eval_y_at(1.0)
    tr_phi_y = phi_y.eval_y_at(1.0)
    tr_ups = ups.eval_y_at(1.0)

    c1 = (
        s * multiply(ctx.t1x, phi)
        + multiply(ctx.e1x.mul_y() + ctx.t1y, phi_y)
        - multiply(ctx.p1y.mul_y(), tr_phi_y)
        + multiply(mu0 * ctx.t1x - s * ctx.t1y, ups)
        + s * multiply(ctx.p1y.mul_y(), eta)
    )
    c2 = (
        (1.0 / mu0**2) * multiply(
            (s * sigma**2) * ctx.t1y + (mu0 * sigma**2) * ctx.t1x - (mu0 * s) * ctx.t1xx,
            phi)
        - (1.0 / mu0) * multiply(ctx.t1xy + (2.0 * s) * ctx.t1y, phi_y)
        + (1.0 / mu0**2) * multiply(mu0 * ctx.t1x + (2.0 * mu0) * ctx.e1 - s * ctx.t1y,
                                    phi_yy)
        + (1.0 / mu0) * multiply(s * ctx.p1y.mul_y() - ctx.p1xy.mul_y(), tr_phi_y)
        + (1.0 / mu0) * multiply(s * ctx.t1xy - mu0 * ctx.t1xx - (mu0 * s) * ctx.t1x, ups)
        + multiply(ctx.e1x.mul_y() - ctx.t1y, ups_y)
        + (1.0 / mu0) * multiply(
            2.0 * ctx.p1yy + sigma**2 * ctx.p1y.mul_y() + s * ctx.p1xy.mul_y(), eta)
    )
    c3 = (
        s * multiply(ctx.e1x, tr_phi)
        + multiply(ctx.e1 - ctx.t1x, tr_phi_y)
        + mu0 * multiply(ctx.e1x, tr_ups)
        + multiply(ctx.t1y + s * ctx.t1x, eta)
    )
    return StateVec(c1, c2, c3)


def _b11(ctx: BContext, sigma: float, u: StateVec) -> StateVec:
    mu0 = ctx.wp.mu0
    s = 1j * sigma
    phi, ups, eta = u.phi, u.ups, u.eta
    phi_y = phi.diff_y()
    phi_yy = phi_y.diff_y()
    tr_phi = phi.eval_y_at(1.0)
    tr_phi_y = phi_y.eval_y_at(1.0)

    c1 = multiply(ctx.t1x, phi) - multiply(ctx.t1y, ups) + multiply(ctx.p1y.mul_y(), eta)
    c2 = (
        (1.0 / mu0**2) * multiply(
            (3.0 * sigma**2) * ctx.t1y - mu0 * ctx.t1xx - (2.0 * mu0 * s) * ctx.t1x, phi)
        - (2.0 / mu0) * multiply(ctx.t1y, phi_y)
        - (1.0 / mu0**2) * multiply(ctx.t1y, phi_yy)
        + (1.0 / mu0) * multiply(ctx.p1y.mul_y(), tr_phi_y)
        + (1.0 / mu0) * multiply(ctx.t1xy - mu0 * ctx.t1x, ups)
        + (1.0 / mu0) * multiply(ctx.p1xy.mul_y() - (2.0 * s) * ctx.p1y.mul_y(), eta)
    )
    c3 = multiply(ctx.e1x, tr_phi) + multiply(ctx.t1x, eta)
    return StateVec(c1, c2, c3)


def _b02(ctx: BContext, sigma: float, u: StateVec) -> StateVec:
    mu0 = ctx.wp.mu0
    s = 1j * sigma
    basis = ctx.basis
    phi, ups, eta = u.phi, u.ups, u.eta
    phi_y = phi.diff_y()
    phi_yy = phi_y.diff_y()
    ups_y = ups.diff_y()
    tr_phi = phi.eval_y_at(1.0)
    tr_phi_y = phi_y.eval_y_at(1.0)
    tr_ups = ups.eval_y_at(1.0)
    t1x, t1y, t1xx, t1xy = ctx.t1x, ctx.t1y, ctx.t1xx, ctx.t1xy
    t2x, t2y, t2xx, t2xy = ctx.t2x, ctx.t2y, ctx.t2xx, ctx.t2xy
    e1, e1x, e1xx = ctx.e1, ctx.e1x, ctx.e1xx
    e2, e2x = ctx.e2, ctx.e2x
    pb2 = TermFunction.const(basis, ctx.pb2)
    mu2 = TermFunction.const(basis, ctx.mu2)
    yp1y = ctx.p1y.mul_y()
    yp1xy = ctx.p1xy.mul_y()
    yp2y = ctx.p2y.mul_y()

    c1 = (
        s * multiply(multiply(t1x, t1x) + pb2 + t2x - multiply(t1y, e1x), phi)
        + multiply(t2y + multiply(t1x, t1y) - 2.0 * multiply(t1y, e1)
                   + e2x.mul_y() - multiply(e1, e1x).mul_y(), phi_y)
        + s * multiply(multiply(yp1y, e1x), tr_phi)
        + multiply(2.0 * multiply(e1, yp1y) - multiply(t1x, yp1y) - yp2y, tr_phi_y)
        + multiply(
            mu2 + mu0 * multiply(t1x, t1x) + mu0 * pb2 - multiply(t1y, t1y)
            + mu0 * t2x - s * t2y - mu0 * multiply(t1y, e1x)
            - s * multiply(t1x, t1y) + s * multiply(t1y, e1),
            ups)
        + mu0 * multiply(multiply(yp1y, e1x), tr_ups)
        + multiply(s * yp2y - multiply(yp1y, e1x) + multiply(t1y, yp1y)
                   + s * multiply(t1x, yp1y) - s * multiply(e1, yp1y), eta)
    )

    coef_phi = (
        (mu0**2 * sigma**2) * multiply(t1x, t1x)
        - (mu0 * sigma**2) * mu2
        - sigma**4 * multiply(t1y, t1y)
        + (mu0**2 * sigma**2) * pb2
        - (mu0**2 * s) * t2xx
        + (mu0 * sigma**2 * s) * t2y
        + (mu0 * sigma**2) * multiply(t1y, t1y)
        + (mu0**2 * sigma**2) * t2x
        + (mu0**2 * s) * multiply(t1xy, e1x)
        - (mu0**2 * s) * multiply(t1x, t1xx)
        + (mu0 * sigma**2) * multiply(t1y, t1xx)
        + (mu0 * sigma**2 * s) * multiply(t1x, t1y)
        - (mu0 * sigma**2 * s) * multiply(t1y, e1)
        - (mu0**2 * sigma**2) * multiply(t1y, e1x)
        + (mu0**2 * s) * multiply(t1y, e1xx)
    )
    coef_phiy = (
        (2.0 * sigma**2) * multiply(t1y, t1y)
        - mu0 * t2xy
        - (2.0 * mu0 * s) * t2y
        - mu0 * multiply(t1y, t1xx)
        + mu0 * multiply(t1y, e1x)
        + 2.0 * mu0 * multiply(e1, t1xy)
        - s * multiply(t1y, t1xy)
        - (2.0 * mu0 * s) * multiply(t1x, t1y)
        + (4.0 * mu0 * s) * multiply(t1y, e1)
    )
    coef_trphi = sigma**2 * multiply(yp1y, e1x) + s * multiply(e1x, yp1xy)
    coef_phiyy = (
        mu0**2 * t2x
        - mu0 * multiply(t1y, t1y)
        + (2.0 * mu0**2) * e2
        + mu0 * mu2
        - mu0**2 * multiply(t1y, t1y)
        - (3.0 * mu0**2) * multiply(e1, e1)
        + sigma**2 * multiply(t1y, t1y)
        + mu0**2 * pb2
        - (mu0 * s) * t2y
        - mu0**2 * multiply(t1y, e1x)
        - (2.0 * mu0**2) * multiply(t1x, e1)
        + (mu0 * s) * multiply(t1x, t1y)
        + (3.0 * mu0 * s) * multiply(t1y, e1)
    )
    coef_trphiy = (
        mu0 * multiply(t1y, ctx.p1y)
        - mu0 * ctx.p2xy.mul_y()
        + mu0 * multiply(e1x, ctx.p1yy.mul_y().mul_y())
        + mu0 * multiply(yp1y, e1x)
        - sigma**2 * multiply(t1y, yp1y)
        + 2.0 * mu0 * multiply(e1, yp1xy)
        + mu0 * multiply(t1y, ctx.p1yy.mul_y())
        - s * multiply(t1y, yp1xy)
        + (mu0 * s) * yp2y
        + (mu0 * s) * multiply(t1x, yp1y)
        - (2.0 * mu0 * s) * multiply(e1, yp1y)
    )
    coef_ups = (
        mu0**2 * multiply(t1y, e1xx)
        - mu0**2 * t2xx
        + 2.0 * mu0 * multiply(t1y, t1xy)
        - (mu0**2 * s) * t2x
        + mu0**2 * multiply(t1xy, e1x)
        - mu0**2 * multiply(t1x, t1xx)
        - sigma**2 * multiply(t1y, t1xy)
        - (mu0**2 * s) * multiply(t1x, t1x)
        - (mu0**2 * s) * pb2
        + (mu0 * s) * t2xy
        + (mu0**2 * s) * multiply(t1y, e1x)
        - (mu0 * s) * multiply(t1y, e1x)
        - (mu0 * s) * multiply(e1, t1xy)
    )
    coef_upsy = (
        2.0 * multiply(t1y, e1) - multiply(t1x, t1y) - t2y
        + e2x.mul_y() - multiply(e1, e1x).mul_y()
    )
    coef_trups = multiply(e1x, yp1xy) - s * multiply(yp1y, e1x)
    coef_eta = (
        2.0 * mu0 * ctx.p2yy
        - 2.0 * mu0 * multiply(t1x, ctx.p1yy)
        - 6.0 * mu0 * multiply(e1, ctx.p1yy)
        + (2.0 * s) * multiply(t1y, ctx.p1yy)
        - sigma**2 * multiply(t1y, yp1xy)
        + (mu0 * sigma**2) * yp2y
        - (mu0 * s) * multiply(t1y, ctx.p1y)
        + (mu0 * s) * ctx.p2xy.mul_y()
        - mu0 * multiply(e1x, yp1xy)
        + (sigma**2 * s) * multiply(t1y, yp1y)
        + mu0 * multiply(t1y, yp1xy)
        + (mu0 * sigma**2) * multiply(t1x, yp1y)
        - (mu0 * sigma**2) * multiply(e1, yp1y)
        - (mu0 * s) * multiply(e1, yp1xy)
        - (mu0 * s) * multiply(t1y, ctx.p1yy.mul_y())
        - (mu0 * s) * multiply(e1x, ctx.p1yy.mul_y().mul_y())
        - (mu0 * s) * multiply(t1y, yp1y)
    )
    c2 = (
        (1.0 / mu0**3) * multiply(coef_phi, phi)
        + (1.0 / mu0**2) * multiply(coef_phiy, phi_y)
        + (1.0 / mu0) * multiply(coef_trphi, tr_phi)
        + (1.0 / mu0**3) * multiply(coef_phiyy, phi_yy)
        + (1.0 / mu0**2) * multiply(coef_trphiy, tr_phi_y)
        + (1.0 / mu0**2) * multiply(coef_ups, ups)
        + multiply(coef_upsy, ups_y)
        + multiply(coef_trups, tr_ups)
        + (1.0 / mu0**2) * multiply(coef_eta, eta)
    )

    c3 = (
        s * multiply(e2x + 2.0 * multiply(t1x, e1x), tr_phi)
        + multiply(e2 - t2x - pb2 + multiply(t1x, e1) - multiply(t1x, t1x)
                   - multiply(e1, e1) + 2.0 * multiply(t1y, e1x), tr_phi_y)
        + multiply(mu0 * e2x + 2.0 * mu0 * multiply(t1x, e1x) - s * multiply(t1y, e1x),
                   tr_ups)
        + multiply(s * multiply(t1x, t1x) + t2y + multiply(t1x, t1y)
                   - 2.0 * multiply(t1y, e1) + s * pb2 + s * t2x
                   - s * multiply(t1y, e1x), eta)
    )
    return StateVec(c1, c2, c3)
