import numpy as np
import pytest

from stokesevans.dispersion import make_wave_params, resonance_sigma, roots_k
from stokesevans.eigensystem import basis_for, modes_at, project
from stokesevans.evalkernel import eval_terms
from stokesevans.funcspace import StateVec, TermFunction, fv
from stokesevans.operator_b import make_b_context
from stokesevans.reduction import (
    SequencingError,
    build_forcing,
    pde_residuals,
    regression_w01_high,
    solve_w,
    w_anchor_zero_01,
    w_anchor_zero_10,
)
from stokesevans.stokes import collocation_grid

from _fd import fd_oracle_group


@pytest.fixture(scope="module")
def zero_setting():
    wp = make_wave_params(1.3)
    pr = modes_at(wp, 0.0)
    ctx = make_b_context(wp, pr.basis)
    b = pr.basis
    zero = TermFunction.zero(b)
    one = TermFunction.const(b, 1.0)
    xfun = TermFunction.monomial(b, 1.0, x_power=1)
    em = TermFunction.monomial(b, 1.0, x_freq=fv(nk=-1))
    ep = TermFunction.monomial(b, 1.0, x_freq=fv(nk=1))
    a00 = [[em, zero, zero, zero], [zero, ep, zero, zero],
           [zero, zero, one, xfun], [zero, zero, zero, one]]
    return wp, pr, ctx, a00


def _vec_diff(a: StateVec, b: StateVec) -> float:
    return max((a.phi - b.phi).max_abs_coeff(),
               (a.ups - b.ups).max_abs_coeff(),
               (a.eta - b.eta).max_abs_coeff())


@pytest.mark.parametrize("mn", [(1, 0), (0, 1)])
def test_zero_sigma_anchors(zero_setting, mn):
    wp, pr, ctx, a00 = zero_setting
    anchor_fn = w_anchor_zero_10 if mn == (1, 0) else w_anchor_zero_01
    for k in range(4):
        f = build_forcing(ctx, pr, mn[0], mn[1], {(0, 0): a00[k]}, {})
        wc = solve_w(pr, f, k=k, m=mn[0], n=mn[1])
        anchor = anchor_fn(wp, pr.basis, k + 1)
        scale = max(anchor.max_abs_coeff(), 1.0)
        assert _vec_diff(wc.w, anchor) < 1e-10 * scale
        assert max(pde_residuals(pr, wc).values()) < 1e-10 * max(scale, 1.0)


def test_vanishing_corrections(zero_setting):
    wp, pr, ctx, a00 = zero_setting
    for mn in ((1, 0), (0, 1)):
        f = build_forcing(ctx, pr, mn[0], mn[1], {(0, 0): a00[3]}, {})
        wc = solve_w(pr, f, k=3, m=mn[0], n=mn[1])
        assert wc.w.phi.is_zero() and wc.w.ups.is_zero() and wc.w.eta.is_zero()


def test_forcing_sequencing(zero_setting):
    # second-order forcing without first-order data is a sequencing error
    wp, pr, ctx, a00 = zero_setting
    with pytest.raises(SequencingError):
        build_forcing(ctx, pr, 1, 1, {(0, 0): a00[0]}, {})
    f10 = build_forcing(ctx, pr, 1, 0, {(0, 0): a00[0]}, {})
    w10 = solve_w(pr, f10, k=0, m=1, n=0)
    with pytest.raises(SequencingError):
        build_forcing(ctx, pr, 1, 1, {(0, 0): a00[0]}, {(1, 0): w10.w})


def test_complement_and_domain(zero_setting):
    wp, pr, ctx, a00 = zero_setting
    f = build_forcing(ctx, pr, 0, 1, {(0, 0): a00[0]}, {})
    wc = solve_w(pr, f, k=0, m=0, n=1)
    coeffs = project(pr, StateVec(wc.w.phi.eval_x_at(0.3),
                                  wc.w.ups.eval_x_at(0.3),
                                  wc.w.eta.eval_x_at(0.3)))
    assert np.max(np.abs(coeffs)) < 1e-10
    assert wc.w.dom_residual() < 1e-12


def test_pde_residual_on_collocation_grid(zero_setting):
    wp, pr, ctx, a00 = zero_setting
    f = build_forcing(ctx, pr, 0, 1, {(0, 0): a00[1]}, {})
    wc = solve_w(pr, f, k=1, m=0, n=1)
    g = pr.apply_complement_x(wc.forcing)
    resid = (wc.w.phi.diff_x().diff_x() + wc.w.phi.diff_y().diff_y()
             - (g.phi.diff_x() + wp.mu0 * g.ups))
    X, Y = collocation_grid(wp)
    vals = eval_terms(resid.encode(), X, Y)
    assert np.max(np.abs(vals)) < 1e-9


def test_resonant_regression_closed_form():
    report = regression_w01_high(make_wave_params(1.0), resonance_order=2)
    assert report["max_coeff_discrepancy_rel"] < 1e-8
    assert report["complement"] < 1e-10
    assert report["trace_identity"] < 1e-12
    assert report["pde_residual"] < 1e-9


def test_fd_oracle_agreement():
    # Fourier-in-x / finite-differences-in-y oracle on one frequency group
    wp = make_wave_params(1.0)
    res = resonance_sigma(wp, 2)
    dp = roots_k(wp, res.sigma_n)
    basis = basis_for(wp, dp, resonance_order=2)
    pr = modes_at(wp, res.sigma_n, basis=basis, dp=dp)
    ctx = make_b_context(wp, basis)
    e2 = TermFunction.monomial(basis, 1.0, x_freq=fv(n2=1))
    zero = TermFunction.zero(basis)
    f = build_forcing(ctx, pr, 0, 1, {(0, 0): [e2, zero]}, {})
    wc = solve_w(pr, f, k=0, m=0, n=1)
    xf = basis.canon(fv(n2=1, nk=1))  # the resonant-side group k2 + kappa
    y, fd = fd_oracle_group(pr, wc.forcing, xf, n=400)
    sub = {key: v for key, v in wc.w.phi._t.items() if key[1] == xf}
    grp = TermFunction(basis, sub, _canonical=True)
    ours = np.array([grp.eval(0.0, float(yv)) for yv in y])
    scale = np.max(np.abs(ours))
    assert np.max(np.abs(ours - fd)) < 1e-6 * scale


def test_translation_column_forcing_vanishes(zero_setting):
    # the constant-potential column produces an exactly zero forcing
    wp, pr, ctx, a00 = zero_setting
    f = build_forcing(ctx, pr, 0, 1, {(0, 0): a00[3]}, {})
    assert f.max_abs_coeff() == 0.0
