import numpy as np
import pytest

from stokesevans.dispersion import make_wave_params
from stokesevans.funcspace import fv
from stokesevans.stokes import build_stokes, eval_wave, stokes_residual


def test_first_order_fields():
    wp = make_wave_params(1.3)
    se = build_stokes(wp)
    assert se.phibar[0] == 0.0
    # phi1 = sin(kx) cosh(ky): two exponential terms of coefficient 1/(2i)
    t = {tuple(term.x_freq): term.coeff for term in se.phi[0].terms()}
    assert t[fv(nk=1)] == pytest.approx(-0.5j)
    assert t[fv(nk=-1)] == pytest.approx(0.5j)
    # eta1 amplitude sinh(kappa) on cos(kx)
    e = {tuple(term.x_freq): term.coeff for term in se.eta[0].terms()}
    assert e[fv(nk=1)] == pytest.approx(wp.s / 2)


def test_second_order_eta_amplitude():
    wp = make_wave_params(1.3)
    se = build_stokes(wp)
    e = {tuple(term.x_freq): term.coeff for term in se.eta[1].terms()}
    assert e[fv(nk=2)] == pytest.approx(wp.mu0 / 4 * (2 * wp.s**2 + 3) / 2, rel=1e-14)
    assert se.mu[1] == 0.0


def test_mu2_value():
    wp = make_wave_params(1.3)
    se = build_stokes(wp)
    s = wp.s
    expected = -wp.mu0**3 * (8 * s**4 + 12 * s**2 + 9) / (8 * (s**2 + 1))
    assert se.mu[2] == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("kappa,order,tol", [
    (1.0, 1, 1e-11), (1.0, 2, 1e-10), (0.8, 3, 1e-9), (1.5, 3, 1e-9),
])
def test_residuals(kappa, order, tol):
    se = build_stokes(make_wave_params(kappa))
    assert stokes_residual(se, order) < tol


def test_residuals_across_kappa_grid():
    for kappa in np.linspace(0.5, 2.5, 10):
        se = build_stokes(make_wave_params(kappa))
        for order in (1, 2, 3):
            assert stokes_residual(se, order) < 1e-9


def test_eta_zero_mean():
    se = build_stokes(make_wave_params(1.1))
    for i in (0, 1, 2):
        dc = [t for t in se.eta[i].terms() if se.basis.is_zero(t.x_freq)]
        assert dc == []


def test_parity_signatures():
    # phi holds only sine content (coefficients odd under frequency flip),
    # eta only cosine content (even under the flip)
    se = build_stokes(make_wave_params(1.4))
    for i in (0, 1, 2):
        phi_terms = {(tuple(t.x_freq), t.y_power, t.y_kind, tuple(t.y_rate)): t.coeff
                     for t in se.phi[i].terms()}
        for (xf, p, kind, yr), cval in phi_terms.items():
            mirror = tuple(-v for v in xf)
            assert phi_terms[(mirror, p, kind, yr)] == pytest.approx(-cval, rel=1e-12)
        eta_terms = {tuple(t.x_freq): t.coeff for t in se.eta[i].terms()}
        for xf, cval in eta_terms.items():
            mirror = tuple(-v for v in xf)
            assert eta_terms[mirror] == pytest.approx(cval, rel=1e-12)


def test_eval_wave_zero_amplitude():
    wp = make_wave_params(1.0)
    se = build_stokes(wp)
    phi, u, eta, mu = eval_wave(se, 0.0, 0.4, 0.6)
    assert (phi, u, eta) == (0.0, 0.0, 0.0)
    assert mu == wp.mu0


def test_eval_wave_crest_height():
    wp = make_wave_params(1.2)
    se = build_stokes(wp)
    eps = 0.05
    _, _, eta, _ = eval_wave(se, eps, 0.0, 1.0)
    s, mu0 = wp.s, wp.mu0
    # crest value is the sum of the cosine amplitudes at x = 0
    eta3_crest = (mu0**2 * (24 * s**6 + 72 * s**4 + 72 * s**2 + 27) / (64 * (s**3 + s))
                  + mu0**2 * s * (5 * s**4 + 13 * s**2 + 6) / (8 * (s**2 + 1)))
    expected = eps * s + eps**2 * mu0 / 4 * (2 * s**2 + 3) + eps**3 * eta3_crest
    assert eta == pytest.approx(expected, rel=1e-12)


def test_eval_wave_oddness():
    se = build_stokes(make_wave_params(1.0))
    p1, _, _, _ = eval_wave(se, 0.05, 0.3, 0.5)
    p2, _, _, _ = eval_wave(se, 0.05, -0.3, 0.5)
    assert p1 + p2 == pytest.approx(0.0, abs=1e-14)


def test_eval_wave_validity_warning():
    se = build_stokes(make_wave_params(1.0))
    with pytest.warns(UserWarning):
        eval_wave(se, 0.2, 0.0, 1.0)


def test_rederivation_guard_runs():
    # the build itself performs the transcription-vs-solve comparison
    build_stokes(make_wave_params(0.6))
    build_stokes(make_wave_params(2.4))
