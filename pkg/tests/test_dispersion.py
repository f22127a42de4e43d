import math

import numpy as np
import pytest

from stokesevans.dispersion import (
    Regime,
    critical_point,
    gap,
    make_wave_params,
    resonance_sigma,
    roots_k,
    sigma_branches,
)


def test_mu0_value():
    wp = make_wave_params(1.0)
    assert wp.mu0 == pytest.approx(1.0 / math.tanh(1.0), rel=1e-15)
    assert wp.mu0 == pytest.approx(1.3130352855, rel=1e-9)
    assert wp.period == pytest.approx(2 * math.pi)


def test_mu0_small_kappa_limit():
    assert make_wave_params(1e-12).mu0 == pytest.approx(1.0, abs=1e-12)
    assert make_wave_params(1e-6).mu0 == pytest.approx(1.0 + 1e-12 / 3.0, rel=1e-6)


def test_invalid_kappa():
    with pytest.raises(ValueError):
        make_wave_params(0.0)
    with pytest.raises(ValueError):
        make_wave_params(-1.0)


def test_mu0_monotone():
    grid = np.linspace(0.2, 3.0, 15)
    vals = [make_wave_params(k).mu0 for k in grid]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert all(v > 1.0 for v in vals)


def test_sigma_branches_special_points():
    wp = make_wave_params(1.3)
    assert sigma_branches(wp, 0.0) == (0.0, 0.0)
    assert sigma_branches(wp, wp.kappa)[1] == pytest.approx(0.0, abs=1e-14)
    assert sigma_branches(wp, -wp.kappa)[0] == pytest.approx(0.0, abs=1e-14)


def test_branch_symmetry_property():
    wp = make_wave_params(0.9)
    for k in np.linspace(-4.0, 4.0, 17):
        sp, _ = sigma_branches(wp, k)
        _, sm = sigma_branches(wp, -k)
        assert sp == pytest.approx(-sm, abs=1e-13)


def test_critical_point():
    wp = make_wave_params(1.0)
    k_c, sigma_c = critical_point(wp)
    assert k_c < 0 < sigma_c
    # defining residual via a symmetric difference of sigma_+
    h = 1e-6
    d = (sigma_branches(wp, k_c + h)[0] - sigma_branches(wp, k_c - h)[0]) / (2 * h)
    assert abs(d) < 1e-9
    # double-root structure: sigma_+(k_c +- h) - sigma_c = O(h^2)
    h = 1e-4
    for sgn in (+1, -1):
        diff = sigma_branches(wp, k_c + sgn * h)[0] - sigma_c
        assert abs(diff) < 5.0 * h * h


def test_critical_gap_bracket():
    # at kappa = 1 the gap at the critical height lies strictly in (kappa, 2 kappa)
    wp = make_wave_params(1.0)
    _, sigma_c = critical_point(wp)
    g = gap(wp, sigma_c)
    assert wp.kappa < g < 2 * wp.kappa


def test_roots_at_zero():
    wp = make_wave_params(1.0)
    dp = roots_k(wp, 0.0)
    assert dp.regime == Regime.AT_ZERO
    assert dp.roots() == (-1.0, 1.0, 0.0, 0.0)


def test_roots_residuals():
    wp = make_wave_params(1.0)
    _, sigma_c = critical_point(wp)
    for mult in (0.5, 2.0):
        dp = roots_k(wp, mult * sigma_c)
        assert abs(sigma_branches(wp, dp.k2)[1] - dp.sigma) < 1e-12
        assert abs(sigma_branches(wp, dp.k4)[0] - dp.sigma) < 1e-12
        if dp.k1 is not None:
            assert abs(sigma_branches(wp, dp.k1)[0] - dp.sigma) < 1e-12
            assert abs(sigma_branches(wp, dp.k3)[0] - dp.sigma) < 1e-12
            assert dp.k1 < dp.k3 < 0 < dp.k4 < dp.k2
        else:
            assert 0 < dp.k4 < dp.k2


def test_roots_at_critical():
    wp = make_wave_params(1.0)
    k_c, sigma_c = critical_point(wp)
    dp = roots_k(wp, sigma_c)
    assert dp.regime == Regime.AT_CRITICAL
    assert dp.k1 == dp.k3 == k_c


def test_resonance_defining_residual():
    wp = make_wave_params(1.0)
    r2 = resonance_sigma(wp, 2)
    assert abs(r2.k2 - r2.k4 - 2.0) < 1e-12
    r3 = resonance_sigma(wp, 3)
    _, sigma_c = critical_point(wp)
    assert sigma_c < r2.sigma_n < r3.sigma_n


def test_resonance_requires_order_two():
    with pytest.raises(ValueError):
        resonance_sigma(make_wave_params(1.0), 1)


def test_gap_monotone_above_critical():
    wp = make_wave_params(1.2)
    _, sigma_c = critical_point(wp)
    grid = np.linspace(1.05 * sigma_c, 6.0, 12)
    vals = [gap(wp, s) for s in grid]
    assert all(b > a for a, b in zip(vals, vals[1:]))
