import numpy as np
import pytest

from stokesevans.dispersion import critical_point, make_wave_params, sigma_branches
from stokesevans.monodromy import (
    AbsentEntryError,
    a_closed,
    build_series,
    closed_entry,
    compare_with_closed,
    evans_value,
)


@pytest.fixture(scope="module")
def series_zero():
    return {k: build_series(make_wave_params(k), sigma=0.0, max_order=2,
                            use_closed=False) for k in (1.0, 1.5)}


@pytest.fixture(scope="module")
def series_res():
    return {k: build_series(make_wave_params(k), resonance_order=2,
                            orders=((1, 0), (0, 1), (0, 2)), use_closed=False)
            for k in (1.0, 1.5)}


@pytest.mark.parametrize("kappa", [1.0, 1.5])
def test_closed_vs_pipeline_zero(series_zero, kappa):
    diffs = compare_with_closed(series_zero[kappa])
    assert set(diffs) == {(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)}
    assert all(v < 1e-8 for v in diffs.values())


@pytest.mark.parametrize("kappa", [1.0, 1.5])
def test_closed_vs_pipeline_resonant(series_res, kappa):
    diffs = compare_with_closed(series_res[kappa])
    assert set(diffs) == {(1, 0), (0, 1)}
    assert all(v < 1e-8 for v in diffs.values())


def test_absent_entries_flagged():
    wp = make_wave_params(1.0)
    with pytest.raises(AbsentEntryError):
        closed_entry(wp, 2, 0, 0, 2)  # a "*" slot of the delta^2 block
    # printed neighbours resolve fine
    closed_entry(wp, 2, 0, 0, 0)
    with pytest.raises(AbsentEntryError):
        a_closed(wp, 0, 2, sigma=0.37)


def test_zero_sigma_flat_period_map(series_zero):
    # identity up to the shear entry T coupling the constant-potential pair
    ms = series_zero[1.0]
    expect = np.eye(4, dtype=complex)
    expect[3, 2] = ms.wp.period
    assert np.allclose(ms.coeffs[(0, 0)], expect, atol=1e-13)


def test_column4_vanishing(series_zero):
    # the constant-potential column stays invariant at every amplitude order
    ms = series_zero[1.0]
    for n in (1, 2):
        assert np.max(np.abs(ms.coeffs[(0, n)][:, 3])) < 1e-12


def test_conjugate_structure(series_zero):
    ms = series_zero[1.5]
    a20 = ms.coeffs[(2, 0)]
    assert a20[1, 1] == pytest.approx(np.conj(a20[0, 0]), rel=1e-12)


def test_resonant_structure(series_res):
    ms = series_res[1.5]
    T = ms.wp.period
    E = np.exp(1j * ms.resonance.k4 * T)
    A10 = ms.coeffs[(1, 0)]
    # diagonal of the delta block lies on the e^{i k4 T} ray
    for j in (0, 1):
        assert abs((A10[j, j] / E).imag) < 1e-10 * abs(A10[j, j])
    assert abs(A10[0, 1]) < 1e-10 and abs(A10[1, 0]) < 1e-10
    # the eps block vanishes at one period
    assert np.max(np.abs(ms.coeffs[(0, 1)])) < 1e-10
    # the eps^2 block lies on the i e^{i k4 T} ray
    A02 = ms.coeffs[(0, 2)]
    assert np.max(np.abs((A02 / (1j * E)).imag)) < 1e-9 * np.max(np.abs(A02))


def test_off_resonance_offdiagonals_nonzero():
    wp = make_wave_params(1.0)
    _, sigma_c = critical_point(wp)
    ms = build_series(wp, sigma=2.6 * sigma_c, max_order=1, orders=((0, 1),),
                      use_closed=False)
    A01 = ms.coeffs[(0, 1)]
    assert abs(A01[0, 1]) > 1e-3 and abs(A01[1, 0]) > 1e-3
    assert abs(A01[0, 0]) < 1e-12 and abs(A01[1, 1]) < 1e-12


def test_translation_invariance(series_zero):
    ms = series_zero[1.0]
    for K in (0, 1, 3):
        for eps in (0.01, 0.04):
            assert abs(evans_value(ms, 0.0, K * ms.wp.kappa, eps)) < 1e-12


def test_flat_state_roots_high(series_res):
    ms = series_res[1.0]
    sigma = ms.sigma
    for K in (0, 1, -2):
        for kj in (ms.resonance.k2, ms.resonance.k4):
            v = evans_value(ms, 1j * sigma, kj + K * ms.wp.kappa, 0.0)
            assert abs(v) < 1e-12


def test_dispersion_root_scaling(series_zero):
    # along the exact dispersion branch the truncated determinant decays
    # like gamma^5 near the travelling-mode root
    ms = series_zero[1.0]
    wp = ms.wp
    vals = []
    for gamma in (1e-2, 1e-3):
        lam = 1j * sigma_branches(wp, wp.kappa + gamma)[1]
        vals.append(abs(evans_value(ms, lam, wp.kappa + gamma, 0.0)))
    # frozen bounds comfortably inside the O(gamma^5) envelope
    assert vals[0] < 1e-9
    assert vals[1] < 1e-15


def test_provenance_overlay():
    wp = make_wave_params(1.0)
    ms = build_series(wp, sigma=0.0, max_order=1, use_closed=True)
    prov = ms.provenance[(1, 0)]
    assert prov[0, 0] == "closed-form"
    ms2 = build_series(wp, sigma=0.0, max_order=1, use_closed=False)
    assert ms2.provenance[(1, 0)][0, 0] == "pipeline"


def test_max_order_guard():
    with pytest.raises(ValueError):
        build_series(make_wave_params(1.0), sigma=0.0, max_order=3)


def test_validity_warning(series_zero):
    with pytest.warns(UserWarning):
        evans_value(series_zero[1.0], 0.2, 0.0, 0.0)


def test_double_quadrature_oracle_resonant(series_res):
    # pure floating-point Gauss-Legendre double integral vs the exact
    # term-algebra pipeline, on the full eps^2 block at the resonance
    from _quad_oracle import quad_entry
    from stokesevans.operator_b import make_b_context
    from stokesevans.reduction import build_forcing

    ms = series_res[1.5]
    pr = ms.projector
    bctx = make_b_context(ms.wp, pr.basis)
    A02 = ms.coeffs[(0, 2)]
    scale = np.max(np.abs(A02))
    for k in range(2):
        a_cols = {mn: cols[k] for mn, cols in ms.a_funcs.items() if mn != (0, 2)}
        w_low = {mn: cols[k] for mn, cols in ms.w_funcs.items()}
        f = build_forcing(bctx, pr, 0, 2, a_cols, w_low)
        for j in range(2):
            oracle = quad_entry(pr, f, j)
            assert abs(oracle - A02[j, k]) < 1e-8 * scale


def test_double_quadrature_oracle_zero_sigma(series_zero):
    # same oracle on the travelling rows of an unprinted "*" block at sigma 0
    from _quad_oracle import quad_entry
    from stokesevans.operator_b import make_b_context
    from stokesevans.reduction import build_forcing

    ms = series_zero[1.0]
    pr = ms.projector
    bctx = make_b_context(ms.wp, pr.basis)
    A11 = ms.coeffs[(1, 1)]
    scale = np.max(np.abs(A11))
    for k in (0, 2):
        a_cols = {mn: cols[k] for mn, cols in ms.a_funcs.items() if mn != (1, 1)}
        w_low = {mn: cols[k] for mn, cols in ms.w_funcs.items()}
        f = build_forcing(bctx, pr, 1, 1, a_cols, w_low)
        for j in (0, 1):
            oracle = quad_entry(pr, f, j)
            assert abs(oracle - A11[j, k]) < 1e-8 * scale
