import math

import numpy as np
import pytest

from stokesevans.funcspace import (
    KIND_CONST,
    KIND_COSH,
    KIND_SINH,
    FreqBasis,
    StateVec,
    TermFunction,
    UnsupportedDegreeError,
    fv,
    inner,
    integrate_x,
    integrate_y01,
    multiply,
    quad_oracle_inner,
    quad_oracle_y01,
)

from conftest import random_termfunction

KAPPA = 1.3


def test_cosh_square_identity(basis):
    f = TermFunction.monomial(basis, 1.0, y_kind=KIND_COSH, y_rate=fv(nk=1))
    g = multiply(f, f)
    terms = {(t.y_kind, tuple(t.y_rate)): t.coeff for t in g.terms()}
    assert terms[(KIND_CONST, fv())] == pytest.approx(0.5)
    assert terms[(KIND_COSH, fv(nk=2))] == pytest.approx(0.5)
    assert len(terms) == 2


def test_exponential_cancellation(basis):
    f = TermFunction.monomial(basis, 1.0, x_freq=fv(nk=1))
    g = TermFunction.monomial(basis, 1.0, x_freq=fv(nk=-1))
    prod = multiply(f, g)
    assert prod.const_value() == pytest.approx(1.0)


def test_ysinh_cosh_identity(basis):
    f = TermFunction.monomial(basis, 1.0, y_power=1, y_kind=KIND_SINH, y_rate=fv(nk=1))
    g = TermFunction.monomial(basis, 1.0, y_kind=KIND_COSH, y_rate=fv(nk=1))
    prod = multiply(f, g)
    terms = list(prod.terms())
    assert len(terms) == 1
    t = terms[0]
    assert (t.y_power, t.y_kind, tuple(t.y_rate)) == (1, KIND_SINH, fv(nk=2))
    assert t.coeff == pytest.approx(0.5)


def test_product_degree_cap(basis):
    f = TermFunction.monomial(basis, 1.0, y_power=3)
    g = multiply(f, f)  # power 6: allowed
    assert len(g) == 1
    with pytest.raises(UnsupportedDegreeError):
        multiply(g, f)


def test_integrate_y01_const(basis):
    assert integrate_y01(TermFunction.const(basis, 1.0)) == pytest.approx(1.0)


def test_integrate_y01_cosh(basis):
    f = TermFunction.monomial(basis, 1.0, y_kind=KIND_COSH, y_rate=fv(nk=1))
    assert integrate_y01(f) == pytest.approx(math.sinh(KAPPA) / KAPPA, rel=1e-14)


def test_integrate_y01_ysinh_vs_quadrature(basis):
    # oracle value frozen from the 64-node Gauss-Legendre rule
    f = TermFunction.monomial(basis, 1.0, y_power=1, y_kind=KIND_SINH, y_rate=fv(nk=1))
    closed = integrate_y01(f)
    expected = (KAPPA * math.cosh(KAPPA) - math.sinh(KAPPA)) / KAPPA**2
    assert closed == pytest.approx(expected, rel=1e-14)
    assert closed == pytest.approx(quad_oracle_y01(f), rel=1e-13)


def test_integrate_y01_randomized_vs_quadrature(basis):
    rng = np.random.default_rng(7)
    for _ in range(25):
        p = int(rng.integers(0, 4))
        kind = int(rng.choice([KIND_COSH, KIND_SINH]))
        n = int(rng.integers(1, 16))  # rates up to ~20
        f = TermFunction.monomial(basis, rng.standard_normal() + 1j * rng.standard_normal(),
                                  y_power=p, y_kind=kind, y_rate=fv(nk=n))
        closed = integrate_y01(f)
        oracle = quad_oracle_y01(f)
        assert abs(closed - oracle) <= 1e-12 * max(abs(oracle), 1e-6)


def test_integrate_y01_small_rate_branch():
    # a realized rate near zero must route through the series branch smoothly
    b = FreqBasis(kappa=1.0 + 1e-9)
    f = TermFunction.monomial(b, 1.0, y_power=1, y_kind=KIND_COSH, y_rate=fv(n1=1, nk=-1))
    val = integrate_y01(f)
    assert val == pytest.approx(0.5, abs=1e-9)


def test_integrate_x_constant(basis):
    f = TermFunction.const(basis, 1.0)
    prim = integrate_x(f)
    terms = list(prim.terms())
    assert len(terms) == 1 and terms[0].x_power == 1
    assert prim.eval(0.7, 0.0) == pytest.approx(0.7)


def test_integrate_x_full_period(basis):
    T = 2 * math.pi / KAPPA
    f = TermFunction.monomial(basis, 1.0, x_freq=fv(nk=1))
    assert abs(integrate_x(f, upper=T).const_value()) < 1e-14


def test_integrate_x_resonant_branch():
    # with k2 - k4 = N kappa active, e^{i(k2-k4)x} sin(N kappa x) integrates to
    # the secular branch i x / 2 + (1 - e^{2 i N kappa x}) / (4 N kappa)
    N, kap = 2, 1.0
    b = FreqBasis(kappa=kap, k2=2.26, k4=0.26, resonance_order=N)
    expo = TermFunction.monomial(b, 1.0, x_freq=fv(n2=1, n4=-1))
    sin_n = (TermFunction.monomial(b, 1 / 2j, x_freq=fv(nk=N))
             + TermFunction.monomial(b, -1 / 2j, x_freq=fv(nk=-N)))
    prim = integrate_x(multiply(expo, sin_n))
    for x in (0.3, 1.1, 2.9):
        expected = 0.5j * x + (1 - np.exp(2j * N * kap * x)) / (4 * N * kap)
        assert prim.eval(x, 0.0) == pytest.approx(expected, rel=1e-13)


def test_resonance_zero_test_exact():
    b = FreqBasis(kappa=1.0, k2=2.26, k4=0.26, resonance_order=2)
    v = tuple(a - b_ for a, b_ in zip(fv(n2=1, n4=-1), fv(nk=2)))
    assert b.canon(v) == fv()
    assert b.is_zero(v)


def test_integrate_then_differentiate(basis):
    rng = np.random.default_rng(3)
    for _ in range(10):
        f = random_termfunction(basis, rng)
        back = integrate_x(f).diff_x()
        for x, y in ((0.2, 0.3), (1.7, 0.9)):
            a, b_ = f.eval(x, y), back.eval(x, y)
            assert abs(a - b_) <= 1e-12 * max(1.0, abs(a))


def test_closure_under_operations(basis):
    rng = np.random.default_rng(11)
    for _ in range(8):
        f = random_termfunction(basis, rng, n_terms=4, max_p=2)
        g = random_termfunction(basis, rng, n_terms=4, max_p=1)
        for h in (multiply(f, g), f.diff_x(), f.diff_y(), integrate_x(f)):
            # canonical form is idempotent and evaluation is finite
            again = TermFunction(basis, dict(h._t))
            assert (again - h).max_abs_coeff() < 1e-13 * max(h.max_abs_coeff(), 1.0)
            assert np.isfinite(h.eval(0.37, 0.61))


def test_canonicalization_rules(basis):
    # sinh with zero rate drops; cosh with zero rate becomes a constant
    f = TermFunction.monomial(basis, 2.0, y_kind=KIND_SINH, y_rate=fv())
    assert f.is_zero()
    g = TermFunction.monomial(basis, 2.0, y_kind=KIND_COSH, y_rate=fv())
    t = list(g.terms())[0]
    assert t.y_kind == KIND_CONST
    # negative rates are sign-normalized (sinh is odd)
    h1 = TermFunction.monomial(basis, 1.0, y_kind=KIND_SINH, y_rate=fv(nk=-1))
    h2 = TermFunction.monomial(basis, -1.0, y_kind=KIND_SINH, y_rate=fv(nk=1))
    assert (h1 - h2).max_abs_coeff() == 0.0


def test_prune_threshold(basis):
    f = (TermFunction.const(basis, 1.0)
         + TermFunction.monomial(basis, 1e-16, y_kind=KIND_COSH, y_rate=fv(nk=1)))
    assert len(f) == 1


def test_inner_eta_only(basis):
    u = StateVec.make(basis, TermFunction.zero(basis), TermFunction.zero(basis), 1.0)
    assert inner(u, u) == pytest.approx(1.0)


def test_inner_cosh_identity(basis):
    # b carries kappa = 1: int (cosh^2 + sinh^2) dy = sinh(2)/2
    b = FreqBasis(kappa=1.0)
    phi = TermFunction.monomial(b, 1.0, y_kind=KIND_COSH, y_rate=fv(nk=1))
    u = StateVec(phi, TermFunction.zero(b), TermFunction.zero(b))
    assert inner(u, u) == pytest.approx(math.sinh(2.0) / 2.0, rel=1e-13)
    assert quad_oracle_inner(u, u) == pytest.approx(math.sinh(2.0) / 2.0, rel=1e-12)


def test_quad_oracle_inner_agreement(basis):
    rng = np.random.default_rng(5)
    for _ in range(6):
        u = StateVec(random_termfunction(basis, rng, x=False),
                     random_termfunction(basis, rng, x=False),
                     TermFunction.const(basis, rng.standard_normal() + 1j * rng.standard_normal()))
        v = StateVec(random_termfunction(basis, rng, x=False),
                     random_termfunction(basis, rng, x=False),
                     TermFunction.const(basis, rng.standard_normal()))
        a = inner(u, v)
        b_ = quad_oracle_inner(u, v, nodes=64)
        assert abs(a - b_) <= 1e-12 * max(1.0, abs(a))


def test_quad_oracle_zero_statevec(basis):
    z = StateVec.zero(basis)
    assert quad_oracle_inner(z, z) == 0.0


def test_quad_oracle_node_floor(basis):
    z = StateVec.zero(basis)
    with pytest.raises(ValueError):
        quad_oracle_inner(z, z, nodes=8)


def _resonant_basis():
    from stokesevans.dispersion import make_wave_params, resonance_sigma

    wp = make_wave_params(1.0)
    r = resonance_sigma(wp, 2)
    return FreqBasis(kappa=1.0, k2=r.k2, k4=r.k4, resonance_order=2)


def test_resonant_lattice_randomized_properties():
    b = _resonant_basis()
    rng = np.random.default_rng(31)
    for _ in range(12):
        f = TermFunction.zero(b)
        for _ in range(4):
            f = f + TermFunction.monomial(
                b, rng.standard_normal() + 1j * rng.standard_normal(),
                x_freq=fv(nk=int(rng.integers(-2, 3)), n2=int(rng.integers(-1, 2)),
                          n4=int(rng.integers(-1, 2))),
                y_power=int(rng.integers(0, 3)),
                y_kind=int(rng.choice([KIND_COSH, KIND_SINH])),
                y_rate=fv(nk=int(rng.integers(0, 2)), n2=int(rng.integers(0, 2)),
                          n4=int(rng.integers(0, 2))),
            )
        # canonical form is idempotent on the constrained lattice
        again = TermFunction(b, dict(f._t))
        assert (again - f).max_abs_coeff() < 1e-13 * max(f.max_abs_coeff(), 1.0)
        # y-integration against the quadrature oracle
        fy = f.eval_x_at(0.83)
        closed = integrate_y01(fy)
        oracle = quad_oracle_y01(fy)
        assert abs(closed - oracle) <= 1e-11 * max(abs(oracle), 1.0)
        # running x-integral inverts differentiation, secular branches included
        back = integrate_x(f).diff_x()
        for x, y in ((0.4, 0.2), (2.3, 0.8)):
            assert abs(back.eval(x, y) - f.eval(x, y)) <= 1e-11 * max(
                1.0, abs(f.eval(x, y)))


def test_resonant_conjugation_consistency():
    # conjugation must commute with canonicalization under the constraint
    b = _resonant_basis()
    f = TermFunction.monomial(b, 2.0 + 1.0j, x_freq=fv(n2=1, n4=-1))  # == e^{2ikx}
    g = f.conj()
    t = list(g.terms())[0]
    assert b.value(t.x_freq) == pytest.approx(-2.0 * b.kappa)
    assert t.coeff == pytest.approx(2.0 - 1.0j)
