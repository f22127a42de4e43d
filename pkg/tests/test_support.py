import math

import mpmath as mp
import numpy as np
import pytest

from stokesevans.ddfloat import DD, DDComplex
from stokesevans.funcspace import TermFunction
from stokesevans.linsolve import MatchingError, solve_by_matching
from stokesevans.pseries import TSeries, det_series, exp_series
from stokesevans.rootfind import BracketError, bisect, bracketed_newton, grow_bracket


def test_dd_product_accuracy():
    # a product/sum combination that cancels at the double-precision level
    a = DD(1.0 + 2**-30)
    b = DD(1.0 - 2**-30)
    prod = a * b  # 1 - 2^-60, unrepresentable in one double
    resid = prod - DD(1.0)
    with mp.workdps(40):
        expected = float(mp.mpf(-1) / mp.mpf(2) ** 60)
    assert resid.hi + resid.lo == pytest.approx(expected, rel=1e-25)


def test_ddcomplex_division():
    z1 = DDComplex.from_complex(3.0 + 4.0j)
    z2 = DDComplex.from_complex(1.0 - 2.0j)
    q = z1 / z2
    assert complex(q) == pytest.approx((3 + 4j) / (1 - 2j), rel=1e-15)


def test_tseries_mul_truncation():
    a = TSeries(3, {(1, 0, 0): 1.0, (0, 1, 0): 2.0})
    b = TSeries(3, {(2, 0, 0): 1.0, (0, 0, 1): 1.0})
    c = a * b
    assert c.coeff(3, 0, 0) == 1.0
    assert c.coeff(1, 0, 1) == 1.0
    assert c.coeff(2, 1, 0) == 2.0
    assert c.coeff(0, 1, 1) == 2.0


def test_tseries_substitution():
    # f(v0) = v0^2 with v0 = gamma + eps -> gamma^2 + 2 gamma eps + eps^2
    f = TSeries(4, {(2, 0, 0): 1.0})
    s = TSeries(4, {(0, 1, 0): 1.0, (0, 0, 1): 1.0})
    g = f.subs0(s)
    assert g.coeff(0, 2, 0) == 1.0
    assert g.coeff(0, 1, 1) == 2.0
    assert g.coeff(0, 0, 2) == 1.0


def test_exp_series_value():
    s = exp_series(10, 1, 1j * 2.0)
    val = sum(v * 0.3 ** e[1] for e, v in s.c.items())
    assert val == pytest.approx(np.exp(1j * 2.0 * 0.3), rel=1e-9)


def test_det_series_2x2():
    one = TSeries.const(4, 1.0)
    d = TSeries.var(4, 0)
    M = [[one + d, TSeries.var(4, 1)], [TSeries.var(4, 2), one - d]]
    det = det_series(M)
    assert det.coeff(0, 0, 0) == 1.0
    assert det.coeff(2, 0, 0) == -1.0
    assert det.coeff(0, 1, 1) == -1.0


def test_solve_by_matching_simple(basis):
    # recover f with f'' - f = -2 cosh-ish data from a polynomial target
    target = TermFunction.monomial(basis, 1.0, y_power=2) + TermFunction.const(basis, 2.0)
    cands = [TermFunction.monomial(basis, 1.0, y_power=p) for p in range(4)]
    op = lambda f: f.diff_y().diff_y() + f
    sol = solve_by_matching(cands, [(op, target)])
    assert (op(sol) - target).max_abs_coeff() < 1e-12


def test_solve_by_matching_reports_failure(basis):
    target = TermFunction.monomial(basis, 1.0, y_power=3)
    cands = [TermFunction.const(basis, 1.0)]
    with pytest.raises(MatchingError):
        solve_by_matching(cands, [(lambda f: f, target)])


def test_bracketed_newton_quadratic():
    root = bracketed_newton(lambda x: x * x - 2.0, 0.0, 2.0,
                            df=lambda x: 2 * x, xtol=1e-15)
    assert root == pytest.approx(math.sqrt(2.0), rel=1e-14)


def test_bracketed_newton_requires_sign_change():
    with pytest.raises(BracketError):
        bracketed_newton(lambda x: 1.0 + x * x, -1.0, 1.0)


def test_bisect_and_grow():
    f = lambda x: x - 10.0
    lo, hi = grow_bracket(f, 0.0, 1.0)
    assert f(lo) * f(hi) <= 0
    assert bisect(f, lo, hi, xtol=1e-10) == pytest.approx(10.0, abs=1e-9)
