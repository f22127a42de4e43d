import pytest

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

from stokesevans.dispersion import make_wave_params
from stokesevans.funcspace import (
    KIND_COSH,
    KIND_SINH,
    FreqBasis,
    StateVec,
    TermFunction,
    fv,
)


@pytest.fixture
def basis():
    return FreqBasis(kappa=1.3)


@pytest.fixture
def wp():
    return make_wave_params(1.3)


def random_termfunction(basis, rng, n_terms=6, max_p=3, x=True):
    """Random in-class function with rates on the kappa sub-lattice."""
    f = TermFunction.zero(basis)
    for _ in range(n_terms):
        coeff = rng.standard_normal() + 1j * rng.standard_normal()
        kind = rng.choice([0, KIND_COSH, KIND_SINH])
        rate = fv(nk=int(rng.integers(1, 4))) if kind else fv()
        xf = fv(nk=int(rng.integers(-2, 3))) if x else fv()
        f = f + TermFunction.monomial(
            basis, coeff,
            x_power=int(rng.integers(0, 2)) if x else 0,
            x_freq=xf,
            y_power=int(rng.integers(0, max_p + 1)),
            y_kind=int(kind),
            y_rate=rate,
        )
    return f


def random_dom_vec(basis, rng, n=3):
    """Random state vector satisfying the domain conditions."""
    phi = TermFunction.zero(basis)
    ups = TermFunction.zero(basis)
    for _ in range(n):
        c1 = rng.standard_normal() + 1j * rng.standard_normal()
        c2 = rng.standard_normal() + 1j * rng.standard_normal()
        # cosh rates and even powers keep phi_y(0) = 0
        phi = phi + TermFunction.monomial(basis, c1, y_kind=KIND_COSH,
                                          y_rate=fv(nk=int(rng.integers(1, 4))))
        phi = phi + TermFunction.monomial(basis, 0.3 * c2, y_power=2)
        ups = ups + TermFunction.monomial(basis, c2, y_kind=KIND_COSH,
                                          y_rate=fv(nk=int(rng.integers(1, 4))))
        ups = ups + TermFunction.monomial(basis, 0.2 * c1, y_power=int(rng.integers(0, 3)))
    return StateVec(phi, ups, ups.eval_y_at(1.0))


def random_adjoint_dom_vec(basis, rng, mu0, n=3):
    """Random state vector in the adjoint domain: ups(1) + mu0 eta = 0."""
    v = random_dom_vec(basis, rng, n)
    eta = (-1.0 / mu0) * v.ups.eval_y_at(1.0)
    return StateVec(v.phi, v.ups, eta)
