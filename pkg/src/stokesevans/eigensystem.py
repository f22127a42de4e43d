"""The flat-state operator L(lambda), its modes, adjoints, and projections.

At zero amplitude the spectral problem reduces to an eigenvalue problem for

    L(lambda) u = (lambda*phi + mu0*ups,
                   -(phi_yy + lambda^2 phi + mu0*lambda*ups)/mu0,
                   [lambda*eta - phi_y]_{y=1})

on the domain eta - ups(1) = 0, phi_y(0) = 0.  For lambda = i*sigma its
purely imaginary eigenvalues are i*k_j(sigma) with k_j the dispersion roots;
the eigenfunctions are cosh profiles, and the adjoint eigenfunctions (with
respect to the H1 x L2 x C pairing) combine a cosh(y) tail with a
cosh(k_j y) core.  Biorthogonal mode/adjoint pairs define the spectral
projection onto the finite-dimensional reduced space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dispersion import DispersionPoint, Regime, WaveParams, roots_k
from .funcspace import (
    KIND_COSH,
    KIND_SINH,
    FreqBasis,
    StateVec,
    TermFunction,
    fv,
    inner,
    inner_x,
    norm,
)

_KAPPA_ONE_TOL = 1e-6
_BIORTH_ABORT = 1e-8


@dataclass(frozen=True)
class ModePair:
    """Eigenfunction and adjoint eigenfunction for one dispersion root."""

    j: int
    k_j: float
    y_rate: tuple  # lattice vector realizing k_j as a y-rate
    phi: StateVec
    psi: StateVec


@dataclass(frozen=True)
class Projector:
    """Spectral projection u -> sum_j <u, psi_j> phi_j at lambda = i*sigma."""

    sigma: float
    wp: WaveParams
    basis: FreqBasis
    modes: tuple[ModePair, ...]

    def coefficients(self, u: StateVec) -> np.ndarray:
        return np.array([inner(u, m.psi) for m in self.modes])

    def coefficients_x(self, u: StateVec) -> list[TermFunction]:
        return [inner_x(u, m.psi) for m in self.modes]

    def apply(self, u: StateVec) -> StateVec:
        out = StateVec.zero(self.basis)
        for c, m in zip(self.coefficients(u), self.modes):
            out = out + c * m.phi
        return out

    def apply_complement_x(self, u: StateVec) -> StateVec:
        """(1 - Pi) u for x-dependent u."""
        out = u
        for cx, m in zip(self.coefficients_x(u), self.modes):
            out = out - m.phi.scale_x(cx)
        return out


def project(pr: Projector, u: StateVec) -> np.ndarray:
    return pr.coefficients(u)


# ---------------------------------------------------------------------------
# the operator and its adjoint correction
# ---------------------------------------------------------------------------

def apply_L(wp: WaveParams, lam: complex, u: StateVec,
            check_domain: bool = True) -> StateVec:
    """L(lambda) applied through the term algebra."""
    if check_domain:
        scale = max(u.max_abs_coeff(), 1.0)
        if u.dom_residual() > 1e-9 * scale:
            raise ValueError("state vector violates the domain conditions")
    mu0 = wp.mu0
    phi, ups, eta = u.phi, u.ups, u.eta
    c1 = lam * phi + mu0 * ups
    c2 = (-1.0 / mu0) * (phi.diff_y().diff_y() + (lam * lam) * phi + (mu0 * lam) * ups)
    c3 = lam * eta - phi.diff_y().eval_y_at(1.0)
    return StateVec(c1, c2, c3)


def apply_L_adjoint(wp: WaveParams, lam: complex, u: StateVec) -> StateVec:
    """Adjoint of L(lambda) in the energy pairing, with the phi correction.

    Valid for u in the adjoint domain ups(1) + mu0*eta = 0, phi_y(0) = 0.
    The first component carries the nonlocal correction phi_p solving
    phi_p'' - phi_p = (1 + conj(lambda)^2) ups / mu0 with Neumann ends, which
    restores continuity of the pairing in the H1 slot.
    """
    mu0 = wp.mu0
    ls = np.conj(lam)
    phi, ups, eta = u.phi, u.ups, u.eta
    c1 = ls * phi + (1.0 / mu0) * ups + _phi_correction(wp, ls, ups)
    c2 = mu0 * phi - mu0 * phi.diff_y().diff_y() - ls * ups
    c3 = mu0 * phi.diff_y().eval_y_at(1.0) + ls * eta
    return StateVec(c1, c2, c3)


def _phi_correction(wp: WaveParams, ls: complex, ups: TermFunction) -> TermFunction:
    """Neumann solve of phi_p'' - phi_p = (1+ls^2)/mu0 * ups in the algebra."""
    basis = ups.basis
    rhs = ((1.0 + ls * ls) / wp.mu0) * ups
    # particular + homogeneous cosh(y); coefficients per (y_power, kind, rate) block
    # solve (d_yy - 1) phi_p = rhs by undetermined coefficients
    from .linsolve import solve_by_matching

    def op(f: TermFunction) -> TermFunction:
        return f.diff_y().diff_y() - f

    cands = _second_order_candidates(basis, rhs)
    phi_p = solve_by_matching(
        cands,
        [(op, rhs)],
        extra_rows=[
            (lambda f: f.diff_y().eval_y_at(1.0), TermFunction.zero(basis)),
            (lambda f: f.diff_y().eval_y_at(0.0), TermFunction.zero(basis)),
        ],
    )
    return phi_p


def _second_order_candidates(basis: FreqBasis, rhs: TermFunction) -> list[TermFunction]:
    sigs = set()
    for t in rhs.terms():
        for p in range(t.y_power + 2):
            sigs.add((t.x_power, tuple(t.x_freq), p, KIND_COSH, tuple(t.y_rate)))
            sigs.add((t.x_power, tuple(t.x_freq), p, KIND_SINH, tuple(t.y_rate)))
        sigs.add((t.x_power, tuple(t.x_freq), 0, KIND_COSH, fv(n1=1)))
        sigs.add((t.x_power, tuple(t.x_freq), 0, KIND_SINH, fv(n1=1)))
    return [
        TermFunction.monomial(basis, 1.0, x_power=q, x_freq=xf, y_power=p, y_kind=kind, y_rate=yr)
        for (q, xf, p, kind, yr) in sorted(sigs)
    ]


# ---------------------------------------------------------------------------
# modes
# ---------------------------------------------------------------------------

def _mode_phi(basis: FreqBasis, mu0: float, sigma: float, k: float, rate: tuple) -> StateVec:
    """Eigenfunction (mu0 cosh(ky), i(k-sigma) cosh(ky), i(k-sigma) cosh(k))."""
    phi = TermFunction.monomial(basis, mu0, y_kind=KIND_COSH, y_rate=rate)
    ups = TermFunction.monomial(basis, 1j * (k - sigma), y_kind=KIND_COSH, y_rate=rate)
    eta = TermFunction.const(basis, 1j * (k - sigma) * np.cosh(k))
    return StateVec(phi, ups, eta)


def _adjoint_zero(basis: FreqBasis, wp: WaveParams, j: int, k: float) -> StateVec:
    """Adjoint eigenfunctions of the sigma = 0 travelling modes (j = 1, 2)."""
    mu0, kappa = wp.mu0, wp.kappa
    ck, sk = np.cosh(k), np.sinh(k)
    p_j = -1j * ck / (ck * ck * sk - mu0 * sk)
    rate_k = fv(nk=1)
    rate_1 = fv(n1=1)
    if abs(kappa - 1.0) >= _KAPPA_ONE_TOL:
        pref = 1j * k * p_j / (mu0 * mu0 * (1.0 - k * k))
        phi = (
            TermFunction.monomial(basis, pref * ck / np.sinh(1.0), y_kind=KIND_COSH, y_rate=rate_1)
            + TermFunction.monomial(basis, -pref * mu0, y_kind=KIND_COSH, y_rate=rate_k)
        )
    else:
        # kappa = 1 makes 1 - k^2 vanish; the bracket has the removable limit
        # cosh(1)/sinh(1)^2 * ((sinh 1 - cosh 1) cosh y + y sinh(1) sinh y)
        pref = 1j * k * p_j / (mu0 * mu0 * (1.0 + kappa))
        c1, s1 = np.cosh(1.0), np.sinh(1.0)
        lim = (
            TermFunction.monomial(basis, c1 * (s1 - c1) / (s1 * s1), y_kind=KIND_COSH, y_rate=rate_1)
            + TermFunction.monomial(basis, c1 / s1, y_power=1, y_kind=KIND_SINH, y_rate=rate_1)
        )
        phi = pref * lim
    ups = TermFunction.monomial(basis, p_j, y_kind=KIND_COSH, y_rate=rate_k)
    eta = TermFunction.const(basis, -p_j * ck / mu0)
    return StateVec(phi, ups, eta)


def _adjoint_high(basis: FreqBasis, wp: WaveParams, sigma: float, k: float,
                  rate: tuple) -> StateVec:
    """Closed-form adjoint eigenfunction above the critical point."""
    mu0 = wp.mu0
    ck = np.cosh(k)
    s2k = np.sinh(2.0 * k)
    den = k * s2k + sigma * s2k + 2.0 * k * sigma - 2.0 * k * k
    p1 = 2.0 * ck * (sigma**2 - 1.0) * (k - sigma) ** 2 / (
        mu0**2 * np.sinh(1.0) * (k * k - 1.0) * den
    )
    p2 = (2.0 * k * k - 2.0 * sigma * sigma) / (mu0 * (k * k - 1.0) * den)
    return _adjoint_from_constants(basis, wp, sigma, k, rate, p1, p2)


def _adjoint_from_constants(basis: FreqBasis, wp: WaveParams, sigma: float, k: float,
                            rate: tuple, p1: complex, p2: complex) -> StateVec:
    mu0 = wp.mu0
    ck = np.cosh(k)
    slave = 1j * p2 * (k * k - 1.0) / (k + sigma)
    phi = (
        TermFunction.monomial(basis, p1, y_kind=KIND_COSH, y_rate=fv(n1=1))
        + TermFunction.monomial(basis, p2, y_kind=KIND_COSH, y_rate=rate)
    )
    ups = TermFunction.monomial(basis, -mu0 * slave, y_kind=KIND_COSH, y_rate=rate)
    eta = TermFunction.const(basis, slave * ck)
    return StateVec(phi, ups, eta)


def basis_for(wp: WaveParams, dp: DispersionPoint,
              resonance_order: int | None = None) -> FreqBasis:
    """Frequency basis carrying the dispersion roots of this sigma."""
    if dp.regime == Regime.AT_ZERO:
        return FreqBasis(kappa=wp.kappa, k2=wp.kappa, k4=0.0)
    return FreqBasis(
        kappa=wp.kappa,
        k2=dp.k2,
        k4=dp.k4,
        kA=dp.k1 if dp.k1 is not None else 0.0,
        kB=dp.k3 if dp.k3 is not None else 0.0,
        resonance_order=resonance_order,
    )


def modes_at(wp: WaveParams, sigma: float, basis: FreqBasis | None = None,
             dp: DispersionPoint | None = None) -> Projector:
    """Mode/adjoint pairs spanning the reduced space at lambda = i*sigma.

    sigma = 0 and sigma > sigma_c use closed adjoint formulas.  Between, the
    adjoints follow the same cosh(y) + cosh(k_j y) structure with the two
    constants fixed by a 2x2 biorthogonality solve; the full biorthogonality
    matrix is then verified a posteriori and failure above 1e-8 aborts.
    """
    if dp is None:
        dp = roots_k(wp, sigma)
    if dp.regime == Regime.AT_CRITICAL:
        raise ValueError("projection is not defined at the critical point")
    if basis is None:
        basis = basis_for(wp, dp)
    mu0 = wp.mu0

    if dp.regime == Regime.AT_ZERO:
        rk = fv(nk=1)
        phi1 = _mode_phi(basis, mu0, 0.0, -wp.kappa, rk)
        phi2 = _mode_phi(basis, mu0, 0.0, wp.kappa, rk)
        phi3 = StateVec(
            TermFunction.zero(basis),
            TermFunction.const(basis, 1.0),
            TermFunction.const(basis, 1.0),
        )
        phi4 = StateVec(
            TermFunction.const(basis, mu0),
            TermFunction.zero(basis),
            TermFunction.zero(basis),
        )
        psi1 = _adjoint_zero(basis, wp, 1, -wp.kappa)
        psi2 = _adjoint_zero(basis, wp, 2, wp.kappa)
        psi3 = StateVec(
            TermFunction.zero(basis),
            TermFunction.const(basis, mu0 / (mu0 - 1.0)),
            TermFunction.const(basis, -1.0 / (mu0 - 1.0)),
        )
        psi4 = StateVec(
            TermFunction.const(basis, 1.0 / (mu0 - 1.0))
            + TermFunction.monomial(
                basis, -1.0 / ((mu0 - 1.0) * mu0 * np.sinh(1.0)),
                y_kind=KIND_COSH, y_rate=fv(n1=1),
            ),
            TermFunction.zero(basis),
            TermFunction.zero(basis),
        )
        modes = (
            ModePair(1, -wp.kappa, rk, phi1, psi1),
            ModePair(2, wp.kappa, rk, phi2, psi2),
            ModePair(3, 0.0, fv(), phi3, psi3),
            ModePair(4, 0.0, fv(), phi4, psi4),
        )
        pr = Projector(0.0, wp, basis, modes)
        _verify_biorthogonality(pr)
        return pr

    if dp.regime == Regime.ABOVE_CRITICAL:
        pairs = ((2, dp.k2, fv(n2=1)), (4, dp.k4, fv(n4=1)))
        modes = tuple(
            ModePair(j, k, rate,
                     _mode_phi(basis, mu0, sigma, k, rate),
                     _adjoint_high(basis, wp, sigma, k, rate))
            for j, k, rate in pairs
        )
        pr = Projector(sigma, wp, basis, modes)
        _verify_biorthogonality(pr)
        return pr

    # below critical: four simple modes; adjoint constants via 2x2 solves
    pairs = ((1, dp.k1, fv(na=1)), (2, dp.k2, fv(n2=1)),
             (3, dp.k3, fv(nb=1)), (4, dp.k4, fv(n4=1)))
    phis = {j: _mode_phi(basis, mu0, sigma, k, rate) for j, k, rate in pairs}
    cross = {1: 3, 3: 1, 2: 4, 4: 2}
    modes = []
    for j, k, rate in pairs:
        psi_a = _adjoint_from_constants(basis, wp, sigma, k, rate, 1.0, 0.0)
        psi_b = _adjoint_from_constants(basis, wp, sigma, k, rate, 0.0, 1.0)
        jx = cross[j]
        A = np.array(
            [[inner(phis[j], psi_a), inner(phis[j], psi_b)],
             [inner(phis[jx], psi_a), inner(phis[jx], psi_b)]]
        )
        # <phi, p1 psi_a + p2 psi_b> is conjugate-linear in (p1, p2)
        pc = np.linalg.solve(A, np.array([1.0, 0.0]))
        p1, p2 = np.conj(pc)
        modes.append(ModePair(j, k, rate,
                              phis[j],
                              _adjoint_from_constants(basis, wp, sigma, k, rate, p1, p2)))
    pr = Projector(sigma, wp, basis, tuple(modes))
    _verify_biorthogonality(pr)
    return pr


def _verify_biorthogonality(pr: Projector) -> None:
    n = len(pr.modes)
    g = np.array([[inner(mi.phi, mj.psi) for mj in pr.modes] for mi in pr.modes])
    resid = np.max(np.abs(g - np.eye(n)))
    if resid > _BIORTH_ABORT:
        raise RuntimeError(f"biorthogonality residual {resid:.3e} at sigma={pr.sigma}")


def biorthogonality_matrix(pr: Projector) -> np.ndarray:
    return np.array([[inner(mi.phi, mj.psi) for mj in pr.modes] for mi in pr.modes])


def eigen_residual(wp: WaveParams, pr: Projector, j_index: int) -> float:
    """Residual norm of (L(i sigma) - i k_j) phi_j for a simple mode."""
    m = pr.modes[j_index]
    r = apply_L(wp, 1j * pr.sigma, m.phi) - (1j * m.k_j) * m.phi
    return norm(r)


def adjoint_eigen_residual(wp: WaveParams, pr: Projector, j_index: int,
                           samples: list[StateVec]) -> float:
    """max |<(L(i sigma) - i k_j) u, psi_j>| over trial u in dom(L), scaled."""
    m = pr.modes[j_index]
    worst = 0.0
    for u in samples:
        r = apply_L(wp, 1j * pr.sigma, u) - (1j * m.k_j) * u
        val = abs(inner(r, m.psi))
        scale = max(norm(u) * norm(m.psi), 1e-30)
        worst = max(worst, val / scale)
    return worst
