"""Undetermined coefficients over the term basis as a linear least squares.

A linear operator equation  op(f) = rhs  inside the term algebra becomes an
exact linear system once f is expanded over a finite candidate basis: every
canonical term key of the images contributes one row.  Several equations
(field equation, boundary rows, projection-complement rows) are stacked into
one system.  Ill-conditioned stacks (cond > 1e10) are re-solved in extended
precision before giving up.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .funcspace import TermFunction

COND_LIMIT = 1e10

Equation = tuple[Callable[[TermFunction], TermFunction], TermFunction]


class MatchingError(RuntimeError):
    """The candidate basis cannot represent the solution to tolerance."""


def _stack(candidates: list[TermFunction], equations: list[Equation]):
    images_per_eq = []
    rows = 0
    keysets = []
    for op, rhs in equations:
        images = [op(c) for c in candidates]
        keys = set(rhs._t.keys())
        for im in images:
            keys.update(im._t.keys())
        keys = sorted(keys)
        keysets.append(keys)
        images_per_eq.append(images)
        rows += len(keys)
    A = np.zeros((rows, len(candidates)), dtype=complex)
    b = np.zeros(rows, dtype=complex)
    r0 = 0
    for (op, rhs), images, keys in zip(equations, images_per_eq, keysets):
        index = {k: r0 + i for i, k in enumerate(keys)}
        for jcol, im in enumerate(images):
            for k, cval in im._t.items():
                A[index[k], jcol] = cval
        for k, cval in rhs._t.items():
            b[index[k]] = cval
        r0 += len(keys)
    return A, b


def _solve_extended(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    import mpmath as mp

    with mp.workdps(40):
        Am = mp.matrix([[mp.mpc(A[i, j]) for j in range(A.shape[1])] for i in range(A.shape[0])])
        bm = mp.matrix([mp.mpc(v) for v in b])
        x = mp.qr_solve(Am, bm)[0]
        return np.array([complex(v) for v in x])


def solve_block_system(
    columns: list[dict[str, TermFunction]],
    rhs: dict[str, TermFunction],
    rtol: float = 1e-9,
    raise_on_residual: bool = True,
) -> tuple[np.ndarray, float]:
    """Least-squares solve of stacked per-equation term matches.

    ``columns[i]`` maps equation names to the image of unknown i in that
    equation (missing names mean zero); ``rhs`` maps equation names to data.
    Returns the coefficient vector and the worst reconstructed residual
    relative to the data/solution scale.
    """
    names = sorted(rhs.keys())
    blocks_A = []
    blocks_b = []
    for name in names:
        keys = set(rhs[name]._t.keys())
        for col in columns:
            if name in col:
                keys.update(col[name]._t.keys())
        keys = sorted(keys)
        A = np.zeros((len(keys), len(columns)), dtype=complex)
        b = np.zeros(len(keys), dtype=complex)
        index = {k: i for i, k in enumerate(keys)}
        for j, col in enumerate(columns):
            f = col.get(name)
            if f is not None:
                for k, cval in f._t.items():
                    A[index[k], j] = cval
        for k, cval in rhs[name]._t.items():
            b[index[k]] = cval
        blocks_A.append(A)
        blocks_b.append(b)
    A = np.vstack(blocks_A)
    b = np.concatenate(blocks_b)
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    if A.shape[0] >= A.shape[1] and A.shape[1] > 0:
        if np.linalg.cond(A) > COND_LIMIT:
            x = _solve_extended(A, b)
    resid = np.abs(A @ x - b)
    scale = max(np.max(np.abs(b)) if len(b) else 0.0,
                np.max(np.abs(x)) if len(x) else 0.0, 1.0)
    worst = float(np.max(resid) / scale) if len(resid) else 0.0
    if raise_on_residual and worst > rtol:
        raise MatchingError(f"block system residual {worst:.3e} above {rtol:.1e}")
    return x, worst


def solve_by_matching(
    candidates: list[TermFunction],
    equations: list[Equation],
    extra_rows: list[Equation] | None = None,
    rtol: float = 1e-9,
) -> TermFunction:
    """Solve stacked linear term equations for f = sum_i x_i * candidates[i].

    Raises MatchingError when the reconstructed residual of any equation
    exceeds rtol relative to the data scale (callers may enlarge the basis
    and retry).
    """
    if not candidates:
        raise MatchingError("empty candidate basis")
    eqs = list(equations) + list(extra_rows or [])
    A, b = _stack(candidates, eqs)
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    if A.shape[0] >= A.shape[1]:
        cond = np.linalg.cond(A)
        if cond > COND_LIMIT:
            x = _solve_extended(A, b)

    basis = candidates[0].basis
    f = TermFunction.zero(basis)
    for xi, c in zip(x, candidates):
        f = f + xi * c

    scale = max(max((rhs.max_abs_coeff() for _, rhs in eqs), default=0.0),
                max(abs(v) for v in x) if len(x) else 0.0, 1.0)
    for op, rhs in eqs:
        resid = (op(f) - rhs).max_abs_coeff()
        if resid > rtol * scale:
            raise MatchingError(f"matching residual {resid:.3e} above {rtol:.1e}*{scale:.3e}")
    return f
