"""Batch evaluation of encoded term sums on point grids.

Everything that touches many points at once (quadrature oracles, collocation
residuals, spectrum sampling, sweeps) funnels through ``eval_terms``.  The
hot kernel is JIT-compiled with numba; a pure-numpy broadcast path is kept
behind the ``STOKESEVANS_BACKEND`` environment variable:

    STOKESEVANS_BACKEND=numpy   force the numpy fallback
    STOKESEVANS_BACKEND=numba   force numba (error if unavailable)

unset picks numba when importable, else numpy.  ``benchmarks/bench_eval.py``
compares the two.
"""

from __future__ import annotations

import os

import numpy as np

_CHOICE = os.environ.get("STOKESEVANS_BACKEND", "").strip().lower()

_HAVE_NUMBA = False
if _CHOICE in ("", "numba"):
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - exercised only without numba
        if _CHOICE == "numba":
            raise
        _HAVE_NUMBA = False


def eval_terms_numpy(enc: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Evaluate sum_i c_i x^q_i e^{i om_i x} y^p_i h_i(a_i y) at points (x, y).

    ``enc`` rows: coeff_re, coeff_im, x_power, omega, y_power, y_kind, rate.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.zeros(np.broadcast(x, y).shape, dtype=complex)
    for re, im, q, om, p, kind, a in enc:
        v = (re + 1j * im) * np.ones_like(out)
        if q:
            v = v * x**q
        if om != 0.0:
            v = v * np.exp(1j * om * x)
        if p:
            v = v * y**p
        if kind == 1:
            v = v * np.cosh(a * y)
        elif kind == 2:
            v = v * np.sinh(a * y)
        out += v
    return out


if _HAVE_NUMBA:
    from numba import prange

    @njit(cache=True, parallel=True)
    def _eval_terms_jit(enc, x, y, out_re, out_im):  # pragma: no cover - jitted
        n_terms = enc.shape[0]
        n_pts = x.shape[0]
        for j in prange(n_pts):
            acc_re = 0.0
            acc_im = 0.0
            for i in range(n_terms):
                cre = enc[i, 0]
                cim = enc[i, 1]
                q = int(enc[i, 2])
                om = enc[i, 3]
                p = int(enc[i, 4])
                kind = int(enc[i, 5])
                a = enc[i, 6]
                mag = 1.0
                if q > 0:
                    mag = x[j] ** q
                if p > 0:
                    mag *= y[j] ** p
                if kind == 1:
                    mag *= np.cosh(a * y[j])
                elif kind == 2:
                    mag *= np.sinh(a * y[j])
                if om != 0.0:
                    ph = om * x[j]
                    cph = np.cos(ph)
                    sph = np.sin(ph)
                    acc_re += mag * (cre * cph - cim * sph)
                    acc_im += mag * (cre * sph + cim * cph)
                else:
                    acc_re += mag * cre
                    acc_im += mag * cim
            out_re[j] = acc_re
            out_im[j] = acc_im

    def eval_terms_numba(enc: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        xb, yb = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        shape = xb.shape
        xf = np.ascontiguousarray(xb.ravel())
        yf = np.ascontiguousarray(yb.ravel())
        out_re = np.zeros(xf.shape[0])
        out_im = np.zeros(xf.shape[0])
        _eval_terms_jit(np.ascontiguousarray(enc), xf, yf, out_re, out_im)
        return (out_re + 1j * out_im).reshape(shape)

else:
    eval_terms_numba = None  # type: ignore[assignment]


def backend_name() -> str:
    if _CHOICE == "numpy" or not _HAVE_NUMBA:
        return "numpy"
    return "numba"


if backend_name() == "numba":
    eval_terms = eval_terms_numba
else:
    eval_terms = eval_terms_numpy
