import os
import subprocess
import sys

import numpy as np
import pytest

from stokesevans import evalkernel
from stokesevans.funcspace import FreqBasis

from conftest import random_termfunction


def test_backends_agree():
    if evalkernel.eval_terms_numba is None:
        pytest.skip("numba unavailable")
    basis = FreqBasis(kappa=1.3)
    rng = np.random.default_rng(17)
    x = rng.uniform(0, 5, size=64)
    y = rng.uniform(0, 1, size=64)
    for _ in range(5):
        enc = random_termfunction(basis, rng).encode()
        a = evalkernel.eval_terms_numpy(enc, x, y)
        b = evalkernel.eval_terms_numba(enc, x, y)
        assert np.max(np.abs(a - b)) < 1e-13 * max(1.0, np.max(np.abs(a)))


def test_numpy_matches_pointwise_eval():
    basis = FreqBasis(kappa=0.9)
    rng = np.random.default_rng(23)
    f = random_termfunction(basis, rng)
    enc = f.encode()
    for x, y in ((0.0, 0.0), (1.3, 0.4), (4.1, 1.0)):
        batch = evalkernel.eval_terms_numpy(enc, np.array([x]), np.array([y]))[0]
        assert batch == pytest.approx(f.eval(x, y), rel=1e-13, abs=1e-13)


def test_env_flag_selects_backend():
    code = ("import stokesevans.evalkernel as ek; "
            "print(ek.backend_name()); "
            "print(ek.eval_terms is ek.eval_terms_numpy)")
    env = dict(os.environ, STOKESEVANS_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "True"]


def test_default_backend_reported():
    assert evalkernel.backend_name() in ("numpy", "numba")
