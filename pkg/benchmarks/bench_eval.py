"""Benchmark the batch term-evaluation kernels: numba JIT vs pure numpy.

These kernels back the quadrature oracles, collocation residuals and
spectrum sampling; everything else in the package is exact dict algebra.

Run:  python benchmarks/bench_eval.py [--sizes 1000 10000 100000]
"""

import argparse
import time

import numpy as np

from stokesevans import evalkernel
from stokesevans.dispersion import make_wave_params
from stokesevans.stokes import build_stokes


def term_table():
    """A realistic encoded term set: the full third-order wave potential."""
    wp = make_wave_params(1.3)
    se = build_stokes(wp)
    f = se.phi[0] + se.phi[1] + se.phi[2]
    return f.encode()


def bench(fn, enc, x, y, repeats=20):
    fn(enc, x, y)  # warmup (and JIT compile)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn(enc, x, y)
    return (time.perf_counter() - t0) / repeats


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+",
                    default=[1_000, 10_000, 100_000, 1_000_000])
    args = ap.parse_args()

    enc = term_table()
    rng = np.random.default_rng(0)
    print(f"term table: {enc.shape[0]} terms")
    print(f"{'points':>10} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>9}")
    for n in args.sizes:
        x = rng.uniform(0.0, 5.0, n)
        y = rng.uniform(0.0, 1.0, n)
        t_np = bench(evalkernel.eval_terms_numpy, enc, x, y)
        if evalkernel.eval_terms_numba is None:
            print(f"{n:>10} {t_np * 1e3:>12.3f} {'n/a':>12} {'n/a':>9}")
            continue
        t_nb = bench(evalkernel.eval_terms_numba, enc, x, y)
        a = evalkernel.eval_terms_numpy(enc, x[:100], y[:100])
        b = evalkernel.eval_terms_numba(enc, x[:100], y[:100])
        assert np.max(np.abs(a - b)) < 1e-12 * max(1.0, np.max(np.abs(a)))
        print(f"{n:>10} {t_np * 1e3:>12.3f} {t_nb * 1e3:>12.3f} "
              f"{t_np / t_nb:>8.2f}x")


if __name__ == "__main__":
    main()
