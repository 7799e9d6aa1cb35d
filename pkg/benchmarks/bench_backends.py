"""Timing comparison of the numpy and numba kernel implementations.

Runs the gradient kernel and the concordance counter across batch sizes,
reporting per-call wall time for each backend. The numba functions are
called once per shape before timing so compilation is excluded.

Usage: python3 benchmarks/bench_backends.py [--repeats 20]
"""

import argparse
import time

import numpy as np

from survpart import _kernels_numpy
from survpart.network import init_params
from survpart.partition import project_cutpoints

try:
    from survpart import _kernels_numba
except ImportError:
    _kernels_numba = None


def _instance(n, p, h, m, seed):
    rng = np.random.default_rng(seed)
    params = init_params(p, h, m, seed)
    cuts = project_cutpoints(np.sort(rng.uniform(0.1, 0.9, m)) * 100.0, 100.0)
    x = rng.normal(size=(n, p))
    y = rng.uniform(0.5, 99.5, n)
    s = rng.integers(0, 2, n).astype(np.float64)
    return params, cuts, x, y, s


def _time(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def bench_gradients(repeats):
    print("nll_loss_grads (batch, p=2, h=32, m=3), best of", repeats)
    header = f"{'n':>7} {'numpy':>12}"
    if _kernels_numba:
        header += f" {'numba':>12} {'speedup':>8}"
    print(header)
    for n in (64, 256, 1024, 4096, 16384):
        params, cuts, x, y, s = _instance(n, 2, 32, 3, seed=n)
        args = (x, y, s, params.w1, params.b1, params.w2, params.b2, cuts, 100.0, 0.1, True)
        t_np = _time(lambda: _kernels_numpy.nll_loss_grads(*args), repeats)
        line = f"{n:>7} {t_np * 1e3:>10.3f}ms"
        if _kernels_numba:
            _kernels_numba.nll_loss_grads(*args)  # compile before timing
            t_nb = _time(lambda: _kernels_numba.nll_loss_grads(*args), repeats)
            line += f" {t_nb * 1e3:>10.3f}ms {t_np / t_nb:>7.1f}x"
        print(line)


def bench_concordance(repeats):
    print("\nconcordance_counts (n records, 4 intervals), best of", repeats)
    header = f"{'n':>7} {'numpy':>12}"
    if _kernels_numba:
        header += f" {'numba':>12} {'speedup':>8}"
    print(header)
    for n in (256, 1024, 4096, 16384):
        rng = np.random.default_rng(n)
        probs = rng.dirichlet(np.ones(4), size=n)
        surv = np.cumsum(probs[:, ::-1], axis=1)[:, ::-1]
        surv = np.column_stack([surv[:, 1:], np.zeros(n)])
        z = rng.integers(0, 4, n)
        events = rng.integers(0, 2, n)
        args = (np.ascontiguousarray(surv), z, events)
        t_np = _time(lambda: _kernels_numpy.concordance_counts(*args), repeats)
        line = f"{n:>7} {t_np * 1e3:>10.3f}ms"
        if _kernels_numba:
            _kernels_numba.concordance_counts(*args)
            t_nb = _time(lambda: _kernels_numba.concordance_counts(*args), repeats)
            line += f" {t_nb * 1e3:>10.3f}ms {t_np / t_nb:>7.1f}x"
        print(line)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()
    if _kernels_numba is None:
        print("numba not importable; timing the numpy backend only\n")
    bench_gradients(args.repeats)
    bench_concordance(args.repeats)


if __name__ == "__main__":
    main()
