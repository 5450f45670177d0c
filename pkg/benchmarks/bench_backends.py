#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the same blocks through both backends, checks that the outage flags
agree bit for bit, and reports trials/second.

    python3 benchmarks/bench_backends.py [--trials 200000] [--workers 2]
"""

import argparse
import time

import numpy as np

from frab_noma.engine import SystemConfig
from frab_noma.kernels import build_params, resolve_backend

SCENARIOS = {
    "fig2-small": dict(m_antennas=4, s1_size=1, s2_size=4),
    "fig2-m8": dict(m_antennas=8, s1_size=1, s2_size=8),
    "fig1-scale": dict(m_antennas=30, s1_size=3, s2_size=300),
}


def make_config(m_antennas, s1_size, s2_size):
    return SystemConfig(
        m_antennas=m_antennas, nq=2, s1_size=s1_size, s2_size=s2_size,
        r1=40.0, ry=20.0, pathloss_exp=3.0, model="rayleigh",
        a0sq=0.75, a1sq=0.25, rate_s1=1.0, rate_s2=1.0,
        tx_dbm=(20.0,), noise_dbm=-30.0, num_trials=1, seed=99,
    )


def bench(backend_name, cfg, n_trials, workers):
    backend = resolve_backend(backend_name)
    if backend.NAME == "numba":
        import numba
        numba.set_num_threads(min(workers, numba.config.NUMBA_NUM_THREADS))
    params = build_params(cfg)
    noise = cfg.m_antennas / cfg.rho_values()[0]
    chunk = backend.block_size(params)
    backend.simulate_block(cfg.seed, 0, 0, min(256, n_trials), params, noise)  # warm up
    t0 = time.perf_counter()
    flags = []
    start = 0
    while start < n_trials:
        n = min(chunk, n_trials - start)
        flags.append(backend.simulate_block(cfg.seed, 0, start, n, params, noise))
        start += n
    elapsed = time.perf_counter() - t0
    merged = tuple(np.concatenate([f[j] for f in flags], axis=0) for j in range(4))
    return elapsed, merged


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--workers", type=int, default=2)
    args = ap.parse_args()

    print(f"{'scenario':<12} {'backend':<7} {'trials':>9} {'seconds':>8} {'trials/s':>12}")
    for name, kw in SCENARIOS.items():
        cfg = make_config(**kw)
        trials = args.trials if kw["s2_size"] < 100 else max(args.trials // 100, 1000)
        results = {}
        for backend in ("numba", "numpy"):
            elapsed, flags = bench(backend, cfg, trials, args.workers)
            results[backend] = flags
            print(f"{name:<12} {backend:<7} {trials:>9} {elapsed:>8.2f} "
                  f"{trials / elapsed:>12.0f}")
        same = all(np.array_equal(a, b)
                   for a, b in zip(results["numba"], results["numpy"]))
        print(f"{name:<12} flags identical across backends: {same}")
        if not same:
            raise SystemExit(1)


if __name__ == "__main__":
    main()
