#!/usr/bin/env python3
"""Benchmark the outage kernel: numba-compiled loop vs vectorized numpy.

Builds a synthetic batch shaped like one Monte Carlo trial of a mid-size
network (hundreds of uplinks, ~150 interferers each) and times repeated
batch evaluations, which is exactly the inner loop of every rate search.
Run after installing the package:

    python3 benchmarks/bench_outage_kernel.py
"""

import time

import numpy as np

from uplinksim import _kernel_numba, _kernel_numpy

N_LINKS = 400
MEAN_INTERFERERS = 150
REPEATS = 50


def synthetic_batch(rng):
    counts = rng.poisson(MEAN_INTERFERERS, N_LINKS)
    offsets = np.zeros(N_LINKS + 1, dtype=np.int64)
    offsets[1:] = np.cumsum(counts)
    total = int(offsets[-1])
    signal = rng.lognormal(2.0, 1.0, N_LINKS)
    power = np.repeat(signal / 24.0, counts) * rng.lognormal(-1.5, 1.0, total)
    fading_m = rng.choice([1.0, 2.0, 3.0], total, p=[0.6, 0.25, 0.15])
    activity = np.ones(total)
    m_desired = rng.choice([1, 2, 3], N_LINKS).astype(np.int64)
    inv_snr = np.full(N_LINKS, 0.1)
    return power, fading_m, activity, offsets, signal, m_desired, inv_snr


def timeit(kernel, args, thresholds):
    start = time.perf_counter()
    for thr in thresholds:
        kernel(*args, thr)
    return (time.perf_counter() - start) / len(thresholds)


def main():
    rng = np.random.default_rng(0)
    args = synthetic_batch(rng)
    thresholds = [np.full(N_LINKS, b) for b in np.geomspace(0.1, 10.0, REPEATS)]

    out_numba = _kernel_numba.outage_batch_kernel(*args, thresholds[0])  # compile
    out_numpy = _kernel_numpy.outage_batch_kernel(*args, thresholds[0])
    agree = np.max(np.abs(out_numba - out_numpy))
    print(f"batch: {N_LINKS} links, {args[0].size} interferer slots")
    print(f"backend agreement (max abs diff): {agree:.3e}")

    t_numba = timeit(_kernel_numba.outage_batch_kernel, args, thresholds)
    t_numpy = timeit(_kernel_numpy.outage_batch_kernel, args, thresholds)
    print(f"numba : {t_numba * 1e3:8.3f} ms per batch evaluation")
    print(f"numpy : {t_numpy * 1e3:8.3f} ms per batch evaluation")
    print(f"speedup: {t_numpy / t_numba:.1f}x")


if __name__ == "__main__":
    main()
