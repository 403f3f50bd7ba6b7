"""Numba-compiled outage kernel: per-link loop over CSR interferer slots.

Same contract as uplinksim._kernel_numpy.outage_batch_kernel. Compiled lazily
on first call and cached on disk; with UPLINKSIM_NUMBA disabled the decorator
is a no-op and this module degrades to plain Python loops.
"""

import math

import numpy as np

from ._jit import njit


@njit(cache=True)
def outage_batch_kernel(power, fading_m, activity, offsets, signal_power, m_desired, inv_snr, threshold):
    """Exact conditional outage probability per link.

    power/fading_m/activity: flat interferer arrays, link i owning slots
    offsets[i]:offsets[i+1]. signal_power, m_desired, inv_snr, threshold: one
    entry per link. Returns outage probabilities clamped to [0, 1].
    """
    n = signal_power.size
    out = np.empty(n)

    max_m0 = 1
    for i in range(n):
        if m_desired[i] > max_m0:
            max_m0 = m_desired[i]
    fact = np.empty(max_m0)
    fact[0] = 1.0
    for s in range(1, max_m0):
        fact[s] = fact[s - 1] * s

    coeff = np.empty(max_m0)  # per-interferer series coefficients
    poly = np.empty(max_m0)  # running truncated product coefficients

    for i in range(n):
        m0 = m_desired[i]
        b0 = threshold[i] * m0 / signal_power[i]
        for t in range(m0):
            poly[t] = 0.0
        poly[0] = 1.0

        for k in range(offsets[i], offsets[i + 1]):
            w = power[k]
            if w <= 0.0:
                continue  # silent slot: its factor is exactly 1
            m = fading_m[k]
            p = activity[k]
            base = 1.0 / (b0 * w / m + 1.0)
            if m == 1.0:
                base_m = base
            elif m == 2.0:
                base_m = base * base
            elif m == 3.0:
                base_m = base * base * base
            else:
                base_m = base**m
            coeff[0] = 1.0 - p * (1.0 - base_m)
            if m0 > 1:
                coeff[1] = p * w * base_m * base
                for l in range(1, m0 - 1):
                    coeff[l + 1] = coeff[l] * ((m + l) / (l + 1)) * (w / m) * base
            # truncated polynomial product, in place, degrees m0-1 .. 0
            for t in range(m0 - 1, 0, -1):
                acc = poly[0] * coeff[t]
                for u in range(1, t + 1):
                    acc += poly[u] * coeff[t - u]
                poly[t] = acc
            poly[0] = poly[0] * coeff[0]

        z = inv_snr[i]
        x = b0 * z
        snr = 1.0 / z
        total = 0.0
        xpow = 1.0
        for s in range(m0):
            inner = 0.0
            zpow = 1.0
            for t in range(s + 1):
                inner += zpow * poly[t] / fact[s - t]
                zpow *= snr
            total += xpow * inner
            xpow *= x
        eps = 1.0 - math.exp(-x) * total
        if eps < 0.0:
            eps = 0.0
        elif eps > 1.0:
            eps = 1.0
        out[i] = eps
    return out
