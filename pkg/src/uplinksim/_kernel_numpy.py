"""Pure-numpy outage kernel: vectorized across links.

The CSR interferer layout is padded to a rectangle with zero-power slots.
A zero-power slot has series coefficients (1, 0, 0, ...), so multiplying it
into the running product is an exact no-op and padding never changes the
result. The product over interferer slots is sequential (axis 1), vectorized
over links (axis 0).
"""

import numpy as np

_FACT = np.array([1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0, 362880.0])


def _factorials(n):
    if n <= _FACT.size:
        return _FACT[:n]
    fact = np.empty(n)
    fact[: _FACT.size] = _FACT
    for s in range(_FACT.size, n):
        fact[s] = fact[s - 1] * s
    return fact


def outage_batch_kernel(power, fading_m, activity, offsets, signal_power, m_desired, inv_snr, threshold):
    """Exact conditional outage probability per link. See _kernel_numba."""
    n = signal_power.size
    if n == 0:
        return np.empty(0)

    counts = np.diff(offsets)
    width = int(counts.max()) if counts.size else 0
    degree = int(m_desired.max())
    fact = _factorials(degree)

    b0 = threshold * m_desired / signal_power

    w = np.zeros((n, width))
    m = np.ones((n, width))
    p = np.zeros((n, width))
    if width:
        rows = np.repeat(np.arange(n), counts)
        cols = np.arange(power.size) - np.repeat(offsets[:-1], counts)
        w[rows, cols] = power
        m[rows, cols] = fading_m
        p[rows, cols] = activity

    base = 1.0 / (b0[:, None] * w / m + 1.0)
    base_m = base**m
    coeff = np.empty((n, width, degree))
    coeff[..., 0] = 1.0 - p * (1.0 - base_m)
    if degree > 1:
        coeff[..., 1] = p * w * base_m * base
        for l in range(1, degree - 1):
            coeff[..., l + 1] = coeff[..., l] * ((m + l) / (l + 1)) * (w / m) * base

    poly = np.zeros((n, degree))
    poly[:, 0] = 1.0
    for k in range(width):
        ck = coeff[:, k, :]
        for t in range(degree - 1, 0, -1):
            acc = poly[:, 0] * ck[:, t]
            for u in range(1, t + 1):
                acc = acc + poly[:, u] * ck[:, t - u]
            poly[:, t] = acc
        poly[:, 0] = poly[:, 0] * ck[:, 0]

    x = b0 * inv_snr
    snr = 1.0 / inv_snr
    total = np.zeros(n)
    xpow = np.ones(n)
    for s in range(degree):
        inner = np.zeros(n)
        zpow = np.ones(n)
        for t in range(s + 1):
            inner += zpow * poly[:, t] / fact[s - t]
            zpow = zpow * snr
        # links with a lower desired-link m stop their sum earlier
        total += np.where(s < m_desired, xpow * inner, 0.0)
        xpow = xpow * x
    eps = 1.0 - np.exp(-x) * total
    return np.clip(eps, 0.0, 1.0)
