"""Closed-form conditional outage probability of a DS-CDMA uplink.

Conditioned on the network realization (positions, shadowing, power control),
the outage probability of a reference uplink in Nakagami block fading is
exact: each active interferer contributes a short series in the normalized
threshold, the series multiply into a polynomial truncated at the desired
link's fading order, and a weighted sum of the first coefficients gives the
probability that the instantaneous SINR falls below the threshold.

``outage_probability`` / ``outage_batch`` evaluate that closed form through
the backend selected at import time (numba loop or vectorized numpy, see
uplinksim._jit). The helper operations (mgf_base, interferer_coeff,
interference_poly) expose the individual pieces; they are the readable
reference the kernels are tested against.
"""

from __future__ import annotations

import math

import numpy as np

from ._jit import NUMBA_ENABLED
from .power import UplinkBatch, UplinkInstance

if NUMBA_ENABLED:
    from ._kernel_numba import outage_batch_kernel as _batch_kernel
else:
    from ._kernel_numpy import outage_batch_kernel as _batch_kernel

BACKEND = "numba" if NUMBA_ENABLED else "numpy"


def mgf_base(beta0, power, fading_m):
    """Per-interferer attenuation base (beta0 * power / m + 1)^-1.

    Equals 1 for a silent interferer (power 0); always in (0, 1].
    """
    return 1.0 / (beta0 * np.asarray(power, dtype=float) / fading_m + 1.0)


def interferer_coeff(order, base, power, fading_m, activity):
    """Coefficient of the given order in one interferer's series.

    Order 0 is 1 - p*(1 - base^m); higher orders carry the rising factorial
    of m over order!, (power/m)^order and base^(m+order).
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if order == 0:
        return 1.0 - activity * (1.0 - base**fading_m)
    rising = 1.0
    for v in range(order):
        rising *= fading_m + v
    return (
        activity
        * rising
        / math.factorial(order)
        * (power / fading_m) ** order
        * base ** (fading_m + order)
    )


def interference_poly(power, fading_m, activity, beta0, max_degree):
    """Coefficients 0..max_degree of the product of interferer series.

    Interferers with zero power contribute the factor 1 exactly and are
    skipped. With no interferers the result is [1, 0, ..., 0].
    """
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    power = np.asarray(power, dtype=float)
    fading_m = np.asarray(fading_m, dtype=float)
    activity = np.asarray(activity, dtype=float)
    poly = np.zeros(max_degree + 1)
    poly[0] = 1.0
    for w, m, p in zip(power, fading_m, activity):
        if w <= 0.0:
            continue
        base = mgf_base(beta0, w, m)
        coeff = np.array([interferer_coeff(t, base, w, m, p) for t in range(max_degree + 1)])
        for t in range(max_degree, 0, -1):
            poly[t] = np.sum(poly[: t + 1][::-1] * coeff[: t + 1])
        poly[0] = poly[0] * coeff[0]
    return poly


def outage_batch(batch: UplinkBatch, threshold) -> np.ndarray:
    """Outage probability of every link in the batch at the given threshold(s).

    ``threshold`` is a scalar (common SINR threshold) or one value per link.
    """
    thr = np.broadcast_to(np.asarray(threshold, dtype=float), (batch.n,)).copy()
    if np.any(thr < 0):
        raise ValueError("SINR thresholds must be non-negative")
    return _batch_kernel(
        batch.power_flat,
        batch.fading_m_flat,
        batch.activity_flat,
        batch.offsets,
        batch.signal_power,
        batch.fading_m_desired,
        1.0 / batch.snr,
        thr,
    )


def outage_probability(link: UplinkInstance, threshold: float) -> float:
    """Exact conditional outage probability of one uplink at one threshold."""
    if threshold < 0:
        raise ValueError("SINR threshold must be non-negative")
    batch = UplinkBatch.from_instances([link])
    return float(outage_batch(batch, threshold)[0])
