"""Brute-force fading simulator used to validate the closed-form kernel.

Draws unit-mean gamma power gains and Bernoulli activity indicators, forms
the instantaneous SINR and counts threshold crossings. Slow by design; it is
a correctness reference, not a production path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .outage import outage_probability
from .power import UplinkInstance


@dataclass(frozen=True)
class OracleEstimate:
    outage: float
    std_error: float
    draws: int


def estimate_outage_mc(
    link: UplinkInstance, threshold: float, draws: int, rng, chunk_size: int = 200_000
) -> OracleEstimate:
    """Monte Carlo estimate of P[SINR <= threshold] for one uplink.

    Per draw: desired-link gain ~ Gamma(m0, 1/m0), interferer gains ~
    Gamma(m_i, 1/m_i), activity ~ Bernoulli(p_i). The standard error is the
    binomial sqrt(eps*(1-eps)/draws).
    """
    if draws < 1:
        raise ValueError("draws must be >= 1")
    nz = np.flatnonzero(link.interference_power > 0)
    w = np.asarray(link.interference_power, dtype=float)[nz]
    m = np.asarray(link.fading_m, dtype=float)[nz]
    p = np.asarray(link.activity, dtype=float)[nz]
    m0 = float(link.fading_m_desired)
    noise = 1.0 / link.snr
    all_active = bool(np.all(p >= 1.0))

    exceeded = 0
    remaining = draws
    while remaining > 0:
        c = min(chunk_size, remaining)
        g0 = rng.gamma(m0, 1.0 / m0, size=c)
        if w.size:
            g = rng.gamma(m, 1.0 / m, size=(c, w.size))
            if not all_active:
                g = g * (rng.random((c, w.size)) < p)
            denom = noise + g @ w
        else:
            denom = noise
        sinr = g0 * link.signal_power / denom
        exceeded += int(np.count_nonzero(sinr <= threshold))
        remaining -= c

    eps_hat = exceeded / draws
    return OracleEstimate(
        outage=eps_hat,
        std_error=float(np.sqrt(eps_hat * (1.0 - eps_hat) / draws)),
        draws=draws,
    )


def random_instance(
    rng,
    max_interferers: int = 20,
    m_desired_choices=(1, 2, 3),
    m_choices=(0.7, 1.0, 2.0, 3.0),
    activity_choices=(0.5, 1.0),
    threshold_range=(0.1, 10.0),
    outage_range=(1e-3, 0.999),
):
    """Random (UplinkInstance, threshold) pair for kernel-vs-oracle checks.

    Thresholds are log-uniform over ``threshold_range``. Instances whose
    closed-form outage falls outside ``outage_range`` are redrawn: sampling
    cannot resolve probabilities near 0 or 1, so comparisons there would be
    vacuous.
    """
    lo, hi = np.log(threshold_range[0]), np.log(threshold_range[1])
    while True:
        n = int(rng.integers(0, max_interferers + 1))
        signal_power = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
        power = np.zeros(n + 1)
        power[1:] = signal_power * np.exp(rng.uniform(np.log(1e-3), np.log(0.5), size=n))
        fading_m = np.ones(n + 1)
        fading_m[1:] = rng.choice(m_choices, size=n)
        activity = np.ones(n + 1)
        activity[1:] = rng.choice(activity_choices, size=n)
        link = UplinkInstance(
            mobile=0,
            sector=0,
            signal_power=signal_power,
            interference_power=power,
            fading_m_desired=int(rng.choice(m_desired_choices)),
            fading_m=fading_m,
            activity=activity,
            snr=float(np.exp(rng.uniform(np.log(1.0), np.log(100.0)))),
        )
        threshold = float(np.exp(rng.uniform(lo, hi)))
        eps = outage_probability(link, threshold)
        if outage_range[0] <= eps <= outage_range[1]:
            return link, threshold


def compare_kernel_oracle(instances: int, draws: int, rng, **kwargs):
    """Run randomized kernel-vs-oracle comparisons.

    Returns a list of (closed_form, estimate) pairs and the maximum deviation
    in units of the Monte Carlo standard error.
    """
    results = []
    worst = 0.0
    for _ in range(instances):
        link, threshold = random_instance(rng, **kwargs)
        closed = outage_probability(link, threshold)
        est = estimate_outage_mc(link, threshold, draws, rng)
        results.append((closed, est))
        if est.std_error > 0:
            worst = max(worst, abs(closed - est.outage) / est.std_error)
        elif closed != est.outage:
            worst = np.inf
    return results, worst
