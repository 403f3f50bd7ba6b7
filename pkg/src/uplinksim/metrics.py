"""Per-trial aggregates and distribution curves."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RateAllocation:
    """Outcome of rate control for one mobile. Denied mobiles carry zeros."""

    mobile: int
    sector: int  # -1 when denied
    served: bool
    rate: float
    threshold: float
    outage: float
    throughput: float


@dataclass(frozen=True)
class TrialSummary:
    """Aggregates of one network realization."""

    mean_outage: float
    mean_throughput: float
    area_spectral_efficiency: float
    denied_count: int
    mean_rate: float
    fixed_rate: float | None
    per_uplink: tuple


def transmission_density(num_mobiles: int, net_radius: float) -> float:
    """Transmissions per unit area: M / (pi * r^2)."""
    return num_mobiles / (np.pi * net_radius**2)


def trial_metrics(allocations, num_mobiles: int, net_radius: float, fixed_rate=None) -> TrialSummary:
    """Summarize one realization from its per-mobile allocations.

    Mean outage averages over served uplinks only (denied mobiles have no
    outage event); mean throughput and mean rate average over all mobiles
    with denied ones contributing zero. The area spectral efficiency is the
    transmission density times the mean throughput.
    """
    allocations = tuple(allocations)
    if len(allocations) != num_mobiles:
        raise ValueError("need exactly one allocation per mobile")
    served = [a for a in allocations if a.served]
    mean_outage = float(np.mean([a.outage for a in served])) if served else 0.0
    mean_throughput = float(sum(a.throughput for a in allocations) / num_mobiles)
    mean_rate = float(sum(a.rate for a in allocations) / num_mobiles)
    return TrialSummary(
        mean_outage=mean_outage,
        mean_throughput=mean_throughput,
        area_spectral_efficiency=transmission_density(num_mobiles, net_radius) * mean_throughput,
        denied_count=num_mobiles - len(served),
        mean_rate=mean_rate,
        fixed_rate=fixed_rate,
        per_uplink=allocations,
    )


def ccdf(samples, grid):
    """Complementary cdf: fraction of samples strictly greater than each grid value."""
    samples = np.sort(np.asarray(samples, dtype=float))
    if samples.size == 0:
        raise ValueError("ccdf needs at least one sample")
    grid = np.asarray(grid, dtype=float)
    return 1.0 - np.searchsorted(samples, grid, side="right") / samples.size
