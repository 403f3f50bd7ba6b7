"""Rate control: threshold mapping and the four allocation policies.

Fixed-rate policies pick one rate per network realization, either maximizing
the mean throughput (mtfr) or meeting a mean outage constraint (ocfr).
Variable-rate policies pick one rate per uplink, maximizing its own
throughput (mtvr) or meeting the outage constraint on every uplink (ocvr).
Rates map to SINR thresholds through the Shannon relation beta = 2^R - 1;
outage is non-decreasing in the threshold, so constrained selection is a
bisection and throughput maximization is a grid search refined by a
golden-section pass.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .outage import outage_batch
from .power import UplinkBatch, UplinkInstance

MTFR = "mtfr"
OCFR = "ocfr"
MTVR = "mtvr"
OCVR = "ocvr"
POLICY_KINDS = (MTFR, OCFR, MTVR, OCVR)

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0
_LN2 = np.log(2.0)


@dataclass(frozen=True)
class PolicyConfig:
    kind: str = OCVR
    outage_limit: float = 0.1  # constraint for ocfr / ocvr
    rate_min: float = 0.0
    rate_max: float = 10.0
    grid_step: float = 0.05
    rate_tol: float = 1e-4
    rate_ladder: tuple | None = None  # optional discrete rate set; None = continuous

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ValueError(f"unknown policy kind {self.kind!r}")
        if not 0 < self.outage_limit < 1:
            raise ValueError("outage_limit must be in (0, 1)")
        if self.rate_min < 0 or self.rate_max <= self.rate_min:
            raise ValueError("need 0 <= rate_min < rate_max")
        if self.grid_step <= 0 or self.rate_tol <= 0:
            raise ValueError("grid_step and rate_tol must be positive")
        if self.rate_ladder is not None:
            ladder = tuple(sorted(float(r) for r in self.rate_ladder))
            if not ladder or ladder[0] < 0:
                raise ValueError("rate_ladder must be non-empty with non-negative rates")
            object.__setattr__(self, "rate_ladder", ladder)


def rate_to_threshold(rate):
    """SINR threshold supporting the given rate: 2^R - 1."""
    out = np.expm1(np.asarray(rate, dtype=float) * _LN2)
    return float(out) if np.ndim(rate) == 0 else out


def threshold_to_rate(threshold):
    """Inverse of rate_to_threshold: log2(1 + beta)."""
    out = np.log1p(np.asarray(threshold, dtype=float)) / _LN2
    return float(out) if np.ndim(threshold) == 0 else out


def _bisect_iterations(span: float, tol: float) -> int:
    return max(1, int(np.ceil(np.log2(span / tol))))


def ocvr_rates(batch: UplinkBatch, config: PolicyConfig):
    """Largest per-uplink rates whose outage stays within the constraint.

    Synchronized bisection on the rate, one kernel batch per iteration. The
    returned rates are feasible lower bisection ends (rate 0 is always
    feasible), so the constraint holds for every returned link. With a rate
    ladder configured, each link gets its largest feasible ladder rate
    (zero when none qualifies).
    """
    n = batch.n
    zeta = config.outage_limit
    if config.rate_ladder is not None:
        rates = np.zeros(n)
        for r in config.rate_ladder:
            feasible = outage_batch(batch, rate_to_threshold(r)) <= zeta
            rates = np.where(feasible, r, rates)
        thresholds = rate_to_threshold(rates)
        return rates, thresholds, outage_batch(batch, thresholds)
    lo = np.zeros(n)
    hi = np.full(n, config.rate_max)
    at_max = outage_batch(batch, rate_to_threshold(hi)) <= zeta
    for _ in range(_bisect_iterations(config.rate_max, config.rate_tol)):
        mid = 0.5 * (lo + hi)
        feasible = outage_batch(batch, rate_to_threshold(mid)) <= zeta
        lo = np.where(feasible, mid, lo)
        hi = np.where(feasible, hi, mid)
    rates = np.where(at_max, config.rate_max, lo)
    thresholds = rate_to_threshold(rates)
    eps = outage_batch(batch, thresholds)
    return rates, thresholds, eps


def mtvr_rates(batch: UplinkBatch, config: PolicyConfig):
    """Per-uplink rates maximizing R * (1 - outage(2^R - 1)).

    Grid scan over [rate_min, rate_max], then a vectorized golden-section
    refinement inside the best grid cell of each link. Keeps whichever of the
    refined and grid candidates scores higher. With a rate ladder configured
    the maximization runs over the ladder alone.
    """
    n = batch.n

    def score(rates):
        return rates * (1.0 - outage_batch(batch, rate_to_threshold(rates)))

    if config.rate_ladder is not None:
        best_rate = np.zeros(n)
        best_score = np.zeros(n)
        for r in config.rate_ladder:
            t = score(np.full(n, r))
            better = t > best_score
            best_score = np.where(better, t, best_score)
            best_rate = np.where(better, r, best_rate)
        thresholds = rate_to_threshold(best_rate)
        return best_rate, thresholds, outage_batch(batch, thresholds)

    best_rate = np.full(n, config.rate_min)
    best_score = score(best_rate)
    for r in _rate_grid(config)[1:]:
        t = score(np.full(n, r))
        better = t > best_score
        best_score = np.where(better, t, best_score)
        best_rate = np.where(better, r, best_rate)

    a = np.maximum(best_rate - config.grid_step, config.rate_min)
    b = np.minimum(best_rate + config.grid_step, config.rate_max)
    a, b = _golden_max(score, a, b, config.rate_tol)
    refined = 0.5 * (a + b)
    refined_score = score(refined)
    rates = np.where(refined_score >= best_score, refined, best_rate)
    thresholds = rate_to_threshold(rates)
    eps = outage_batch(batch, thresholds)
    return rates, thresholds, eps


def _rate_grid(config: PolicyConfig):
    count = int(np.floor((config.rate_max - config.rate_min) / config.grid_step + 1e-9)) + 1
    grid = config.rate_min + config.grid_step * np.arange(count)
    if grid[-1] < config.rate_max - 1e-12:
        grid = np.append(grid, config.rate_max)
    return grid


def _golden_max(score, a, b, tol):
    """Vectorized golden-section maximization; returns the final brackets.

    One score evaluation per iteration: the surviving interior point of each
    link is reused, only its new partner is probed.
    """
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = score(c)
    fd = score(d)
    span = float(np.max(b - a)) if np.size(a) else 0.0
    iters = max(1, int(np.ceil(np.log(max(span, tol) / tol) / -np.log(_INVPHI))))
    for _ in range(iters):
        left = fc >= fd  # maximum lies in [a, d]; otherwise in [c, b]
        new_a = np.where(left, a, c)
        new_b = np.where(left, d, b)
        c_fresh = new_b - _INVPHI * (new_b - new_a)
        d_fresh = new_a + _INVPHI * (new_b - new_a)
        fprobe = score(np.where(left, c_fresh, d_fresh))
        # old c survives as new d on the left branch, old d as new c on the right
        new_c = np.where(left, c_fresh, d)
        new_d = np.where(left, c, d_fresh)
        new_fc = np.where(left, fprobe, fd)
        new_fd = np.where(left, fc, fprobe)
        a, b, c, d, fc, fd = new_a, new_b, new_c, new_d, new_fc, new_fd
    return a, b


def fixed_rate_select(batch: UplinkBatch, kind: str, config: PolicyConfig) -> float:
    """Common rate for one realization: ocfr or mtfr.

    ocfr: largest rate with mean outage over served uplinks <= the limit
    (bisection; denied mobiles have no outage event and stay out of the
    average). mtfr: rate maximizing the summed throughput of served uplinks,
    grid plus scalar golden-section (denied mobiles add a constant zero, so
    the maximizer matches the per-mobile mean).
    """
    if batch.n == 0:
        raise ValueError("fixed-rate selection needs at least one served uplink")
    if kind == OCFR:
        zeta = config.outage_limit

        def mean_eps(rate):
            return float(np.mean(outage_batch(batch, rate_to_threshold(rate))))

        if config.rate_ladder is not None:
            best = 0.0
            for r in config.rate_ladder:
                if mean_eps(r) <= zeta:
                    best = max(best, r)
            return best
        if mean_eps(config.rate_max) <= zeta:
            return config.rate_max
        lo, hi = 0.0, config.rate_max
        for _ in range(_bisect_iterations(config.rate_max, config.rate_tol)):
            mid = 0.5 * (lo + hi)
            if mean_eps(mid) <= zeta:
                lo = mid
            else:
                hi = mid
        return lo
    if kind == MTFR:

        def total_throughput(rate):
            eps = outage_batch(batch, rate_to_threshold(rate))
            return rate * float(np.sum(1.0 - eps))

        if config.rate_ladder is not None:
            values = [total_throughput(r) for r in config.rate_ladder]
            return float(config.rate_ladder[int(np.argmax(values))])
        grid = _rate_grid(config)
        values = [total_throughput(r) for r in grid]
        best = int(np.argmax(values))
        a = max(grid[best] - config.grid_step, config.rate_min)
        b = min(grid[best] + config.grid_step, config.rate_max)
        rate = _golden_max_scalar(total_throughput, a, b, config.rate_tol)
        return rate if total_throughput(rate) >= values[best] else float(grid[best])
    raise ValueError(f"not a fixed-rate policy: {kind!r}")


def _golden_max_scalar(func, a, b, tol):
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = func(c), func(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = func(d)
    return 0.5 * (a + b)


def ocvr_rate(link: UplinkInstance, outage_limit: float, config: PolicyConfig | None = None):
    """Largest rate keeping this uplink's outage within the limit."""
    cfg = dataclasses.replace(config or PolicyConfig(), kind=OCVR, outage_limit=outage_limit)
    rates, thresholds, eps = ocvr_rates(UplinkBatch.from_instances([link]), cfg)
    return float(rates[0]), float(thresholds[0]), float(eps[0])


def mtvr_rate(link: UplinkInstance, config: PolicyConfig | None = None):
    """Rate maximizing this uplink's throughput."""
    cfg = dataclasses.replace(config or PolicyConfig(), kind=MTVR)
    rates, thresholds, eps = mtvr_rates(UplinkBatch.from_instances([link]), cfg)
    return float(rates[0]), float(thresholds[0]), float(eps[0])


def allocate_rates(batch: UplinkBatch, config: PolicyConfig):
    """Apply the configured policy to one realization's served uplinks.

    Returns (rates, thresholds, outages, fixed_rate); fixed_rate is None for
    the variable-rate policies.
    """
    if config.kind == OCVR:
        rates, thresholds, eps = ocvr_rates(batch, config)
        return rates, thresholds, eps, None
    if config.kind == MTVR:
        rates, thresholds, eps = mtvr_rates(batch, config)
        return rates, thresholds, eps, None
    rate = fixed_rate_select(batch, config.kind, config)
    rates = np.full(batch.n, rate)
    thresholds = rate_to_threshold(rates)
    eps = outage_batch(batch, thresholds)
    return rates, thresholds, eps, rate
