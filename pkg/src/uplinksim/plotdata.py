"""Figure-ready series extracted from campaign results.

Emits plain (x, y) CSV tables; rendering is left to external tools so the
outputs stay diffable. Sweep figures take one or several campaign results
(typically one per policy) and produce one series, hence one file, each.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .harness import CampaignResult
from .outage import outage_batch
from .policy import rate_to_threshold
from .power import UplinkBatch

FIGURES = (
    "ase_vs_load",
    "ase_vs_g",
    "ase_vs_rbs",
    "ase_vs_dmax",
    "denial_vs_dmax",
    "rate_ccdf",
)

_FIGURE_SWEEP = {
    "ase_vs_load": "load",
    "ase_vs_g": "spreading_factor",
    "ase_vs_rbs": "bs_exclusion",
    "ase_vs_dmax": "d_max",
    "denial_vs_dmax": "d_max",
}


@dataclass(frozen=True)
class Series:
    label: str
    points: tuple

    def __post_init__(self):
        xs = [x for x, _ in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("series x values must be strictly increasing")

    @property
    def x(self):
        return np.array([x for x, _ in self.points])

    @property
    def y(self):
        return np.array([y for _, y in self.points])


def rate_sweep(batch: UplinkBatch, rates, num_mobiles: int | None = None, uplinks=()):
    """Mean outage and mean throughput as functions of a common rate.

    Returns a dict of Series: "mean_outage" and "mean_throughput" for the
    network average (throughput averaged over ``num_mobiles``, which may
    exceed the served count to account for denied mobiles), plus per-uplink
    curves for any batch indices listed in ``uplinks``.
    """
    if batch.n == 0:
        raise ValueError("rate sweep needs at least one served uplink")
    rates = np.asarray(rates, dtype=float)
    total = num_mobiles if num_mobiles is not None else batch.n
    eps_rows = np.empty((rates.size, batch.n))
    for i, r in enumerate(rates):
        eps_rows[i] = outage_batch(batch, rate_to_threshold(r))
    mean_eps = eps_rows.mean(axis=1)
    mean_thr = rates * np.sum(1.0 - eps_rows, axis=1) / total

    out = {
        "mean_outage": Series("mean_outage", tuple(zip(rates, mean_eps))),
        "mean_throughput": Series("mean_throughput", tuple(zip(rates, mean_thr))),
    }
    for idx in uplinks:
        eps_i = eps_rows[:, idx]
        mobile = int(batch.mobiles[idx])
        out[f"outage_uplink_{mobile}"] = Series(
            f"outage_uplink_{mobile}", tuple(zip(rates, eps_i))
        )
        out[f"throughput_uplink_{mobile}"] = Series(
            f"throughput_uplink_{mobile}", tuple(zip(rates, rates * (1.0 - eps_i)))
        )
    return out


def figure_series(results, figure: str):
    """Series for one figure family from one or several campaign results."""
    if figure not in FIGURES:
        raise ValueError(f"unknown figure {figure!r} (choose from {FIGURES})")
    if isinstance(results, CampaignResult):
        results = [results]
    results = list(results)
    if not results or any(not r.points for r in results):
        raise ValueError("empty campaign result")

    series = []
    if figure == "rate_ccdf":
        for r in results:
            for p in r.points:
                if p.rate_ccdf is None:
                    raise ValueError("campaign point has no pooled rate samples")
                label = r.policy_kind if not p.label else f"{r.policy_kind}_{p.label}"
                xs, ys = p.rate_ccdf
                series.append(Series(label, tuple(zip(xs, ys))))
        return series

    expected = _FIGURE_SWEEP[figure]
    for r in results:
        if r.sweep_parameter != expected:
            raise ValueError(
                f"figure {figure!r} needs a campaign swept over {expected!r}, "
                f"got {r.sweep_parameter!r}"
            )
        pts = sorted(r.points, key=lambda p: p.value)
        if figure == "denial_vs_dmax":
            values = [(p.value, p.denial_probability) for p in pts]
        else:
            values = [(p.value, p.mean_ase) for p in pts]
        series.append(Series(r.policy_kind, tuple(values)))
    return series


def export_series(results, figure: str, output_dir) -> list:
    """Write one CSV per series, named <figure>_<label>.csv; returns the paths."""
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    ycol = "ccdf" if figure == "rate_ccdf" else "y"
    paths = []
    for s in figure_series(results, figure):
        path = outdir / f"{figure}_{s.label}.csv"
        with open(path, "w") as fh:
            fh.write(f"x,{ycol}\n")
            for x, y in s.points:
                fh.write(f"{x:.12g},{y:.12g}\n")
        paths.append(path)
    return paths
