"""Campaign driver: configuration, Monte Carlo trials, result files.

A campaign runs independent trials, each drawing a network realization,
associating mobiles to sectors, applying power control, selecting rates
under the configured policy and computing exact per-uplink outages. Trials
are reproducible: trial k draws from a generator seeded by
(master_seed, k), so results do not depend on execution order or the number
of worker threads. Placement failures abort the campaign instead of being
resampled, which would bias the spatial distribution.
"""

from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .association import build_association
from .channel import ChannelParams
from .metrics import RateAllocation, TrialSummary, ccdf, trial_metrics
from .policy import PolicyConfig, allocate_rates
from .power import build_uplink_batch
from .spatial import (
    NetworkRealization,
    PlacementInfeasibleError,
    SpatialParams,
    generate_realization,
    realization_from_topology,
)

SWEEP_PARAMETERS = ("load", "spreading_factor", "bs_exclusion", "d_max")


@dataclass(eq=False)
class FixedTopology:
    """User-supplied coordinates replacing random placement."""

    bs_positions: np.ndarray
    mobile_positions: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class CampaignConfig:
    spatial: SpatialParams
    channel: ChannelParams
    policy: PolicyConfig
    d_max: float = 0.0
    activity: float = 1.0
    trials: int = 1000
    master_seed: int = 1
    workers: int = 1
    sweep_parameter: str | None = None
    sweep_values: tuple = ()
    output_dir: str | None = None
    topology: FixedTopology | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not 0 <= self.activity <= 1:
            raise ValueError("activity must be in [0, 1]")
        if self.d_max < 0:
            raise ValueError("d_max must be non-negative")
        if self.sweep_parameter is not None:
            if self.sweep_parameter not in SWEEP_PARAMETERS:
                raise ValueError(f"unknown sweep parameter {self.sweep_parameter!r}")
            if not self.sweep_values:
                raise ValueError("sweep_values must be non-empty when sweeping")
        if abs(self.channel.d0 - self.spatial.far_field) > 1e-12:
            raise ValueError("channel d0 and spatial far_field are the same length and must match")


@dataclass
class SweepPointResult:
    parameter: str | None
    value: float | None
    label: str
    trials: int
    mean_outage: float
    mean_throughput: float
    mean_ase: float
    mean_rate: float
    mean_fixed_rate: float | None
    denial_probability: float
    outage_ccdf: tuple | None
    rate_ccdf: tuple | None
    summaries: tuple


@dataclass
class CampaignResult:
    master_seed: int
    policy_kind: str
    sweep_parameter: str | None
    points: list
    config_echo: dict


def load_config(path) -> CampaignConfig:
    """Read a campaign configuration from a YAML (or JSON) key/value tree."""
    with open(path) as fh:
        raw = yaml.safe_load(fh)
    return config_from_dict(raw, base_dir=Path(path).parent)


def config_from_dict(raw: dict, base_dir: Path | None = None) -> CampaignConfig:
    raw = dict(raw)
    spatial_raw = dict(raw.pop("spatial"))
    channel_raw = dict(raw.pop("channel", {}))
    policy_raw = dict(raw.pop("policy", {}))
    # the spatial far-field radius and the path-loss reference are one length
    channel_raw.setdefault("d0", spatial_raw.get("far_field", 0.01))
    spatial = SpatialParams(**spatial_raw)
    channel = ChannelParams(**channel_raw)
    policy = PolicyConfig(**policy_raw)

    sweep_raw = raw.pop("sweep", None)
    sweep_parameter = None
    sweep_values = ()
    if sweep_raw:
        sweep_parameter = sweep_raw["parameter"]
        sweep_values = tuple(float(v) for v in sweep_raw["values"])

    topology = None
    topo_path = raw.pop("topology_file", None)
    if topo_path:
        topo_path = Path(topo_path)
        if base_dir is not None and not topo_path.is_absolute():
            topo_path = base_dir / topo_path
        topology = load_topology(topo_path)

    known = {"d_max", "activity", "trials", "master_seed", "workers", "output_dir"}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown configuration keys: {sorted(unknown)}")
    return CampaignConfig(
        spatial=spatial,
        channel=channel,
        policy=policy,
        sweep_parameter=sweep_parameter,
        sweep_values=sweep_values,
        topology=topology,
        **raw,
    )


def load_topology(path) -> FixedTopology:
    with open(path) as fh:
        raw = yaml.safe_load(fh)
    bs = np.asarray(raw["bs_positions"], dtype=float)
    mobiles = raw.get("mobile_positions")
    if mobiles is not None:
        mobiles = np.asarray(mobiles, dtype=float)
    return FixedTopology(bs_positions=bs, mobile_positions=mobiles)


def config_echo(config: CampaignConfig) -> dict:
    echo = {
        "spatial": dataclasses.asdict(config.spatial),
        "channel": {
            k: v for k, v in dataclasses.asdict(config.channel).items() if k != "snr"
        },
        "policy": dataclasses.asdict(config.policy),
        "d_max": config.d_max,
        "activity": config.activity,
        "trials": config.trials,
        "master_seed": config.master_seed,
        "workers": config.workers,
    }
    if config.sweep_parameter:
        echo["sweep"] = {
            "parameter": config.sweep_parameter,
            "values": list(config.sweep_values),
        }
    if config.topology is not None:
        echo["topology"] = {
            "bs_positions": config.topology.bs_positions.tolist(),
            "mobile_positions": (
                None
                if config.topology.mobile_positions is None
                else config.topology.mobile_positions.tolist()
            ),
        }
    return echo


def apply_sweep_value(config: CampaignConfig, parameter: str, value: float) -> CampaignConfig:
    """New config with one swept parameter replaced."""
    if parameter == "load":
        spatial = dataclasses.replace(
            config.spatial, num_mobiles=int(round(value * config.spatial.num_bs))
        )
        return dataclasses.replace(config, spatial=spatial)
    if parameter == "spreading_factor":
        channel = dataclasses.replace(config.channel, spreading_factor=int(round(value)))
        return dataclasses.replace(config, channel=channel)
    if parameter == "bs_exclusion":
        spatial = dataclasses.replace(config.spatial, bs_exclusion=float(value))
        return dataclasses.replace(config, spatial=spatial)
    if parameter == "d_max":
        return dataclasses.replace(config, d_max=float(value))
    raise ValueError(f"unknown sweep parameter {parameter!r}")


def trial_rng(master_seed: int, trial_index: int):
    """Independent stream for one trial, derived by seed-sequence spawning."""
    return np.random.default_rng([master_seed, trial_index])


def run_trial(config: CampaignConfig, trial_index: int) -> TrialSummary:
    """One end-to-end realization: place, associate, power-control, rate-select."""
    rng = trial_rng(config.master_seed, trial_index)
    try:
        realization = _draw_realization(config, rng)
    except PlacementInfeasibleError as err:
        raise PlacementInfeasibleError(f"trial {trial_index}: {err}") from err

    capacity = config.channel.spreading_factor
    assoc = build_association(realization, config.channel, capacity, config.d_max)
    batch = build_uplink_batch(
        realization, assoc, config.channel, config.spatial.bs_exclusion, config.activity
    )

    num_mobiles = realization.num_mobiles
    if batch.n:
        rates, thresholds, eps, fixed_rate = allocate_rates(batch, config.policy)
    else:
        rates = thresholds = eps = np.empty(0)
        fixed_rate = None

    by_mobile = {int(m): idx for idx, m in enumerate(batch.mobiles)}
    allocations = []
    for i in range(num_mobiles):
        idx = by_mobile.get(i)
        if idx is None:
            allocations.append(
                RateAllocation(
                    mobile=i, sector=-1, served=False, rate=0.0, threshold=0.0,
                    outage=0.0, throughput=0.0,
                )
            )
        else:
            allocations.append(
                RateAllocation(
                    mobile=i,
                    sector=int(batch.sectors[idx]),
                    served=True,
                    rate=float(rates[idx]),
                    threshold=float(thresholds[idx]),
                    outage=float(eps[idx]),
                    throughput=float(rates[idx] * (1.0 - eps[idx])),
                )
            )
    return trial_metrics(allocations, num_mobiles, config.spatial.net_radius, fixed_rate)


def _draw_realization(config: CampaignConfig, rng) -> NetworkRealization:
    if config.topology is not None:
        return realization_from_topology(
            config.topology.bs_positions,
            config.topology.mobile_positions,
            config.spatial,
            config.channel.shadow_std_db,
            rng,
        )
    return generate_realization(config.spatial, config.channel.shadow_std_db, rng)


def run_campaign(config: CampaignConfig) -> CampaignResult:
    """Run all trials at every sweep point and aggregate.

    Trials may execute on worker threads; aggregation always follows trial
    index order, so the result is identical for any worker count.
    """
    if config.sweep_parameter:
        points = [
            (config.sweep_parameter, v, apply_sweep_value(config, config.sweep_parameter, v))
            for v in config.sweep_values
        ]
    else:
        points = [(None, None, config)]

    results = []
    for parameter, value, cfg in points:
        summaries = _run_trials(cfg)
        results.append(_aggregate_point(parameter, value, cfg, summaries))

    result = CampaignResult(
        master_seed=config.master_seed,
        policy_kind=config.policy.kind,
        sweep_parameter=config.sweep_parameter,
        points=results,
        config_echo=config_echo(config),
    )
    if config.output_dir:
        write_outputs(result, Path(config.output_dir))
    return result


def _run_trials(config: CampaignConfig):
    indices = range(config.trials)
    if config.workers == 1:
        return [run_trial(config, k) for k in indices]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(lambda k: run_trial(config, k), indices))


def _aggregate_point(parameter, value, config: CampaignConfig, summaries) -> SweepPointResult:
    num_mobiles = config.spatial.num_mobiles
    mean_outage = float(np.mean([s.mean_outage for s in summaries]))
    mean_throughput = float(np.mean([s.mean_throughput for s in summaries]))
    mean_ase = float(np.mean([s.area_spectral_efficiency for s in summaries]))
    mean_rate = float(np.mean([s.mean_rate for s in summaries]))
    denial = float(np.mean([s.denied_count / num_mobiles for s in summaries]))
    fixed = [s.fixed_rate for s in summaries if s.fixed_rate is not None]
    mean_fixed = float(np.mean(fixed)) if fixed else None

    served_eps = [a.outage for s in summaries for a in s.per_uplink if a.served]
    all_rates = [a.rate for s in summaries for a in s.per_uplink]
    outage_grid = np.linspace(0.0, 1.0, 101)
    rate_grid = np.linspace(0.0, config.policy.rate_max, 201)
    outage_curve = (outage_grid, ccdf(served_eps, outage_grid)) if served_eps else None
    rate_curve = (rate_grid, ccdf(all_rates, rate_grid)) if all_rates else None

    label = "" if parameter is None else f"{parameter}-{value:g}"
    return SweepPointResult(
        parameter=parameter,
        value=value,
        label=label,
        trials=len(summaries),
        mean_outage=mean_outage,
        mean_throughput=mean_throughput,
        mean_ase=mean_ase,
        mean_rate=mean_rate,
        mean_fixed_rate=mean_fixed,
        denial_probability=denial,
        outage_ccdf=outage_curve,
        rate_ccdf=rate_curve,
        summaries=tuple(summaries),
    )


def _fmt(x) -> str:
    return f"{x:.12g}"


def write_outputs(result: CampaignResult, outdir: Path):
    """Write summary.json, per-uplink records and pooled ccdf curves."""
    from . import __version__

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    summary = {
        "provenance": {
            "package": "uplinksim",
            "version": __version__,
            "master_seed": result.master_seed,
            "policy": result.policy_kind,
            "placement_failures": "abort",
            "config": result.config_echo,
        },
        "points": [
            {
                "parameter": p.parameter,
                "value": p.value,
                "label": p.label,
                "trials": p.trials,
                "mean_outage": float(_fmt(p.mean_outage)),
                "mean_throughput": float(_fmt(p.mean_throughput)),
                "mean_ase": float(_fmt(p.mean_ase)),
                "mean_rate": float(_fmt(p.mean_rate)),
                "mean_fixed_rate": (
                    None if p.mean_fixed_rate is None else float(_fmt(p.mean_fixed_rate))
                ),
                "denial_probability": float(_fmt(p.denial_probability)),
            }
            for p in result.points
        ],
    }
    with open(outdir / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")

    for p in result.points:
        suffix = f"_{p.label}" if p.label else ""
        with open(outdir / f"uplinks{suffix}.csv", "w") as fh:
            fh.write("trial,mobile,sector,served,rate,beta,epsilon,throughput\n")
            for trial, s in enumerate(p.summaries):
                for a in s.per_uplink:
                    fh.write(
                        f"{trial},{a.mobile},{a.sector},{int(a.served)},"
                        f"{_fmt(a.rate)},{_fmt(a.threshold)},{_fmt(a.outage)},"
                        f"{_fmt(a.throughput)}\n"
                    )
        for name, curve in (("epsilon", p.outage_ccdf), ("rate", p.rate_ccdf)):
            if curve is None:
                continue
            xs, ys = curve
            with open(outdir / f"ccdf_{name}{suffix}.csv", "w") as fh:
                fh.write("x,ccdf\n")
                for x, y in zip(xs, ys):
                    fh.write(f"{_fmt(x)},{_fmt(y)}\n")
