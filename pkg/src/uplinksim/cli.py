"""Command-line interface: run campaigns, evaluate single links, validate the kernel."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .harness import load_config, run_campaign
from .oracle import compare_kernel_oracle
from .outage import BACKEND, outage_probability
from .policy import rate_to_threshold
from .power import UplinkInstance


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="uplinksim",
        description="DS-CDMA cellular uplink simulator",
    )
    parser.add_argument("--version", action="version", version=f"uplinksim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a Monte Carlo campaign from a config file")
    p_run.add_argument("--config", required=True, help="YAML campaign configuration")
    p_run.add_argument("--trials", type=int, default=None, help="override trial count")
    p_run.add_argument("--seed", type=int, default=None, help="override master seed")
    p_run.add_argument("--output-dir", default=None, help="override output directory")

    p_out = sub.add_parser("outage", help="evaluate the outage of one uplink instance")
    p_out.add_argument("--input", required=True, help="YAML/JSON uplink description")

    p_val = sub.add_parser("validate", help="closed form vs Monte Carlo on random instances")
    p_val.add_argument("--instances", type=int, default=100)
    p_val.add_argument("--draws", type=int, default=100_000)
    p_val.add_argument("--seed", type=int, default=1)

    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "outage":
        return _cmd_outage(args)
    if args.command == "validate":
        return _cmd_validate(args)
    return 2


def _cmd_run(args) -> int:
    config = load_config(args.config)
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.output_dir is not None:
        overrides["output_dir"] = args.output_dir
    if overrides:
        config = dataclasses.replace(config, **overrides)

    result = run_campaign(config)
    print(f"# uplinksim {__version__} (backend: {BACKEND})")
    print(f"# policy={result.policy_kind} seed={result.master_seed}")
    header = "label" if result.sweep_parameter else ""
    print(
        f"{header:>24}  {'mean_outage':>12} {'mean_rate':>12} "
        f"{'mean_ase':>12} {'denial_prob':>12}"
    )
    for p in result.points:
        label = p.label or "-"
        print(
            f"{label:>24}  {p.mean_outage:12.6g} {p.mean_rate:12.6g} "
            f"{p.mean_ase:12.6g} {p.denial_probability:12.6g}"
        )
    if config.output_dir:
        print(f"# outputs written to {Path(config.output_dir).resolve()}")
    return 0


def _cmd_outage(args) -> int:
    with open(args.input) as fh:
        raw = yaml.safe_load(fh)
    link, threshold = link_from_dict(raw)
    print(f"{outage_probability(link, threshold):.12g}")
    return 0


def link_from_dict(raw: dict):
    """Build an UplinkInstance and threshold from a structured description.

    Required keys: signal_power, fading_m_desired, snr_db (or snr), and
    exactly one of beta / rate. Interferers is a list of
    {power, fading_m, activity} entries and may be empty or absent.
    """
    if ("beta" in raw) == ("rate" in raw):
        raise ValueError("provide exactly one of 'beta' or 'rate'")
    threshold = float(raw["beta"]) if "beta" in raw else rate_to_threshold(float(raw["rate"]))
    if "snr_db" in raw:
        snr = 10.0 ** (float(raw["snr_db"]) / 10.0)
    elif "snr" in raw:
        snr = float(raw["snr"])
    else:
        raise ValueError("provide 'snr_db' (dB) or 'snr' (linear)")

    interferers = raw.get("interferers") or []
    n = len(interferers)
    power = np.zeros(n + 1)
    fading_m = np.ones(n + 1)
    activity = np.ones(n + 1)
    for i, entry in enumerate(interferers):
        power[i + 1] = float(entry["power"])
        fading_m[i + 1] = float(entry.get("fading_m", 1.0))
        activity[i + 1] = float(entry.get("activity", 1.0))

    link = UplinkInstance(
        mobile=0,
        sector=0,
        signal_power=float(raw["signal_power"]),
        interference_power=power,
        fading_m_desired=int(raw["fading_m_desired"]),
        fading_m=fading_m,
        activity=activity,
        snr=snr,
    )
    return link, threshold


def _cmd_validate(args) -> int:
    rng = np.random.default_rng(args.seed)
    results, worst = compare_kernel_oracle(args.instances, args.draws, rng)
    print(f"# kernel backend: {BACKEND}")
    print(f"instances={args.instances} draws={args.draws}")
    for closed, est in results[:10]:
        sigma = abs(closed - est.outage) / est.std_error if est.std_error else float("inf")
        print(f"closed={closed:.6g} estimate={est.outage:.6g} deviation={sigma:.2f} sigma")
    if args.instances > 10:
        print(f"... ({args.instances - 10} more)")
    print(f"max deviation: {worst:.3f} standard errors")
    ok = worst <= 4.0
    print("PASS" if ok else "FAIL", "(4 sigma bound)")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
