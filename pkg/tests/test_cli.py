import json

import numpy as np
import pytest
import yaml

from uplinksim.cli import link_from_dict, main
from uplinksim.outage import outage_probability


def test_outage_subcommand(tmp_path, capsys):
    spec = {
        "signal_power": 2.0,
        "fading_m_desired": 2,
        "snr_db": 10.0,
        "beta": 1.0,
        "interferers": [
            {"power": 0.05, "fading_m": 1.0, "activity": 1.0},
            {"power": 0.02, "fading_m": 3.0, "activity": 0.5},
        ],
    }
    path = tmp_path / "link.yaml"
    path.write_text(yaml.safe_dump(spec))
    assert main(["outage", "--input", str(path)]) == 0
    printed = float(capsys.readouterr().out.strip())
    link, threshold = link_from_dict(spec)
    assert printed == pytest.approx(outage_probability(link, threshold), rel=1e-11)


def test_link_from_dict_rate_alternative():
    spec = {"signal_power": 1.0, "fading_m_desired": 1, "snr_db": 0.0, "rate": 1.0}
    link, threshold = link_from_dict(spec)
    assert threshold == pytest.approx(1.0, rel=1e-14)
    assert link.snr == 1.0
    with pytest.raises(ValueError):
        link_from_dict({**spec, "beta": 2.0})  # both rate and beta
    with pytest.raises(ValueError):
        link_from_dict({"signal_power": 1.0, "fading_m_desired": 1, "rate": 1.0})


def test_validate_subcommand(capsys):
    code = main(["validate", "--instances", "3", "--draws", "20000", "--seed", "7"])
    out = capsys.readouterr().out
    assert code == 0
    assert "max deviation" in out
    assert "PASS" in out


def test_run_subcommand(tmp_path, capsys):
    config = {
        "spatial": {
            "num_bs": 5,
            "num_mobiles": 25,
            "net_radius": 2.0,
            "bs_exclusion": 0.25,
            "mobile_exclusion": 0.01,
        },
        "channel": {"snr_db": 10.0, "spreading_factor": 16},
        "policy": {"kind": "ocvr"},
        "trials": 2,
        "master_seed": 3,
    }
    cfg_path = tmp_path / "cfg.yaml"
    cfg_path.write_text(yaml.safe_dump(config))
    outdir = tmp_path / "out"
    code = main(
        ["run", "--config", str(cfg_path), "--output-dir", str(outdir), "--trials", "2"]
    )
    assert code == 0
    assert (outdir / "summary.json").exists()
    assert (outdir / "uplinks.csv").exists()
    summary = json.loads((outdir / "summary.json").read_text())
    assert summary["points"][0]["trials"] == 2
    out = capsys.readouterr().out
    assert "mean_ase" in out
