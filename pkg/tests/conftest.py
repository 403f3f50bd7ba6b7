import numpy as np
import pytest

from uplinksim.association import build_association
from uplinksim.channel import ChannelParams
from uplinksim.harness import trial_rng
from uplinksim.power import UplinkInstance, build_uplink_batch
from uplinksim.spatial import SpatialParams, generate_realization


def make_link(signal_power=1.0, powers=(), m_desired=1, ms=None, ps=None, snr=10.0):
    """Synthetic uplink: index 0 is the reference, interferers follow."""
    n = len(powers)
    power = np.zeros(n + 1)
    power[1:] = powers
    fading_m = np.ones(n + 1)
    if ms is not None:
        fading_m[1:] = ms
    activity = np.ones(n + 1)
    if ps is not None:
        activity[1:] = ps
    return UplinkInstance(
        mobile=0,
        sector=0,
        signal_power=signal_power,
        interference_power=power,
        fading_m_desired=m_desired,
        fading_m=fading_m,
        activity=activity,
        snr=snr,
    )


@pytest.fixture(scope="session")
def small_scenario():
    """One realized small network with association and uplink batch."""
    spatial = SpatialParams(
        num_bs=8, num_mobiles=60, net_radius=2.0, bs_exclusion=0.25, mobile_exclusion=0.01
    )
    channel = ChannelParams(
        alpha=3.0, shadow_std_db=8.0, snr_db=10.0, spreading_factor=16,
        fading="distance_dependent",
    )
    realization = generate_realization(spatial, channel.shadow_std_db, trial_rng(123, 0))
    assoc = build_association(realization, channel, channel.spreading_factor, 0.0)
    batch = build_uplink_batch(realization, assoc, channel, spatial.bs_exclusion, 1.0)
    return spatial, channel, realization, assoc, batch
