import numpy as np
import pytest

from uplinksim.association import build_association
from uplinksim.channel import ChannelParams
from uplinksim.power import UplinkBatch, build_uplink, normalized_transmit_power
from uplinksim.spatial import NetworkRealization

NO_SHADOW = ChannelParams(shadow_std_db=0.0)


def realization_with(bs, mobiles, shadowing=None):
    bs = np.asarray(bs, dtype=float)
    mobiles = np.asarray(mobiles, dtype=float)
    if shadowing is None:
        shadowing = np.zeros((mobiles.shape[0], bs.shape[0]))
    return NetworkRealization(bs, mobiles, np.asarray(shadowing, dtype=float))


def test_transmit_power_inverts_path_gain():
    real = realization_with([[0.0, 0.0]], [[0.01, 0.0]])
    assoc = build_association(real, NO_SHADOW, 16, 0.0)
    sector = int(assoc.serving[0])
    assert normalized_transmit_power(0, sector, real, NO_SHADOW) == pytest.approx(1.0, rel=1e-12)


def test_transmit_power_inverts_shadowing():
    real = realization_with([[0.0, 0.0]], [[0.01, 0.0]], shadowing=[[10.0]])
    assoc = build_association(real, ChannelParams(), 16, 0.0)
    sector = int(assoc.serving[0])
    power = normalized_transmit_power(0, sector, real, ChannelParams())
    assert power == pytest.approx(0.1, rel=1e-12)


def test_transmit_power_distance_scaling():
    real = realization_with([[0.0, 0.0]], [[0.02, 0.0], [0.04, 0.0]])
    assoc = build_association(real, NO_SHADOW, 16, 0.0)
    p_near = normalized_transmit_power(0, int(assoc.serving[0]), real, NO_SHADOW)
    p_far = normalized_transmit_power(1, int(assoc.serving[1]), real, NO_SHADOW)
    assert p_far / p_near == pytest.approx(8.0, rel=1e-12)  # alpha = 3, distance doubled


def _one_sector_network(n_mobiles):
    angles = 0.2 + 0.002 * np.arange(n_mobiles)
    radii = 0.1 + 0.08 * np.arange(n_mobiles)
    mobiles = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
    return realization_with([[0.0, 0.0]], mobiles)


def test_intracell_ratio_is_exactly_chip_over_g():
    real = _one_sector_network(5)
    channel = NO_SHADOW
    assoc = build_association(real, channel, 16, 0.0)
    link = build_uplink(real, assoc, 0, channel, bs_exclusion=0.25)
    ratio = channel.chip_factor / channel.spreading_factor
    others = [i for i in range(1, 5)]
    values = link.interference_power[others]
    assert np.all(values == ratio * link.signal_power)  # exact, including shadowed cases
    assert link.interference_power[0] == 0.0  # reference never interferes with itself


def test_intercell_power_hand_value():
    # receiving antenna at origin, interferer served by the station at (1.8, 0)
    real = realization_with(
        [[0.0, 0.0], [1.8, 0.0]],
        [[0.5, 0.0], [1.0, 0.0]],
    )
    channel = NO_SHADOW
    assoc = build_association(real, channel, 16, 0.0)
    assert assoc.serving[0] // 3 == 0 and assoc.serving[1] // 3 == 1
    link = build_uplink(real, assoc, 0, channel, bs_exclusion=0.25)
    # distances: interferer->receiver 1.0, reference->receiver 0.5, interferer->server 0.8
    expected = (2.0 / 3.0 / 16.0) * (1.0 * 0.5 / 0.8) ** (-3.0)
    assert link.interference_power[1] == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(0.17066666666666666, rel=1e-12)


def test_uncovered_and_denied_mobiles_contribute_zero():
    # two mobiles on opposite sides of the receiving station: different sectors
    real = realization_with([[0.0, 0.0]], [[0.5, 0.1], [-0.5, -0.1]])
    assoc = build_association(real, NO_SHADOW, 16, 0.0)
    link = build_uplink(real, assoc, 0, NO_SHADOW, bs_exclusion=0.25)
    assert link.interference_power[1] == 0.0

    real2 = _one_sector_network(4)
    assoc2 = build_association(real2, NO_SHADOW, capacity=3, d_max=0.0)
    assert assoc2.denied.size == 1
    denied = int(assoc2.denied[0])
    reference = int(assoc2.served[assoc2.serving[0]][0])
    link2 = build_uplink(real2, assoc2, reference, NO_SHADOW, bs_exclusion=0.25)
    assert link2.interference_power[denied] == 0.0


def test_denied_reference_rejected():
    real = _one_sector_network(4)
    assoc = build_association(real, NO_SHADOW, capacity=3, d_max=0.0)
    denied = int(assoc.denied[0])
    with pytest.raises(ValueError):
        build_uplink(real, assoc, denied, NO_SHADOW, bs_exclusion=0.25)


def test_intracell_positions_irrelevant():
    real_a = _one_sector_network(5)
    # move the interferers around within the same sector
    angles = 0.45 - 0.003 * np.arange(5)
    radii = 0.3 + 0.05 * np.arange(5)
    mobiles_b = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
    mobiles_b[0] = real_a.mobile_positions[0]  # same reference location
    real_b = realization_with([[0.0, 0.0]], mobiles_b)
    assoc_a = build_association(real_a, NO_SHADOW, 16, 0.0)
    assoc_b = build_association(real_b, NO_SHADOW, 16, 0.0)
    link_a = build_uplink(real_a, assoc_a, 0, NO_SHADOW, bs_exclusion=0.25)
    link_b = build_uplink(real_b, assoc_b, 0, NO_SHADOW, bs_exclusion=0.25)
    assert np.array_equal(link_a.interference_power, link_b.interference_power)


def test_doubling_g_halves_interference_only():
    real = _one_sector_network(5)
    assoc = build_association(real, NO_SHADOW, 16, 0.0)
    link16 = build_uplink(real, assoc, 0, NO_SHADOW, bs_exclusion=0.25)
    channel32 = ChannelParams(shadow_std_db=0.0, spreading_factor=32)
    link32 = build_uplink(real, assoc, 0, channel32, bs_exclusion=0.25)
    assert link32.signal_power == link16.signal_power
    nz = link16.interference_power > 0
    assert np.allclose(
        link32.interference_power[nz], 0.5 * link16.interference_power[nz], rtol=1e-15
    )


def test_batch_matches_single_builder(small_scenario):
    spatial, channel, realization, assoc, batch = small_scenario
    for idx in range(0, batch.n, 7):
        mobile = int(batch.mobiles[idx])
        link = build_uplink(realization, assoc, mobile, channel, spatial.bs_exclusion)
        nz = np.flatnonzero(link.interference_power > 0)
        sl = slice(batch.offsets[idx], batch.offsets[idx + 1])
        assert batch.sectors[idx] == link.sector
        assert batch.signal_power[idx] == pytest.approx(link.signal_power, rel=1e-14)
        assert batch.fading_m_desired[idx] == link.fading_m_desired
        assert np.allclose(
            np.sort(batch.power_flat[sl]),
            np.sort(link.interference_power[nz]),
            rtol=1e-12,
        )


def test_batch_from_instances_roundtrip(small_scenario):
    spatial, channel, realization, assoc, batch = small_scenario
    links = [
        build_uplink(realization, assoc, int(m), channel, spatial.bs_exclusion)
        for m in batch.mobiles[:10]
    ]
    rebuilt = UplinkBatch.from_instances(links)
    assert rebuilt.n == 10
    assert np.array_equal(rebuilt.mobiles, batch.mobiles[:10])
    assert np.array_equal(rebuilt.offsets, batch.offsets[:11])


def test_instance_validation():
    from uplinksim.power import UplinkInstance

    with pytest.raises(ValueError):
        UplinkInstance(0, 0, -1.0, np.zeros(1), 1, np.ones(1), np.ones(1), 10.0)
    with pytest.raises(ValueError):
        UplinkInstance(0, 0, 1.0, np.zeros(1), 0, np.ones(1), np.ones(1), 10.0)
    with pytest.raises(ValueError):
        UplinkInstance(0, 0, 1.0, np.zeros(1), 1, np.ones(1), 2 * np.ones(1), 10.0)
