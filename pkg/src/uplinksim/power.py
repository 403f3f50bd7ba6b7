"""Power control and the normalized mean despread power vector of an uplink.

Every served mobile inverts its shadowed path loss so that its signal reaches
its serving sector antenna at a common power. For a reference uplink, the mean
despread power of each other mobile at the reference antenna (normalized by
the reference transmit power) then follows in closed form: intracell
interferers all land at chip_factor/G times the desired power, intercell
interferers carry a cross-gain ratio between their path to the reference
antenna and the path to their own serving antenna, and everything else
(uncovered mobiles, denied mobiles, the reference itself) contributes zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .association import AssociationState
from .channel import ChannelParams, db_to_linear, nakagami_m, path_gain
from .spatial import SECTORS_PER_BS, NetworkRealization, distances


@dataclass(frozen=True)
class UplinkInstance:
    """Everything the outage kernel needs for one reference uplink.

    interference_power / fading_m / activity are indexed by mobile id; a zero
    power marks a mobile that does not interfere (not covered, denied, or the
    reference itself). ``snr`` is linear.
    """

    mobile: int
    sector: int
    signal_power: float
    interference_power: np.ndarray
    fading_m_desired: int
    fading_m: np.ndarray
    activity: np.ndarray
    snr: float

    def __post_init__(self):
        if self.signal_power <= 0:
            raise ValueError("signal_power must be positive")
        if self.snr <= 0:
            raise ValueError("snr must be positive")
        m0 = self.fading_m_desired
        if not float(m0).is_integer() or m0 < 1:
            raise ValueError("the desired-link fading parameter must be a positive integer")
        if np.any(self.interference_power < 0):
            raise ValueError("interference powers must be non-negative")
        if np.any((self.activity < 0) | (self.activity > 1)):
            raise ValueError("activity probabilities must lie in [0, 1]")
        if np.any(self.fading_m <= 0):
            raise ValueError("fading parameters must be positive")


@dataclass
class UplinkBatch:
    """All served uplinks of one realization, interferers in flat CSR layout.

    Link i owns slots offsets[i]:offsets[i+1] of the flat arrays; only
    nonzero interference powers are stored.
    """

    mobiles: np.ndarray  # (n,) mobile ids
    sectors: np.ndarray  # (n,) serving sector ids
    signal_power: np.ndarray  # (n,)
    fading_m_desired: np.ndarray  # (n,) int64
    snr: np.ndarray  # (n,)
    power_flat: np.ndarray
    fading_m_flat: np.ndarray
    activity_flat: np.ndarray
    offsets: np.ndarray  # (n + 1,) int64

    @property
    def n(self) -> int:
        return self.mobiles.size

    @classmethod
    def from_instances(cls, instances) -> "UplinkBatch":
        mobiles, sectors, sig, m0, snr = [], [], [], [], []
        power, fm, act = [], [], []
        offsets = [0]
        for link in instances:
            mobiles.append(link.mobile)
            sectors.append(link.sector)
            sig.append(link.signal_power)
            m0.append(int(link.fading_m_desired))
            snr.append(link.snr)
            nz = np.flatnonzero(link.interference_power > 0)
            power.append(np.asarray(link.interference_power, dtype=float)[nz])
            fm.append(np.asarray(link.fading_m, dtype=float)[nz])
            act.append(np.asarray(link.activity, dtype=float)[nz])
            offsets.append(offsets[-1] + nz.size)
        return cls(
            mobiles=np.array(mobiles, dtype=np.int64),
            sectors=np.array(sectors, dtype=np.int64),
            signal_power=np.array(sig, dtype=float),
            fading_m_desired=np.array(m0, dtype=np.int64),
            snr=np.array(snr, dtype=float),
            power_flat=_cat(power),
            fading_m_flat=_cat(fm),
            activity_flat=_cat(act),
            offsets=np.array(offsets, dtype=np.int64),
        )


def _cat(parts):
    return np.concatenate(parts) if parts else np.empty(0, dtype=float)


def normalized_transmit_power(mobile, sector, realization, channel: ChannelParams):
    """Transmit power of a served mobile relative to the common received power.

    Power control inverts the shadowed path loss to the serving antenna:
    P_i / P_0 = 1 / (10^(shadow/10) * path_gain(distance)).
    """
    bs = sector // SECTORS_PER_BS
    d = float(np.linalg.norm(realization.bs_positions[bs] - realization.mobile_positions[mobile]))
    gain = db_to_linear(realization.shadowing_db[mobile, bs]) * path_gain(
        d, channel.d0, channel.alpha
    )
    return 1.0 / gain


def build_uplink(
    realization: NetworkRealization,
    assoc: AssociationState,
    reference: int,
    channel: ChannelParams,
    bs_exclusion: float,
    activity: float = 1.0,
) -> UplinkInstance:
    """Normalized power vector and fading parameters for one reference uplink.

    ``bs_exclusion`` sets the break distances of the distance-dependent
    fading model. Intercell interferer powers are evaluated from the literal
    power-balance expression (cross distances and the three shadowing
    factors); the batch builder uses an algebraically factored form, and the
    two agree to rounding.
    """
    sector = int(assoc.serving[reference])
    if sector < 0:
        raise ValueError(f"reference mobile {reference} is denied service")
    bs = sector // SECTORS_PER_BS
    alpha = channel.alpha
    ratio = channel.chip_factor / channel.spreading_factor

    dist = distances(realization.bs_positions, realization.mobile_positions)
    xi = realization.shadowing_db

    signal_power = db_to_linear(xi[reference, bs]) * dist[reference, bs] ** (-alpha)
    intracell = ratio * signal_power

    num_mobiles = realization.num_mobiles
    power = np.zeros(num_mobiles)
    for i in assoc.coverage[sector]:
        if i == reference:
            continue
        k = int(assoc.serving[i])
        if k < 0:
            continue  # denied mobiles do not transmit
        if k == sector:
            power[i] = intracell
        else:
            bs_k = k // SECTORS_PER_BS
            xi_eff = xi[i, bs] + xi[reference, bs] - xi[i, bs_k]
            power[i] = (
                ratio
                * db_to_linear(xi_eff)
                * (dist[i, bs] * dist[reference, bs] / dist[i, bs_k]) ** (-alpha)
            )

    fading_m = nakagami_m(dist[:, bs], bs_exclusion, channel.fading, channel.fading_m)
    m_desired = int(round(float(fading_m[reference])))
    return UplinkInstance(
        mobile=reference,
        sector=sector,
        signal_power=float(signal_power),
        interference_power=power,
        fading_m_desired=m_desired,
        fading_m=np.asarray(fading_m, dtype=float),
        activity=np.full(num_mobiles, float(activity)),
        snr=channel.snr,
    )


def build_uplink_batch(
    realization: NetworkRealization,
    assoc: AssociationState,
    channel: ChannelParams,
    bs_exclusion: float,
    activity: float = 1.0,
) -> UplinkBatch:
    """Uplink instances for every served mobile, in mobile-id order.

    Per sector, the cross-gain ratio of each served covered mobile to the
    receiving antenna is computed once; each reference uplink in the sector
    then scales it by its own desired power. Intracell members have ratio
    exactly one, which reproduces the common chip_factor/G * signal_power
    value bit for bit.
    """
    alpha = channel.alpha
    ratio = channel.chip_factor / channel.spreading_factor

    dist = distances(realization.bs_positions, realization.mobile_positions)
    xi = realization.shadowing_db

    serving = assoc.serving
    served_mask = serving >= 0
    serving_bs = np.where(served_mask, serving // SECTORS_PER_BS, 0)

    rows = np.arange(realization.num_mobiles)
    own_power = db_to_linear(xi[rows, serving_bs]) * dist[rows, serving_bs] ** (-alpha)

    entries = {}
    for j in range(realization.num_sectors):
        members = assoc.served[j]
        if members.size == 0:
            continue
        bs_j = j // SECTORS_PER_BS
        covered = assoc.coverage[j]
        active = covered[served_mask[covered]]
        # cross-gain ratio to the receiving antenna relative to each mobile's
        # own serving antenna; exactly 1 for intracell members
        q = db_to_linear(xi[active, bs_j] - xi[active, serving_bs[active]]) * (
            dist[active, bs_j] / dist[active, serving_bs[active]]
        ) ** (-alpha)
        m_active = nakagami_m(dist[active, bs_j], bs_exclusion, channel.fading, channel.fading_m)
        m_members = nakagami_m(dist[members, bs_j], bs_exclusion, channel.fading, channel.fading_m)
        for idx, r in enumerate(members):
            keep = active != r
            entries[int(r)] = (
                j,
                float(own_power[r]),
                int(round(float(m_members[idx]))),
                ratio * own_power[r] * q[keep],
                m_active[keep],
            )

    mobiles, sectors, sig, m0s = [], [], [], []
    power_parts, m_parts, act_parts = [], [], []
    offsets = [0]
    for r in sorted(entries):
        j, sp, m0, w, mm = entries[r]
        mobiles.append(r)
        sectors.append(j)
        sig.append(sp)
        m0s.append(m0)
        power_parts.append(w)
        m_parts.append(np.asarray(mm, dtype=float))
        act_parts.append(np.full(w.size, float(activity)))
        offsets.append(offsets[-1] + w.size)

    n = len(mobiles)
    return UplinkBatch(
        mobiles=np.array(mobiles, dtype=np.int64),
        sectors=np.array(sectors, dtype=np.int64),
        signal_power=np.array(sig, dtype=float),
        fading_m_desired=np.array(m0s, dtype=np.int64),
        snr=np.full(n, channel.snr),
        power_flat=_cat(power_parts),
        fading_m_flat=_cat(m_parts),
        activity_flat=_cat(act_parts),
        offsets=np.array(offsets, dtype=np.int64),
    )
