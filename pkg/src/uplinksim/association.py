"""Coverage sets, serving-sector selection and overload resolution.

A mobile is covered by exactly one sector per base station (the one whose
angular range contains it) and is served by the covering sector with the
highest shadowed path gain. Sectors can serve at most ``capacity`` mobiles;
overload is resolved either by denying the worst mobiles service or by
letting them reselect another covering sector within ``d_max``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, db_to_linear, path_gain
from .spatial import SECTORS_PER_BS, NetworkRealization, distances, sector_indices


@dataclass
class AssociationState:
    """Result of associating one realization.

    coverage : list of per-sector arrays of covered mobile ids
    serving : (M,) serving sector id per mobile, -1 when denied
    served : list of per-sector arrays of served mobile ids
    denied : array of denied mobile ids
    """

    coverage: list
    serving: np.ndarray
    served: list
    denied: np.ndarray


def build_coverage(realization: NetworkRealization):
    """Per-sector coverage sets, indexed by sector id j = 3*bs + local."""
    sectors = sector_indices(
        realization.bs_positions, realization.mobile_positions, realization.sector_offset
    )
    num_sectors = realization.num_sectors
    coverage = [[] for _ in range(num_sectors)]
    for c in range(realization.num_bs):
        ids = SECTORS_PER_BS * c + sectors[:, c]
        for i in range(realization.num_mobiles):
            coverage[ids[i]].append(i)
    return [np.array(members, dtype=np.int64) for members in coverage]


def shadowed_gains(realization: NetworkRealization, channel: ChannelParams):
    """(M, C) shadowed path gain matrix 10^(shadow/10) * path_gain(distance)."""
    dist = distances(realization.bs_positions, realization.mobile_positions)
    return db_to_linear(realization.shadowing_db) * path_gain(dist, channel.d0, channel.alpha)


def associate(realization: NetworkRealization, coverage, channel: ChannelParams):
    """Serving sector per mobile: the covering sector with maximum shadowed gain.

    Ties break toward the lowest sector id (argmax over base stations keeps
    the first maximum, and sector ids grow with the base-station index).
    """
    sectors = sector_indices(
        realization.bs_positions, realization.mobile_positions, realization.sector_offset
    )
    gains = shadowed_gains(realization, channel)
    best_bs = np.argmax(gains, axis=1)
    rows = np.arange(realization.num_mobiles)
    return SECTORS_PER_BS * best_bs + sectors[rows, best_bs]


def resolve_overload(
    realization: NetworkRealization,
    coverage,
    serving,
    capacity: int,
    d_max: float,
    channel: ChannelParams,
) -> AssociationState:
    """Enforce the per-sector capacity bound.

    In each overloaded sector the mobiles with the greatest shadowed path
    loss are evicted, worst first. With d_max == 0 they are denied service.
    Otherwise each evicted mobile tries its other covering sectors in
    increasing path-loss order, skipping sectors that are full or whose
    antenna is farther than d_max; a mobile with no acceptable sector is
    denied. Sectors are processed in ascending id; passes repeat until no
    change (a reselected mobile never overloads its new sector, so a single
    pass normally suffices).
    """
    if capacity < 1:
        raise ValueError("capacity must be >= 1")
    num_mobiles = realization.num_mobiles
    num_sectors = realization.num_sectors
    serving = np.asarray(serving, dtype=np.int64).copy()

    gains = shadowed_gains(realization, channel)
    dist = distances(realization.bs_positions, realization.mobile_positions)
    covering_sector = sector_indices(
        realization.bs_positions, realization.mobile_positions, realization.sector_offset
    )

    served = [list() for _ in range(num_sectors)]
    for i in range(num_mobiles):
        served[serving[i]].append(i)

    denied = []
    changed = True
    while changed:
        changed = False
        for j in range(num_sectors):
            if len(served[j]) <= capacity:
                continue
            changed = True
            bs_j = j // SECTORS_PER_BS
            members = np.array(served[j], dtype=np.int64)
            # worst shadowed path loss first = lowest gain first; stable on ties
            order = members[np.argsort(gains[members, bs_j], kind="stable")]
            evicted = order[: len(members) - capacity]
            keep = set(order[len(members) - capacity :].tolist())
            served[j] = [i for i in served[j] if i in keep]
            for w in evicted:
                serving[w] = -1
                new_sector = _reselect(
                    w, j, covering_sector, gains, dist, served, capacity, d_max
                )
                if new_sector < 0:
                    denied.append(int(w))
                else:
                    serving[w] = new_sector
                    served[new_sector].append(int(w))

    served_arrays = [np.array(s, dtype=np.int64) for s in served]
    return AssociationState(
        coverage=coverage,
        serving=serving,
        served=served_arrays,
        denied=np.array(sorted(denied), dtype=np.int64),
    )


def _reselect(mobile, from_sector, covering_sector, gains, dist, served, capacity, d_max):
    """Best acceptable covering sector for an evicted mobile, or -1."""
    if d_max <= 0:
        return -1
    # candidate sectors in decreasing shadowed gain (increasing path loss)
    order = np.argsort(-gains[mobile], kind="stable")
    for c in order:
        k = SECTORS_PER_BS * c + covering_sector[mobile, c]
        if k == from_sector:
            continue
        if dist[mobile, c] > d_max:
            continue
        if len(served[k]) >= capacity:
            continue
        return int(k)
    return -1


def build_association(
    realization: NetworkRealization, channel: ChannelParams, capacity: int, d_max: float
) -> AssociationState:
    """Full pipeline: coverage, association, overload resolution."""
    coverage = build_coverage(realization)
    serving = associate(realization, coverage, channel)
    return resolve_overload(realization, coverage, serving, capacity, d_max, channel)
