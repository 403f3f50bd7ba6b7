"""Constrained random topologies and sector geometry.

Base stations and mobiles are dropped uniformly in a disk of radius
``net_radius`` by rejection sampling, honoring minimum-separation exclusion
zones around previously placed points (uniform-clustering placement). Each
base station carries three ideal 120-degree sectors whose boundary angles are
shared network-wide.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi
SECTORS_PER_BS = 3
SECTOR_WIDTH = TWO_PI / SECTORS_PER_BS

# Rejection-sampling retry budget, per point. Exceeding it means the requested
# exclusion radii (nearly) fill the disk and placement cannot finish.
MAX_TRIES_PER_POINT = 100_000


class PlacementInfeasibleError(RuntimeError):
    """Raised when a point cannot be placed within the retry budget."""


@dataclass(frozen=True)
class SpatialParams:
    """Geometry constants of one scenario.

    Lengths are in normalized network units. ``far_field`` is the minimum
    mobile-to-base-station distance; the attenuation power law is only valid
    beyond it.
    """

    num_bs: int
    num_mobiles: int
    net_radius: float
    bs_exclusion: float
    mobile_exclusion: float
    far_field: float = 0.01

    def __post_init__(self):
        if self.num_bs < 0 or self.num_mobiles < 0:
            raise ValueError("counts must be non-negative")
        for name in ("net_radius", "bs_exclusion", "mobile_exclusion", "far_field"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.bs_exclusion >= 2.0 * self.net_radius:
            raise ValueError("bs_exclusion must be smaller than the disk diameter")
        if self.far_field > self.bs_exclusion:
            raise ValueError("far_field cannot exceed bs_exclusion")


@dataclass(frozen=True)
class NetworkRealization:
    """One drawn topology: positions plus a per (mobile, base station) shadowing matrix.

    ``shadowing_db`` holds dB perturbations; all zero when shadowing is
    disabled. ``sector_offset`` rotates every base station's sector boundaries
    by a common angle.
    """

    bs_positions: np.ndarray  # (C, 2)
    mobile_positions: np.ndarray  # (M, 2)
    shadowing_db: np.ndarray  # (M, C)
    sector_offset: float = 0.0

    @property
    def num_bs(self) -> int:
        return self.bs_positions.shape[0]

    @property
    def num_mobiles(self) -> int:
        return self.mobile_positions.shape[0]

    @property
    def num_sectors(self) -> int:
        return SECTORS_PER_BS * self.num_bs


def place_points(count, region_radius, self_exclusion=0.0, forbidden_zones=(), rng=None):
    """Drop ``count`` points uniformly in the disk by rejection sampling.

    Parameters
    ----------
    count : int
        Number of points to place.
    region_radius : float
        Radius of the disk, centered at the origin.
    self_exclusion : float
        Minimum distance between any two returned points.
    forbidden_zones : sequence of (center, radius)
        Accepted points must lie at distance >= radius from each center.
    rng : numpy.random.Generator

    Returns
    -------
    (count, 2) float array.

    Raises
    ------
    PlacementInfeasibleError
        If any point exhausts the retry budget.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    if region_radius < 0 or self_exclusion < 0:
        raise ValueError("radii must be non-negative")
    if rng is None:
        rng = np.random.default_rng()

    zone_centers = np.array([c for c, _ in forbidden_zones], dtype=float).reshape(-1, 2)
    zone_radii = np.array([r for _, r in forbidden_zones], dtype=float)

    points = np.empty((count, 2), dtype=float)
    for i in range(count):
        for _ in range(MAX_TRIES_PER_POINT):
            u, v = rng.random(2)
            radius = region_radius * np.sqrt(u)
            angle = TWO_PI * v
            candidate = np.array([radius * np.cos(angle), radius * np.sin(angle)])
            if i > 0:
                d2 = np.sum((points[:i] - candidate) ** 2, axis=1)
                if d2.min() < self_exclusion**2:
                    continue
            if zone_radii.size:
                d2 = np.sum((zone_centers - candidate) ** 2, axis=1)
                if np.any(d2 < zone_radii**2):
                    continue
            points[i] = candidate
            break
        else:
            raise PlacementInfeasibleError(
                f"could not place point {i + 1} of {count} within "
                f"{MAX_TRIES_PER_POINT} attempts (exclusion {self_exclusion}, "
                f"region radius {region_radius})"
            )
    return points


def sector_index(bs, mobile, sector_offset=0.0):
    """Sector id in {0, 1, 2} of ``mobile`` as seen from base station ``bs``.

    Sector k covers bearings in [offset + k*2pi/3, offset + (k+1)*2pi/3), so a
    mobile exactly on a boundary belongs to the counterclockwise sector.
    """
    dx = mobile[0] - bs[0]
    dy = mobile[1] - bs[1]
    if dx == 0.0 and dy == 0.0:
        raise ValueError("mobile coincides with base station")
    rel = np.mod(np.arctan2(dy, dx) - sector_offset, TWO_PI)
    # mod can round up to exactly 2*pi for tiny negative inputs
    return min(int(rel // SECTOR_WIDTH), SECTORS_PER_BS - 1)


def sector_indices(bs_positions, mobile_positions, sector_offset=0.0):
    """Vectorized :func:`sector_index`: (M, C) array of local sector ids."""
    delta = mobile_positions[:, None, :] - bs_positions[None, :, :]
    rel = np.mod(np.arctan2(delta[..., 1], delta[..., 0]) - sector_offset, TWO_PI)
    return np.minimum((rel // SECTOR_WIDTH).astype(np.int64), SECTORS_PER_BS - 1)


def distances(bs_positions, mobile_positions):
    """(M, C) Euclidean distance matrix between mobiles and base stations."""
    delta = mobile_positions[:, None, :] - bs_positions[None, :, :]
    return np.sqrt(np.sum(delta**2, axis=2))


def generate_realization(
    params: SpatialParams, shadow_std_db: float, rng, sector_offset: float = 0.0
) -> NetworkRealization:
    """Draw one network realization.

    Base stations are placed first with mutual exclusion ``bs_exclusion``;
    mobiles follow with mutual exclusion ``mobile_exclusion`` and are kept at
    least ``far_field`` away from every base station. Shadowing factors are
    i.i.d. zero-mean Gaussian in dB, one per (mobile, base station) pair, or
    exactly zero when ``shadow_std_db`` is 0. ``sector_offset`` rotates the
    common sector boundaries.
    """
    bs = place_points(params.num_bs, params.net_radius, params.bs_exclusion, (), rng)
    zones = [(bs[c], params.far_field) for c in range(params.num_bs)]
    mobiles = place_points(
        params.num_mobiles, params.net_radius, params.mobile_exclusion, zones, rng
    )
    if shadow_std_db > 0:
        shadowing = rng.normal(0.0, shadow_std_db, size=(params.num_mobiles, params.num_bs))
    else:
        shadowing = np.zeros((params.num_mobiles, params.num_bs))
    return NetworkRealization(bs, mobiles, shadowing, sector_offset=sector_offset)


def realization_from_topology(
    bs_positions,
    mobile_positions,
    params: SpatialParams,
    shadow_std_db: float,
    rng,
    sector_offset: float = 0.0,
) -> NetworkRealization:
    """Build a realization around fixed coordinates (e.g. a real deployment).

    ``mobile_positions`` may be None, in which case mobiles are placed
    randomly around the given base stations. Supplied coordinates are checked
    against the same exclusion invariants as generated ones.
    """
    bs = np.asarray(bs_positions, dtype=float).reshape(-1, 2)
    if bs.shape[0] != params.num_bs:
        raise ValueError(
            f"topology provides {bs.shape[0]} base stations, params expect {params.num_bs}"
        )
    _check_in_disk(bs, params.net_radius, "base station")
    _check_separation(bs, params.bs_exclusion, "base stations")

    if mobile_positions is None:
        zones = [(bs[c], params.far_field) for c in range(bs.shape[0])]
        mobiles = place_points(
            params.num_mobiles, params.net_radius, params.mobile_exclusion, zones, rng
        )
    else:
        mobiles = np.asarray(mobile_positions, dtype=float).reshape(-1, 2)
        if mobiles.shape[0] != params.num_mobiles:
            raise ValueError(
                f"topology provides {mobiles.shape[0]} mobiles, params expect {params.num_mobiles}"
            )
        _check_in_disk(mobiles, params.net_radius, "mobile")
        _check_separation(mobiles, params.mobile_exclusion, "mobiles")
        if distances(bs, mobiles).min() < params.far_field:
            raise ValueError("a mobile lies inside the far-field radius of a base station")

    if shadow_std_db > 0:
        shadowing = rng.normal(0.0, shadow_std_db, size=(mobiles.shape[0], bs.shape[0]))
    else:
        shadowing = np.zeros((mobiles.shape[0], bs.shape[0]))
    return NetworkRealization(bs, mobiles, shadowing, sector_offset=sector_offset)


def _check_in_disk(points, radius, what):
    if points.size and np.max(np.sum(points**2, axis=1)) > radius**2 + 1e-12:
        raise ValueError(f"a {what} lies outside the network disk")


def _check_separation(points, min_dist, what):
    n = points.shape[0]
    if n < 2:
        return
    d = distances(points, points)
    np.fill_diagonal(d, np.inf)
    if d.min() < min_dist:
        raise ValueError(f"{what} violate the minimum separation {min_dist}")
