"""Path-loss law, dB conversions and per-link Nakagami fading parameters."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

RAYLEIGH = "rayleigh"
DISTANCE_DEPENDENT = "distance_dependent"
FIXED = "fixed"
FADING_MODELS = (RAYLEIGH, DISTANCE_DEPENDENT, FIXED)


def db_to_linear(x_db):
    """Convert a dB quantity to a linear power ratio."""
    if np.ndim(x_db) == 0:
        return 10.0 ** (float(x_db) / 10.0)
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


def path_gain(distance, d0, alpha):
    """Attenuation power law (distance/d0)**(-alpha), valid for distance >= d0."""
    if d0 <= 0:
        raise ValueError("d0 must be positive")
    dist = np.asarray(distance, dtype=float)
    if np.any(dist < d0):
        raise ValueError("distance below the far-field radius d0")
    out = (dist / d0) ** (-alpha)
    return float(out) if np.ndim(distance) == 0 else out


def nakagami_m(distance, bs_exclusion, fading=DISTANCE_DEPENDENT, fixed_m=None):
    """Nakagami shape parameter of the link at the given distance.

    distance_dependent: 3 inside half the exclusion radius, 2 out to the
    exclusion radius, 1 beyond (line of sight fades with distance).
    rayleigh: always 1. fixed: the configured constant.

    Accepts scalars or arrays.
    """
    if fading == RAYLEIGH:
        return np.ones_like(distance, dtype=float) if np.ndim(distance) else 1.0
    if fading == FIXED:
        if fixed_m is None or fixed_m <= 0:
            raise ValueError("fixed fading requires a positive m")
        return np.full_like(distance, float(fixed_m), dtype=float) if np.ndim(distance) else float(fixed_m)
    if fading != DISTANCE_DEPENDENT:
        raise ValueError(f"unknown fading model {fading!r}")
    d = np.asarray(distance, dtype=float)
    m = np.where(d <= bs_exclusion / 2.0, 3.0, np.where(d <= bs_exclusion, 2.0, 1.0))
    return float(m) if np.ndim(distance) == 0 else m


@dataclass(frozen=True)
class ChannelParams:
    """Propagation and spreading constants.

    dB-valued inputs (``snr_db``, ``shadow_std_db``) are converted to linear
    once here; everything downstream works in the linear domain. The
    spreading factor doubles as the per-sector capacity: it bounds how many
    orthogonal sequences (and hence served mobiles) a sector has.
    """

    alpha: float = 3.0
    d0: float = 0.01
    shadow_std_db: float = 8.0
    snr_db: float = 10.0
    chip_factor: float = 2.0 / 3.0
    spreading_factor: int = 16
    fading: str = DISTANCE_DEPENDENT
    fading_m: float | None = None
    snr: float = field(init=False)

    def __post_init__(self):
        if self.alpha < 2:
            raise ValueError("alpha must be >= 2")
        if self.d0 <= 0:
            raise ValueError("d0 must be positive")
        if not 0 < self.chip_factor <= 1:
            raise ValueError("chip_factor must be in (0, 1]")
        if self.spreading_factor < 1:
            raise ValueError("spreading_factor must be >= 1")
        if self.shadow_std_db < 0:
            raise ValueError("shadow_std_db must be non-negative")
        if self.fading not in FADING_MODELS:
            raise ValueError(f"unknown fading model {self.fading!r}")
        if self.fading == FIXED:
            if self.fading_m is None or self.fading_m <= 0:
                raise ValueError("fixed fading requires a positive m")
            # the desired-link shape enters a finite sum and must be integral
            if abs(self.fading_m - round(self.fading_m)) > 1e-12:
                raise ValueError("fixed fading m must be a positive integer (desired links)")
        object.__setattr__(self, "snr", db_to_linear(self.snr_db))
