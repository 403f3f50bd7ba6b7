"""DS-CDMA cellular uplink simulator.

Exact per-uplink conditional outage probabilities for arbitrary or randomly
generated constrained topologies, with power control, four rate-control
policies and area-spectral-efficiency metrics.
"""

__version__ = "0.1.0"

from .association import AssociationState, associate, build_association, build_coverage, resolve_overload
from .channel import ChannelParams, db_to_linear, nakagami_m, path_gain
from .harness import CampaignConfig, CampaignResult, load_config, run_campaign, run_trial
from .metrics import RateAllocation, TrialSummary, ccdf, trial_metrics
from .oracle import OracleEstimate, estimate_outage_mc
from .outage import BACKEND, outage_batch, outage_probability
from .policy import (
    PolicyConfig,
    fixed_rate_select,
    mtvr_rate,
    ocvr_rate,
    rate_to_threshold,
    threshold_to_rate,
)
from .power import UplinkBatch, UplinkInstance, build_uplink, build_uplink_batch, normalized_transmit_power
from .spatial import (
    NetworkRealization,
    PlacementInfeasibleError,
    SpatialParams,
    generate_realization,
    place_points,
    sector_index,
)

__all__ = [
    "__version__",
    "AssociationState",
    "BACKEND",
    "CampaignConfig",
    "CampaignResult",
    "ChannelParams",
    "NetworkRealization",
    "OracleEstimate",
    "PlacementInfeasibleError",
    "PolicyConfig",
    "RateAllocation",
    "SpatialParams",
    "TrialSummary",
    "UplinkBatch",
    "UplinkInstance",
    "associate",
    "build_association",
    "build_coverage",
    "build_uplink",
    "build_uplink_batch",
    "ccdf",
    "db_to_linear",
    "estimate_outage_mc",
    "fixed_rate_select",
    "generate_realization",
    "load_config",
    "mtvr_rate",
    "nakagami_m",
    "normalized_transmit_power",
    "ocvr_rate",
    "outage_batch",
    "outage_probability",
    "path_gain",
    "place_points",
    "rate_to_threshold",
    "resolve_overload",
    "run_campaign",
    "run_trial",
    "sector_index",
    "threshold_to_rate",
    "trial_metrics",
]
