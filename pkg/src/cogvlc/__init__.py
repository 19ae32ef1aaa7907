"""Design and simulation toolkit for cognitive indoor VLC networks."""

from .channel import (
    AccessPoint,
    ReceiverModel,
    cell_radius,
    channel_gain,
    lambertian_index,
    rate_per_subcarrier,
    snr_per_subcarrier,
)
from .errors import CogVLCError, DomainError, InfeasibleError, LayoutError, ScenarioError
from .zones import (
    IlluminationSpec,
    MobilitySpec,
    ZoneDesign,
    ase,
    avg_subcarrier_rate_closed,
    avg_subcarrier_rate_numeric,
    design_zone,
    handover_radius_limit,
    illum_radius_limit,
    illuminance_at,
    illumination_threshold_angle,
    luminous_intensity_bounds,
    max_zone0_subcarriers,
)
from .network import Hall, NetworkLayout, assign_zone1_bands, build_layout, locate
from .mobility import FailureStats, LayoutTemplate, SimConfig, failure_indicators, init_users, run, step, sweep

__version__ = "0.1.0"
