"""Worst-case-optimal antenna placement for near-field WPT in a cuboid room."""

from .channel import (
    ChannelVector,
    Placement,
    RadioParams,
    ZeroChannel,
    ZeroDistance,
    channel_vector,
    distance,
    f_x,
    f_xyz,
    fraunhofer_distance,
    mrt_beamformer,
    received_power,
)
from .closed_form import (
    SolveReport,
    StationaryPoints,
    classify,
    classify_rho,
    farfield_gain,
    optimal_a1,
    realness_threshold,
    solve,
    stationary_points,
    worst_case_power,
)
from .geometry import (
    CriticalSet,
    GeometrySignature,
    ReceiverPoint,
    Regime,
    Room,
    critical_set,
    signature,
)
from .solver import (
    InvalidArity,
    NumericResult,
    SolverConfig,
    ValidationReport,
    oracle_grid_solve,
    qt_solve,
    run_validation,
    worst_receiver_scan,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelVector",
    "CriticalSet",
    "GeometrySignature",
    "InvalidArity",
    "NumericResult",
    "Placement",
    "RadioParams",
    "ReceiverPoint",
    "Regime",
    "Room",
    "SolveReport",
    "SolverConfig",
    "StationaryPoints",
    "ValidationReport",
    "ZeroChannel",
    "ZeroDistance",
    "channel_vector",
    "classify",
    "classify_rho",
    "critical_set",
    "distance",
    "f_x",
    "f_xyz",
    "farfield_gain",
    "fraunhofer_distance",
    "mrt_beamformer",
    "optimal_a1",
    "oracle_grid_solve",
    "qt_solve",
    "realness_threshold",
    "received_power",
    "run_validation",
    "signature",
    "solve",
    "stationary_points",
    "worst_case_power",
    "worst_receiver_scan",
]
