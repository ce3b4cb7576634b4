"""scnforge: scenario authoring engine for multi-vehicle driving scenarios.

Lay out track bounds and vehicle paths, fit C2 cubic spline chains,
initialize friction-limited velocity profiles, time-parameterize
trajectories, and scan scenarios for collisions, track-bound violations and
acceleration-limit violations. Scenario files replay deterministically for
CI-style testing of driving software.
"""

from .analysis import (
    Event,
    GroundTruthLabel,
    OccupancyGrid,
    VehicleState,
    Verdict,
    accel_limit_scan,
    collision_scan,
    compare_ground_truth,
    footprint,
    occupancy_grid,
    offtrack_scan,
    rects_overlap,
    state_at_time,
)
from .geometry import (
    Point2,
    SampledPath,
    SplineChain,
    SplineSegment,
    SupportSequence,
    curvature_at,
    eval_spline,
    fit_spline,
    heading_from_neighbors,
    sample_path,
)
from .scenario import (
    Scenario,
    TrackBounds,
    VehicleEntry,
    VehicleSpec,
    export_bounds_csv,
    export_scenario,
    import_bounds_csv,
    import_scenario,
    resolve_scenario,
    validate_scenario,
)
from .velocity import (
    FrictionSpec,
    Trajectory,
    VelocityProfile,
    apply_profile_edit,
    curvature_speed_cap,
    init_profile,
    time_parameterize,
)

__version__ = "0.1.0"

__all__ = [
    "Event",
    "FrictionSpec",
    "GroundTruthLabel",
    "OccupancyGrid",
    "Point2",
    "SampledPath",
    "Scenario",
    "SplineChain",
    "SplineSegment",
    "SupportSequence",
    "TrackBounds",
    "Trajectory",
    "VehicleEntry",
    "VehicleSpec",
    "VehicleState",
    "VelocityProfile",
    "Verdict",
    "accel_limit_scan",
    "apply_profile_edit",
    "collision_scan",
    "compare_ground_truth",
    "curvature_at",
    "curvature_speed_cap",
    "eval_spline",
    "export_bounds_csv",
    "export_scenario",
    "fit_spline",
    "footprint",
    "heading_from_neighbors",
    "import_bounds_csv",
    "import_scenario",
    "init_profile",
    "occupancy_grid",
    "offtrack_scan",
    "rects_overlap",
    "resolve_scenario",
    "sample_path",
    "state_at_time",
    "time_parameterize",
    "validate_scenario",
]
