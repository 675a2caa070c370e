"""Numerics for complex-driven Loewner evolutions."""

from ._backend import backend_name, default_threads
from .drivers import Driver, HolderEstimate, Partition, c1_subdivision, holder_half_norm
from .engine import (
    ExpansionFit,
    SolverOptions,
    Trajectory,
    blow_up_time,
    expansion_fit,
    integrate_backward,
    integrate_forward,
    inverse_map,
)
from .hulls import (
    CurveTrace,
    Grid,
    HullField,
    IntersectionReport,
    hull_intersection,
    left_hull_field,
    right_hull_field,
    trace_two_sided_curve,
)
from .linear import (
    AsymptoticsReport,
    Omega0Events,
    PhaseRecord,
    PioneerState,
    asymptotic_rates,
    classify,
    holder_at_tstar,
    omega0_events,
    pioneer_residual,
    simplicity_scan,
    solve_pioneer,
    spiral_diagnostics,
    trace_pioneer_curve,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticsReport",
    "CurveTrace",
    "Driver",
    "ExpansionFit",
    "Grid",
    "HolderEstimate",
    "HullField",
    "IntersectionReport",
    "Omega0Events",
    "Partition",
    "PhaseRecord",
    "PioneerState",
    "SolverOptions",
    "Trajectory",
    "asymptotic_rates",
    "backend_name",
    "blow_up_time",
    "c1_subdivision",
    "classify",
    "default_threads",
    "expansion_fit",
    "holder_at_tstar",
    "holder_half_norm",
    "hull_intersection",
    "integrate_backward",
    "integrate_forward",
    "inverse_map",
    "left_hull_field",
    "omega0_events",
    "pioneer_residual",
    "right_hull_field",
    "simplicity_scan",
    "solve_pioneer",
    "spiral_diagnostics",
    "trace_pioneer_curve",
    "trace_two_sided_curve",
    "__version__",
]
