"""Boundary-integral toolkit for oblique-incidence scattering by penetrable
cylinders: Nystroem direct solver, far-field synthesis, and regularised
iterative reconstruction of the cross-section boundary."""

from .direct import (
    DirectDensities,
    FarFieldPattern,
    IncidentTrace,
    add_noise,
    far_field,
    incident_trace,
    scattered_field,
    solve_direct,
)
from .geometry import (
    BoundaryCurve,
    TrigPolynomial,
    apple_radius,
    circle_radius,
    curve_from_radial,
    grid_nodes,
    peanut_radius,
)
from .inverse import (
    IlluminationSet,
    InverseDensities,
    ReconstructionState,
    RegularizationConfig,
    assemble_subsystem,
    farfield_residual,
    illumination_angles,
    radial_error,
    reconstruct,
    solve_subsystem,
    tikhonov_step,
)
from .oracle import circle_farfield_series
from .params import PhysicalParams, derive_params, with_incidence

__version__ = "0.1.0"

__all__ = [
    "BoundaryCurve",
    "DirectDensities",
    "FarFieldPattern",
    "IlluminationSet",
    "IncidentTrace",
    "InverseDensities",
    "PhysicalParams",
    "ReconstructionState",
    "RegularizationConfig",
    "TrigPolynomial",
    "add_noise",
    "apple_radius",
    "assemble_subsystem",
    "circle_farfield_series",
    "circle_radius",
    "curve_from_radial",
    "derive_params",
    "far_field",
    "farfield_residual",
    "grid_nodes",
    "illumination_angles",
    "incident_trace",
    "peanut_radius",
    "radial_error",
    "reconstruct",
    "scattered_field",
    "solve_direct",
    "solve_subsystem",
    "tikhonov_step",
    "with_incidence",
]
