"""Constant-curvature surfaces by loop-group dressing."""

from ._core import (
    AdmissibilityError,
    ConfigError,
    PoleError,
    default_tolerances,
    permutability_defect,
    run_job,
    simple_factor,
    surface_points,
)

__all__ = [
    "AdmissibilityError",
    "ConfigError",
    "PoleError",
    "default_tolerances",
    "permutability_defect",
    "run_job",
    "simple_factor",
    "surface_points",
]
