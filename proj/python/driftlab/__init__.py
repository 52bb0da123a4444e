"""Python face of the drift-counterexample laboratory.

Everything here delegates to the compiled ``_core`` module: the example
catalog with pointwise and weak residuals, drift norms, the oscillation
slope estimator, the barrier profile and its positivity certificate, and
the collar solve on the half cylinder.
"""

from ._core import (
    BadDimension,
    GridTooCoarse,
    OutOfDomain,
    ParamOutOfRange,
    barrier_at,
    check_certificate,
    check_profile,
    constants,
    drift_at,
    drift_norm,
    example_ids,
    example_info,
    holder_slope,
    orlicz_norm,
    profile,
    solve_collar,
    strong_residual,
    weak_residual,
)

__all__ = [
    "BadDimension",
    "GridTooCoarse",
    "OutOfDomain",
    "ParamOutOfRange",
    "barrier_at",
    "check_certificate",
    "check_profile",
    "constants",
    "drift_at",
    "drift_norm",
    "example_ids",
    "example_info",
    "holder_slope",
    "orlicz_norm",
    "profile",
    "solve_collar",
    "strong_residual",
    "weak_residual",
]

__version__ = "0.1.0"
