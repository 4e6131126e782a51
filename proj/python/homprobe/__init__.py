"""Python bindings for the homprobe interference model."""

from ._core import (
    Error,
    InvalidArgument,
    NumericalError,
    SetupParams,
    coincidence_rate,
    correction_factor,
    correction_factor_small_beta,
    figure_of_merit,
    gaussian_overlap,
    max_correction_factor,
    optimal_intensity,
    oracle_coincidence_rate,
    simulate_dip,
    verify_commutation,
    visibility,
    z_expectation,
)

__all__ = [
    "Error",
    "InvalidArgument",
    "NumericalError",
    "SetupParams",
    "coincidence_rate",
    "correction_factor",
    "correction_factor_small_beta",
    "figure_of_merit",
    "gaussian_overlap",
    "max_correction_factor",
    "optimal_intensity",
    "oracle_coincidence_rate",
    "simulate_dip",
    "verify_commutation",
    "visibility",
    "z_expectation",
]
