"""Effective linear model of the cavity / mirror / Bogoliubov-mode system."""

from __future__ import annotations

from .dynamics import (
    DerivedRates,
    LinearModel,
    Stability,
    SteadyState,
    derive_rates,
    diffusion_matrix,
    drift_matrix,
    linear_model,
    stability,
    steady_state,
)
from .errors import CalibrationError, NoStationaryStateError, NumericalError, ParameterError
from .params import SystemParams, validate_params

__all__ = [
    "CalibrationError",
    "DerivedRates",
    "LinearModel",
    "NoStationaryStateError",
    "NumericalError",
    "ParameterError",
    "Stability",
    "SteadyState",
    "SystemParams",
    "derive_rates",
    "diffusion_matrix",
    "drift_matrix",
    "linear_model",
    "stability",
    "steady_state",
    "validate_params",
]
