"""Exception types shared by every stage of the pipeline."""

from __future__ import annotations


class ParameterError(ValueError):
    """Invalid physical parameters, configuration keys or sweep definitions."""


class NoStationaryStateError(RuntimeError):
    """The drift matrix is not Hurwitz, so no stationary state exists."""


class NumericalError(RuntimeError):
    """A numerical routine failed or produced a result outside its error bound."""


class CalibrationError(RuntimeError):
    """A probe reconstruction produced a non-physical covariance matrix."""
