"""Stochastic oracle for the stationary covariance."""

from __future__ import annotations

from .compare import DeviationReport, compare
from .simulator import SimConfig, TrajectoryStats, default_dt, simulate

__all__ = [
    "DeviationReport",
    "SimConfig",
    "TrajectoryStats",
    "compare",
    "default_dt",
    "simulate",
]
