"""Stationary covariance of the linearized three-mode system."""

from __future__ import annotations

from .covariance import MODES, CovarianceMatrix
from .solver import lyapunov_residual, solve_lyapunov, solve_lyapunov_matrix

__all__ = [
    "MODES",
    "CovarianceMatrix",
    "lyapunov_residual",
    "solve_lyapunov",
    "solve_lyapunov_matrix",
]
