"""Stationary covariance from K·V + V·Kᵀ = −D."""

from __future__ import annotations

import logging

import numpy as np
from scipy.linalg import LinAlgError, solve_continuous_lyapunov

from entanglement.gaussian import symplectic_eigenvalues
from model.dynamics import stability
from model.errors import NoStationaryStateError, NumericalError

from .covariance import MODES, CovarianceMatrix

logger = logging.getLogger(__name__)

RESIDUAL_RTOL = 1e-10
PHYSICALITY_TOL = 1e-9

METHODS = ("schur", "kronecker")


def lyapunov_residual(K: np.ndarray, V: np.ndarray, D: np.ndarray) -> float:
    """Frobenius norm of K·V + V·Kᵀ + D."""
    return float(np.linalg.norm(K @ V + V @ K.T + D, ord="fro"))


def residual_bound(D: np.ndarray) -> float:
    return RESIDUAL_RTOL * max(1.0, float(np.linalg.norm(D, ord="fro")))


def _solve_schur(K: np.ndarray, Q: np.ndarray) -> np.ndarray:
    # Bartels–Stewart via scipy: solves K X + X Kᵀ = Q.
    return solve_continuous_lyapunov(K, -Q)


def _solve_kronecker(K: np.ndarray, Q: np.ndarray) -> np.ndarray:
    n = K.shape[0]
    eye = np.eye(n)
    # Row-major vec: vec(K V) = (K ⊗ I) vec(V), vec(V Kᵀ) = (I ⊗ K) vec(V).
    operator = np.kron(K, eye) + np.kron(eye, K)
    return np.linalg.solve(operator, -Q.reshape(-1)).reshape(n, n)


def _solve(K: np.ndarray, Q: np.ndarray, method: str) -> np.ndarray:
    try:
        if method == "schur":
            return _solve_schur(K, Q)
        return _solve_kronecker(K, Q)
    except (LinAlgError, ValueError) as e:
        raise NumericalError(f"Lyapunov solve ({method}) failed: {e}") from e


def solve_lyapunov_matrix(K: np.ndarray, D: np.ndarray, method: str = "schur") -> np.ndarray:
    """Symmetric solution of K·V + V·Kᵀ = −D for any Hurwitz K.

    The residual is held to 1e-10·max(1, ‖D‖_F); one refinement step is taken
    when the first solve misses it.
    """
    if method not in METHODS:
        raise ValueError(f"unknown Lyapunov method {method!r}; expected one of {METHODS}")

    K = np.asarray(K, dtype=float)
    D = np.asarray(D, dtype=float)

    st = stability(K)
    if not st.stable:
        raise NoStationaryStateError(
            f"no stationary state: drift matrix is not Hurwitz (max Re eigenvalue {-st.margin:.6g})"
        )

    V = _solve(K, D, method)
    V = 0.5 * (V + V.T)

    bound = residual_bound(D)
    residual = lyapunov_residual(K, V, D)
    if residual > bound:
        logger.debug("Lyapunov residual %.3g above bound %.3g; refining", residual, bound)
        R = K @ V + V @ K.T + D
        correction = _solve(K, 0.5 * (R + R.T), method)
        V = V + 0.5 * (correction + correction.T)
        residual = lyapunov_residual(K, V, D)
    if not np.all(np.isfinite(V)) or residual > bound:
        raise NumericalError(f"Lyapunov residual {residual:.3g} exceeds bound {bound:.3g}")
    return V


def solve_lyapunov(K: np.ndarray, D: np.ndarray, method: str = "schur", modes: tuple[str, ...] = MODES) -> CovarianceMatrix:
    """Certified stationary covariance of the linear Langevin system (K, D).

    Refuses non-Hurwitz K with NoStationaryStateError and rejects results whose
    smallest symplectic eigenvalue falls below 1/2 − 1e-9.
    """
    V = solve_lyapunov_matrix(K, D, method)
    nus = symplectic_eigenvalues(V)
    if float(nus[0]) < 0.5 - PHYSICALITY_TOL:
        raise NumericalError(f"non-physical covariance: smallest symplectic eigenvalue {nus[0]:.12g} < 1/2")
    return CovarianceMatrix(V, modes)
