"""Symplectic tools for Gaussian covariance matrices (vacuum variance 1/2)."""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import LinAlgError, block_diag, eigvals

SYMMETRY_ATOL = 1e-12


def symplectic_form(n_modes: int) -> np.ndarray:
    """Direct sum of n copies of [[0, 1], [-1, 0]]."""
    return block_diag(*([np.array([[0.0, 1.0], [-1.0, 0.0]])] * n_modes))


def _check_covariance(V: np.ndarray) -> np.ndarray:
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
        raise ValueError(f"covariance must be a square 2n x 2n matrix, got shape {V.shape}")
    scale = max(1.0, float(np.max(np.abs(V))))
    if not np.allclose(V, V.T, rtol=0.0, atol=SYMMETRY_ATOL * scale):
        raise ValueError("covariance matrix is not symmetric")
    return V


def symplectic_eigenvalues(V: np.ndarray) -> np.ndarray:
    """Ascending symplectic spectrum: moduli of eig(iΩV), one per ± pair."""
    V = _check_covariance(V)
    n = V.shape[0] // 2
    try:
        spectrum = eigvals(1j * symplectic_form(n) @ V)
    except LinAlgError as e:
        raise ValueError(f"symplectic eigenvalue computation failed: {e}") from e
    moduli = np.sort(np.abs(spectrum))
    # Each ν appears twice (as ±ν); take one of each pair.
    return moduli[::2].copy()


def two_mode_symplectic_eigenvalues(V: np.ndarray) -> tuple[float, float]:
    """Closed form for a 4×4 covariance: ν∓² = (Δ̃ ∓ √(Δ̃² − 4 det V))/2."""
    V = _check_covariance(V)
    if V.shape != (4, 4):
        raise ValueError(f"two-mode formula needs a 4x4 matrix, got {V.shape}")

    det_v = float(np.linalg.det(V))
    seralian = (
        float(np.linalg.det(V[:2, :2]))
        + float(np.linalg.det(V[2:, 2:]))
        + 2.0 * float(np.linalg.det(V[:2, 2:]))
    )
    root = math.sqrt(max(seralian * seralian - 4.0 * det_v, 0.0))
    larger = (seralian + root) / 2.0
    # Cancellation-free smaller root: ν₋² ν₊² = det V.
    smaller = det_v / larger if larger > 0.0 else 0.0
    return math.sqrt(max(smaller, 0.0)), math.sqrt(max(larger, 0.0))


def phase_rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def local_rotation(n_modes: int, mode: int, theta: float) -> np.ndarray:
    """Symplectic matrix rotating one mode's quadratures by theta."""
    S = np.eye(2 * n_modes)
    S[2 * mode : 2 * mode + 2, 2 * mode : 2 * mode + 2] = phase_rotation(theta)
    return S


def thermal_state(n_bar: float) -> np.ndarray:
    return (n_bar + 0.5) * np.eye(2)


def two_mode_squeezed(r: float, n_bar: float = 0.0) -> np.ndarray:
    """Two-mode squeezed thermal state; E_N = 2r when n_bar = 0."""
    a = (2.0 * n_bar + 1.0) * 0.5
    z = np.diag([1.0, -1.0])
    return np.block(
        [
            [a * math.cosh(2.0 * r) * np.eye(2), a * math.sinh(2.0 * r) * z],
            [a * math.sinh(2.0 * r) * z, a * math.cosh(2.0 * r) * np.eye(2)],
        ]
    )


def random_symplectic(n_modes: int, rng: np.random.Generator, max_squeezing: float = 1.0) -> np.ndarray:
    """Random symplectic matrix: passive rotation · local squeezing · passive rotation.

    Passive parts come from random unitaries via the Haar-ish QR construction.
    """

    def passive() -> np.ndarray:
        z = rng.normal(size=(n_modes, n_modes)) + 1j * rng.normal(size=(n_modes, n_modes))
        q, r = np.linalg.qr(z)
        u = q * (np.diag(r) / np.abs(np.diag(r)))
        S = np.empty((2 * n_modes, 2 * n_modes))
        # (x, p) interleaved ordering.
        S[0::2, 0::2] = u.real
        S[0::2, 1::2] = -u.imag
        S[1::2, 0::2] = u.imag
        S[1::2, 1::2] = u.real
        return S

    r = rng.uniform(-max_squeezing, max_squeezing, size=n_modes)
    squeeze = np.diag(np.ravel(np.column_stack([np.exp(-r), np.exp(r)])))
    return passive() @ squeeze @ passive()


def random_physical_covariance(n_modes: int, rng: np.random.Generator, max_squeezing: float = 1.0, max_n_bar: float = 2.0) -> np.ndarray:
    """S · ⊕(n_i + 1/2) I · Sᵀ for a random symplectic S and thermal occupations n_i."""
    S = random_symplectic(n_modes, rng, max_squeezing)
    nus = 0.5 + rng.uniform(0.0, max_n_bar, size=n_modes)
    W = np.diag(np.repeat(nus, 2))
    V = S @ W @ S.T
    return 0.5 * (V + V.T)
