"""Derived rates, classical steady state, drift/diffusion matrices and stability.

Quadrature basis throughout: (δx, δy, δq̃, δp̃, δQ, δP) for the cavity field (C),
the mirror (M) and the Bogoliubov mode (A), with x = (a + a†)/√2 so that the
vacuum variance is 1/2.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import constants
from scipy.linalg import LinAlgError, eigvals

from .errors import NumericalError
from .params import SystemParams, require_valid

logger = logging.getLogger(__name__)

HBAR = constants.hbar
K_B = constants.k
C_LIGHT = constants.c

# Back-action is considered small while √2·χ·α_s (and √2·ζ·α_s) stays below κ/2.
BACK_ACTION_LIMIT = 0.5

# Relative band around zero inside which an eigenvalue real part counts as marginal.
MARGINAL_RTOL = 1e-12


@dataclass(frozen=True)
class DerivedRates:
    kappa: float
    gamma: float
    eta: float
    n_bar: float


@dataclass(frozen=True)
class SteadyState:
    alpha_s_sq: float
    alpha_s: float
    q_s_scaled: float
    Q_s: float


@dataclass(frozen=True, eq=False)
class Stability:
    stable: bool
    margin: float
    eigenvalues: np.ndarray


@dataclass(frozen=True, eq=False)
class LinearModel:
    params: SystemParams
    rates: DerivedRates
    steady: SteadyState
    drift: np.ndarray
    diffusion: np.ndarray

    @property
    def uncoupled(self) -> bool:
        """No intracavity field or no coupling: C, M and A evolve independently."""
        return self.steady.alpha_s_sq == 0.0 or (self.params.chi == 0.0 and self.params.zeta == 0.0)


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose factor 1/(exp(ħω/k_B T) − 1)."""
    x = HBAR * omega / (K_B * temperature)
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def derive_rates(params: SystemParams) -> DerivedRates:
    """κ = πc/(2LF), γ = ω_m/Q, η = √(2κR/ħω_L) and the mechanical n̄."""
    require_valid(params)
    kappa = math.pi * C_LIGHT / (2.0 * params.cavity_length * params.finesse)
    gamma = params.omega_m / params.quality
    omega_l = 2.0 * math.pi * C_LIGHT / params.laser_wavelength
    eta = math.sqrt(2.0 * kappa * params.pump_power / (HBAR * omega_l))
    n_bar = thermal_occupation(params.omega_m, params.temperature)
    return DerivedRates(kappa=kappa, gamma=gamma, eta=eta, n_bar=n_bar)


def steady_state(params: SystemParams, rates: DerivedRates | None = None) -> SteadyState:
    """Classical mean values around which the fluctuations are linearized.

    α_s is taken real and positive. The mirror displacement is expressed in units
    of the zero-point length √(ħ/mω_m), i.e. q̃_s = χ|α_s|²/ω_m.
    """
    if rates is None:
        rates = derive_rates(params)
    alpha_s_sq = rates.eta**2 / (params.detuning**2 + rates.kappa**2)
    return SteadyState(
        alpha_s_sq=alpha_s_sq,
        alpha_s=math.sqrt(alpha_s_sq),
        q_s_scaled=params.chi * alpha_s_sq / params.omega_m,
        Q_s=-params.zeta * alpha_s_sq / params.Omega,
    )


def drift_matrix(params: SystemParams, steady: SteadyState, rates: DerivedRates | None = None) -> np.ndarray:
    """The 6×6 coupling matrix K of ∂_t δφ = K δφ + N."""
    if rates is None:
        rates = derive_rates(params)
    g_m = math.sqrt(2.0) * params.chi * steady.alpha_s
    g_a = math.sqrt(2.0) * params.zeta * steady.alpha_s
    kappa, delta = rates.kappa, params.detuning

    return np.array(
        [
            [-kappa, delta, 0.0, 0.0, 0.0, 0.0],
            [-delta, -kappa, g_m, 0.0, -g_a, 0.0],
            [0.0, 0.0, 0.0, params.omega_m, 0.0, 0.0],
            [g_m, 0.0, -params.omega_m, -rates.gamma, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, params.Omega],
            [-g_a, 0.0, 0.0, 0.0, -params.Omega, -params.atom_damping],
        ],
        dtype=float,
    )


def diffusion_matrix(params: SystemParams, rates: DerivedRates | None = None) -> np.ndarray:
    """D = diag(κ, κ, 0, γ(2n̄+1), 0, γ_A)."""
    if rates is None:
        rates = derive_rates(params)
    return np.diag(
        [
            rates.kappa,
            rates.kappa,
            0.0,
            rates.gamma * (2.0 * rates.n_bar + 1.0),
            0.0,
            params.atom_damping,
        ]
    )


def stability(K: np.ndarray) -> Stability:
    """Hurwitz test: stable iff every eigenvalue of K has a negative real part.

    margin = −max Re λ; real parts within a relative band of 1e-12 of zero are
    reported as marginal (stable=False, margin=0).
    """
    try:
        lam = eigvals(np.asarray(K, dtype=float))
    except (LinAlgError, ValueError) as e:
        raise NumericalError(f"Eigenvalue computation for the drift matrix failed: {e}") from e
    if not np.all(np.isfinite(lam)):
        raise NumericalError("Eigenvalue computation for the drift matrix returned non-finite values.")

    max_re = float(np.max(lam.real))
    band = MARGINAL_RTOL * max(float(np.max(np.abs(lam))), 1.0)
    if abs(max_re) <= band:
        return Stability(stable=False, margin=0.0, eigenvalues=lam)
    return Stability(stable=max_re < 0.0, margin=-max_re, eigenvalues=lam)


def back_action_ratio(params: SystemParams, steady: SteadyState, rates: DerivedRates) -> float:
    """Largest linearized coupling √2·max(χ, ζ)·α_s in units of κ."""
    return math.sqrt(2.0) * max(params.chi, params.zeta) * steady.alpha_s / rates.kappa


def check_back_action(params: SystemParams, steady: SteadyState, rates: DerivedRates) -> bool:
    """Return True when mirror/BEC back-action is small compared to cavity loss."""
    ratio = back_action_ratio(params, steady, rates)
    if ratio > BACK_ACTION_LIMIT:
        logger.warning(
            "Back-action not small: sqrt(2)*coupling*alpha_s = %.3g kappa (limit %.2g kappa)",
            ratio,
            BACK_ACTION_LIMIT,
        )
        return False
    return True


def static_stability_threshold(params: SystemParams, rates: DerivedRates | None = None) -> float:
    """(κ²+Δ²)² − 2Δη²(χ²/ω_m + ζ²/Ω), relative to (κ²+Δ²)².

    Negative values mean the linearized point sits beyond the static
    (bistability) threshold; the drift matrix then has a positive real eigenvalue.
    """
    if rates is None:
        rates = derive_rates(params)
    lhs = (rates.kappa**2 + params.detuning**2) ** 2
    rhs = 2.0 * params.detuning * rates.eta**2 * (
        params.chi**2 / params.omega_m + params.zeta**2 / params.Omega
    )
    return (lhs - rhs) / lhs


def bare_coupling(params: SystemParams) -> float:
    """Unscaled radiation-pressure coupling χ' = χ/√(ħ/mω_m), in s⁻¹m⁻¹."""
    return params.chi / zero_point_length(params)


def zero_point_length(params: SystemParams) -> float:
    return math.sqrt(HBAR / (params.mass * params.omega_m))


def linear_model(params: SystemParams) -> LinearModel:
    """Build the full linearized model (rates, steady state, K, D) for one point."""
    rates = derive_rates(params)
    steady = steady_state(params, rates)
    check_back_action(params, steady, rates)
    return LinearModel(
        params=params,
        rates=rates,
        steady=steady,
        drift=drift_matrix(params, steady, rates),
        diffusion=diffusion_matrix(params, rates),
    )
