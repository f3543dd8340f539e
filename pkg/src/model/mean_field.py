"""Nonlinear mean-field flow of the three modes in quadrature form.

The flow is written with the bare cavity detuning Δ₀, reconstructed from the
effective detuning Δ and the classical displacements so that the linearized
model in ``dynamics`` is the flow's Jacobian at its fixed point.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, root

from .dynamics import DerivedRates, SteadyState, derive_rates, steady_state
from .errors import NumericalError
from .params import SystemParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MeanFieldFlow:
    params: SystemParams
    rates: DerivedRates
    bare_detuning: float

    def __call__(self, state: np.ndarray) -> np.ndarray:
        """Time derivative of (x, y, q̃, p̃, Q, P)."""
        x, y, q, p, Q, P = state
        p_ = self.params
        a = (x + 1j * y) / math.sqrt(2.0)
        n = 0.5 * (x * x + y * y)

        a_dot = (
            -(self.rates.kappa + 1j * self.bare_detuning) * a
            + 1j * (p_.chi * q - p_.zeta * Q) * a
            + self.rates.eta
        )
        return np.array(
            [
                math.sqrt(2.0) * a_dot.real,
                math.sqrt(2.0) * a_dot.imag,
                p_.omega_m * p,
                -p_.omega_m * q - self.rates.gamma * p + p_.chi * n,
                p_.Omega * P,
                -p_.Omega * Q - p_.atom_damping * P - p_.zeta * n,
            ]
        )


def mean_field_flow(params: SystemParams) -> MeanFieldFlow:
    rates = derive_rates(params)
    steady = steady_state(params, rates)
    bare = params.detuning + params.chi * steady.q_s_scaled - params.zeta * steady.Q_s
    return MeanFieldFlow(params=params, rates=rates, bare_detuning=bare)


def _photon_number(flow: MeanFieldFlow) -> float:
    p = flow.params
    k, eta = flow.rates.kappa, flow.rates.eta
    c = p.chi**2 / p.omega_m + p.zeta**2 / p.Omega

    def balance(n: float) -> float:
        effective = flow.bare_detuning - c * n
        return n * (k * k + effective * effective) - eta * eta

    upper = eta * eta / (k * k)
    return brentq(balance, 0.0, upper, rtol=4.0 * np.finfo(float).eps)


def classical_fixed_point(params: SystemParams) -> np.ndarray:
    """Zero of the mean-field flow as (x_s, y_s, q̃_s, p̃_s, Q_s, P_s).

    The photon number is bracketed on [0, η²/κ²]; the full state is then
    polished with a hybrid root solver on the six-dimensional flow.
    """
    flow = mean_field_flow(params)
    if flow.rates.eta == 0.0:
        return np.zeros(6)

    p = params
    n = _photon_number(flow)
    effective = flow.bare_detuning - (p.chi**2 / p.omega_m + p.zeta**2 / p.Omega) * n
    alpha = flow.rates.eta / (flow.rates.kappa + 1j * effective)
    guess = np.array(
        [
            math.sqrt(2.0) * alpha.real,
            math.sqrt(2.0) * alpha.imag,
            p.chi * n / p.omega_m,
            0.0,
            -p.zeta * n / p.Omega,
            0.0,
        ]
    )

    scale = np.maximum(np.abs(guess), 1.0)
    solution = root(lambda s: flow(s * scale) / scale, guess / scale, method="hybr")
    if not solution.success:
        logger.warning("Fixed point polish did not converge: %s", solution.message)
        return guess
    return solution.x * scale


def flow_jacobian(params: SystemParams, state: np.ndarray | None = None) -> np.ndarray:
    """Central-difference Jacobian of the flow, in the frame where α_s is real.

    Rotating the cavity quadratures by arg α_s makes this directly comparable
    with ``dynamics.drift_matrix``.
    """
    flow = mean_field_flow(params)
    if state is None:
        state = classical_fixed_point(params)
    state = np.asarray(state, dtype=float)

    J = np.empty((6, 6))
    for j in range(6):
        h = 1e-3 * max(abs(state[j]), 1.0)
        step = np.zeros(6)
        step[j] = h
        J[:, j] = (flow(state + step) - flow(state - step)) / (2.0 * h)
    if not np.all(np.isfinite(J)):
        raise NumericalError("Mean-field Jacobian contains non-finite entries.")

    theta = math.atan2(state[1], state[0])
    c, s = math.cos(theta), math.sin(theta)
    T = np.eye(6)
    T[:2, :2] = [[c, -s], [s, c]]
    return T.T @ J @ T


def fixed_point_displacements(params: SystemParams) -> SteadyState:
    """Classical fixed point expressed with the same fields as ``steady_state``."""
    state = classical_fixed_point(params)
    n = 0.5 * (state[0] ** 2 + state[1] ** 2)
    return SteadyState(alpha_s_sq=n, alpha_s=math.sqrt(n), q_s_scaled=float(state[2]), Q_s=float(state[4]))
