"""Probe-beam readout of the Bogoliubov mode.

A weak probe cavity, detuned by Δ̃_P = Ω and decaying fast compared with its
coupling, follows the Bogoliubov mode adiabatically. Its output carries the
rotated mode quadratures times a gain G plus vacuum input noise. This module
models that map on covariance matrices and inverts it to infer E_AC.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Optional

import numpy as np

from entanglement.gaussian import phase_rotation, symplectic_eigenvalues
from entanglement.negativity import log_negativity
from langevin.records import read_records
from lyapunov.covariance import CovarianceMatrix
from model.dynamics import SteadyState, steady_state
from model.errors import CalibrationError, ParameterError
from model.params import SystemParams

logger = logging.getLogger(__name__)

PROBE_MODES: tuple[str, ...] = ("C", "probe")
RECONSTRUCTED_MODES: tuple[str, ...] = ("C", "A")

# "≫" and "≪" are tested as ratios of at least 10 and at most 0.1.
STRONG_RATIO = 10.0
WEAK_RATIO = 0.1
RESONANCE_RTOL = 1e-6

PHYSICALITY_TOL = 1e-9
DEFAULT_TAU_M = 1e-2
DEFAULT_HOMODYNE_PHASE = math.pi / 2.0


@dataclass(frozen=True)
class ProbeParams:
    kappa_p: float
    zeta_p: float
    eta_p: float
    delta_p_tilde: float


@dataclass(frozen=True)
class ProbeValidity:
    adiabatic_ok: bool
    weak_coupling_ok: bool
    weak_pump_ok: bool

    @property
    def ok(self) -> bool:
        return self.adiabatic_ok and self.weak_coupling_ok and self.weak_pump_ok

    def failed(self) -> list[str]:
        return [name for name in ("adiabatic_ok", "weak_coupling_ok", "weak_pump_ok") if not getattr(self, name)]


def validate_probe(p: ProbeParams) -> tuple[bool, str]:
    values = (p.kappa_p, p.zeta_p, p.eta_p, p.delta_p_tilde)
    if not all(math.isfinite(v) for v in values):
        return False, "probe parameters must be finite."
    if p.kappa_p <= 0:
        return False, f"kappa_p must be strictly positive (got {p.kappa_p!r})."
    if p.zeta_p < 0 or p.eta_p < 0:
        return False, "zeta_p and eta_p must be non-negative."
    return True, "OK"


def probe_steady(p: ProbeParams) -> float:
    """Probe intracavity photon number |α_P|² = η_P²/(Δ̃_P² + κ_P²)."""
    ok, reason = validate_probe(p)
    if not ok:
        raise ParameterError(reason)
    return p.eta_p**2 / (p.delta_p_tilde**2 + p.kappa_p**2)


def probe_validity(p: ProbeParams, params: SystemParams, steady: SteadyState | None = None) -> ProbeValidity:
    """Regime flags of the adiabatic weak-probe description. Gain plays no part."""
    steady = steady or steady_state(params)
    alpha_p = math.sqrt(probe_steady(p))
    omega = params.Omega

    adiabatic = (
        abs(p.delta_p_tilde - omega) <= RESONANCE_RTOL * omega
        and omega >= STRONG_RATIO * p.kappa_p
        and omega >= STRONG_RATIO * p.zeta_p * alpha_p
    )
    weak_coupling = p.zeta_p <= WEAK_RATIO * omega and p.zeta_p <= WEAK_RATIO * params.zeta
    weak_pump = alpha_p <= WEAK_RATIO * steady.alpha_s
    return ProbeValidity(adiabatic_ok=adiabatic, weak_coupling_ok=weak_coupling, weak_pump_ok=weak_pump)


def default_probe(params: SystemParams, steady: SteadyState | None = None) -> ProbeParams:
    """Non-measured defaults inside the validity region.

    κ_P = Ω/20, ζ_P = ζ/20, Δ̃_P = Ω and η_P such that α_P = 0.05·α_s.
    """
    steady = steady or steady_state(params)
    kappa_p = params.Omega / 20.0
    alpha_p = 0.05 * steady.alpha_s
    return ProbeParams(
        kappa_p=kappa_p,
        zeta_p=params.zeta / 20.0,
        eta_p=alpha_p * math.hypot(params.Omega, kappa_p),
        delta_p_tilde=params.Omega,
    )


def resolve_probe(params: SystemParams, overrides: Mapping[str, float]) -> ProbeParams:
    probe = replace(default_probe(params), **dict(overrides))
    ok, reason = validate_probe(probe)
    if not ok:
        raise ParameterError(reason)
    return probe


@dataclass(frozen=True)
class ReadoutMap:
    gain: float
    homodyne_phase: float = DEFAULT_HOMODYNE_PHASE
    validity: Optional[ProbeValidity] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not (self.gain > 0 and math.isfinite(self.gain)):
            raise ParameterError(f"readout gain must be positive and finite (got {self.gain!r})")

    @classmethod
    def from_probe(
        cls,
        p: ProbeParams,
        params: SystemParams,
        tau_m: float = DEFAULT_TAU_M,
        homodyne_phase: float = DEFAULT_HOMODYNE_PHASE,
    ) -> "ReadoutMap":
        """G_eff = ζ_P·α_P·√(τ_m/κ_P) for one detected temporal mode of length τ_m."""
        if not tau_m > 0:
            raise ParameterError(f"tau_m must be strictly positive (got {tau_m!r})")
        gain = p.zeta_p * math.sqrt(probe_steady(p)) * math.sqrt(tau_m / p.kappa_p)
        return cls(gain=gain, homodyne_phase=homodyne_phase, validity=probe_validity(p, params))

    @property
    def rotation(self) -> np.ndarray:
        # The −i of the output relation rotates (Q, P) by −φ in phase space.
        return phase_rotation(-self.homodyne_phase)


@dataclass(frozen=True, eq=False)
class MeasuredCovariance(CovarianceMatrix):
    """(C, probe) covariance tagged with whether the probe sat inside its validity region.

    valid is None when the readout map carries no validity flags (a bare gain).
    """

    valid: Optional[bool] = None


def _validity_flag(readout: ReadoutMap) -> Optional[bool]:
    return None if readout.validity is None else readout.validity.ok


@dataclass(frozen=True, eq=False)
class InferenceResult:
    e_inferred: float
    reconstructed: CovarianceMatrix
    gain: float


def apply_readout_map(V: CovarianceMatrix, readout: ReadoutMap) -> MeasuredCovariance:
    """Covariance of (cavity C, probe output) from the intracavity state V.

    probe block = G²·R V_AA Rᵀ + I/2, cross block = G·V_CA Rᵀ, cavity block unchanged.
    """
    if readout.validity is not None and not readout.validity.ok:
        logger.warning("Probe outside its validity region (%s); mapping anyway", ", ".join(readout.validity.failed()))

    nus = symplectic_eigenvalues(V.matrix)
    if float(nus[0]) < 0.5 - PHYSICALITY_TOL:
        raise ParameterError(f"input covariance is non-physical (smallest symplectic eigenvalue {nus[0]:.12g})")

    G, R = readout.gain, readout.rotation
    v_cc = V.block("C", "C")
    v_ca = V.block("C", "A")
    v_aa = V.block("A", "A")

    probe = G * G * (R @ v_aa @ R.T) + 0.5 * np.eye(2)
    cross = G * (v_ca @ R.T)
    measured = np.block([[v_cc, cross], [cross.T, probe]])
    return MeasuredCovariance(0.5 * (measured + measured.T), PROBE_MODES, valid=_validity_flag(readout))


def reconstruct_intracavity(measured: CovarianceMatrix, readout: ReadoutMap) -> CovarianceMatrix:
    """Invert the readout map: remove the vacuum, rescale, undo the rotation."""
    G, R = readout.gain, readout.rotation
    v_cc = measured.block("C", "C")
    cross = measured.block("C", "probe")
    probe = measured.block("probe", "probe")

    v_aa = R.T @ ((probe - 0.5 * np.eye(2)) / (G * G)) @ R
    v_ca = (cross / G) @ R
    V = np.block([[v_cc, v_ca], [v_ca.T, v_aa]])
    return CovarianceMatrix(0.5 * (V + V.T), RECONSTRUCTED_MODES)


def infer_ac_entanglement(measured: CovarianceMatrix, readout: ReadoutMap) -> InferenceResult:
    """E_AC from measured (C, probe) correlations and a calibrated gain."""
    reconstructed = reconstruct_intracavity(measured, readout)
    nus = symplectic_eigenvalues(reconstructed.matrix)
    if not np.all(np.isfinite(nus)) or float(nus[0]) < 0.5 - PHYSICALITY_TOL:
        raise CalibrationError(
            f"reconstructed cavity/atom state is non-physical (smallest symplectic eigenvalue {nus[0]:.6g}); "
            f"check the gain calibration (G={readout.gain:.6g})"
        )
    return InferenceResult(
        e_inferred=log_negativity(reconstructed, "AC"),
        reconstructed=reconstructed,
        gain=readout.gain,
    )


def measured_covariance_from_records(
    path: str | Path,
    readout: ReadoutMap,
    seed: int = 0,
    chunk_trajectories: int = 100,
) -> MeasuredCovariance:
    """Empirical (C, probe) covariance from simulator records.

    Each recorded Bogoliubov sample is rotated, scaled by G and given an
    independent vacuum kick (variance 1/2) from a seeded generator.
    """
    header, data = read_records(path)
    if header.n_dims != 6:
        raise ParameterError(f"{path}: expected 6 quadratures per sample, got {header.n_dims}")

    rng = np.random.default_rng(seed)
    G, R = readout.gain, readout.rotation
    total = np.zeros(4)
    total_outer = np.zeros((4, 4))
    count = 0

    for first in range(0, header.n_trajectories, chunk_trajectories):
        block = np.asarray(data[first : first + chunk_trajectories]).reshape(-1, 6)
        vacuum = rng.normal(0.0, math.sqrt(0.5), size=(block.shape[0], 2))
        samples = np.hstack([block[:, 0:2], G * (block[:, 4:6] @ R.T) + vacuum])
        total += samples.sum(axis=0)
        total_outer += samples.T @ samples
        count += samples.shape[0]

    if count < 2:
        raise ParameterError(f"{path}: not enough samples for a covariance estimate")
    mean = total / count
    cov = (total_outer - count * np.outer(mean, mean)) / (count - 1)
    return MeasuredCovariance(0.5 * (cov + cov.T), PROBE_MODES, valid=_validity_flag(readout))
