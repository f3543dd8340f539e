"""Ensemble integration of dX = K X dt + S dW with S·Sᵀ = D.

Two integrators are available:

* ``"exact"``: the Gaussian transition of the linear SDE over one step
  (Van Loan discretization). Exact at any dt.
* ``"euler"``: Euler–Maruyama. Accurate to first order in dt; it amplifies
  weakly damped oscillators (growth ≈ ω²·dt per unit time), so it is only
  usable where every mode relaxes faster than that.

Each trajectory draws from its own stream seeded by (rng_seed, index), so the
statistics do not depend on batching or thread scheduling.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, eigh, expm

from model.dynamics import LinearModel, linear_model, stability
from model.errors import NoStationaryStateError, NumericalError, ParameterError
from model.params import SystemParams
from utils.env import get_worker_count

from .records import RecordHeader, create_records

logger = logging.getLogger(__name__)

INTEGRATORS = ("exact", "euler")
DT_RESOLUTION = 0.05
MIN_ORACLE_TRAJECTORIES = 100
# Trajectory steps processed per noise draw.
CHUNK_STEPS = 512
DIVERGENCE_LIMIT = 1e10


@dataclass(frozen=True)
class SimConfig:
    dt: float
    burn_in_steps: int = 20_000
    sample_steps: int = 20_000
    n_trajectories: int = 2000
    rng_seed: int = 20240601
    sample_stride: int = 10
    integrator: str = "exact"
    batch_size: int = 250
    # Every record_stride-th sample is written when records are requested.
    record_stride: int = 1

    @property
    def n_samples(self) -> int:
        return self.sample_steps // self.sample_stride


def default_dt(params: SystemParams, model: LinearModel | None = None, scale: float = 0.4) -> float:
    """scale × the largest admissible step 0.05/max(κ, ω_m, Ω, |Δ|)."""
    model = model or linear_model(params)
    return scale * DT_RESOLUTION / _fastest_rate(params, model)


def _fastest_rate(params: SystemParams, model: LinearModel) -> float:
    return max(model.rates.kappa, params.omega_m, params.Omega, abs(params.detuning))


def validate_sim_config(config: SimConfig, params: SystemParams, model: LinearModel) -> tuple[bool, str]:
    if config.integrator not in INTEGRATORS:
        return False, f"integrator must be one of {INTEGRATORS} (got {config.integrator!r})."
    if not (config.dt > 0 and math.isfinite(config.dt)):
        return False, "dt must be a positive finite number."
    limit = DT_RESOLUTION / _fastest_rate(params, model)
    if config.dt > limit:
        return False, f"dt={config.dt:.3g} s does not resolve the fastest rate (limit {limit:.3g} s)."
    if config.burn_in_steps < 0:
        return False, "burn_in_steps must be non-negative."
    if config.sample_steps <= 0 or config.sample_stride <= 0 or config.n_samples < 1:
        return False, "sample_steps and sample_stride must give at least one sample."
    if config.n_trajectories < 2:
        return False, "at least two trajectories are needed for error bars."
    if config.batch_size <= 0 or config.record_stride <= 0:
        return False, "batch_size and record_stride must be positive."
    if not 0 <= config.rng_seed < 2**64:
        return False, "rng_seed must be a 64-bit unsigned integer."
    return True, "OK"


@dataclass(frozen=True, eq=False)
class TrajectoryStats:
    mean: np.ndarray
    covariance: np.ndarray
    stderr: np.ndarray
    mean_stderr: np.ndarray
    n_trajectories: int
    n_samples: int

    @property
    def effective_samples(self) -> int:
        return self.n_trajectories * self.n_samples


@dataclass(frozen=True, eq=False)
class _Stepper:
    transition: np.ndarray
    noise_factor: np.ndarray


def _psd_factor(Q: np.ndarray) -> np.ndarray:
    """L with L·Lᵀ = Q for a symmetric positive semi-definite Q."""
    w, U = eigh(0.5 * (Q + Q.T))
    return U * np.sqrt(np.clip(w, 0.0, None))


def make_stepper(K: np.ndarray, D: np.ndarray, dt: float, integrator: str) -> _Stepper:
    n = K.shape[0]
    try:
        if integrator == "euler":
            return _Stepper(np.eye(n) + K * dt, _psd_factor(D) * math.sqrt(dt))

        # Van Loan: expm([[−K, D], [0, Kᵀ]]·dt) carries Φ = e^{K dt} and ∫Φ D Φᵀ.
        block = np.zeros((2 * n, 2 * n))
        block[:n, :n] = -K
        block[:n, n:] = D
        block[n:, n:] = K.T
        F = expm(block * dt)
        phi = F[n:, n:].T
        Q = phi @ F[:n, n:]
        return _Stepper(phi, _psd_factor(Q))
    except (LinAlgError, ValueError) as e:
        raise NumericalError(f"Could not build the {integrator} step: {e}") from e


def trajectory_generator(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def initial_std(n_bar: float) -> np.ndarray:
    """Uncoupled stationary widths: cavity and atom vacuum, mirror thermal."""
    return np.sqrt([0.5, 0.5, n_bar + 0.5, n_bar + 0.5, 0.5, 0.5])


@dataclass
class _BatchResult:
    first: int
    # Per-trajectory time sums of X and X Xᵀ.
    sum_x: np.ndarray
    sum_xx: np.ndarray = field(repr=False)


def _run_batch(
    first: int,
    count: int,
    stepper: _Stepper,
    std0: np.ndarray,
    config: SimConfig,
    records: Optional[np.memmap],
) -> _BatchResult:
    rngs = [trajectory_generator(config.rng_seed, first + b) for b in range(count)]
    X = np.stack([rng.standard_normal(6) for rng in rngs]) * std0

    phi_t = stepper.transition.T
    noise_t = stepper.noise_factor.T
    sum_x = np.zeros((count, 6))
    sum_xx = np.zeros((count, 6, 6))

    total = config.burn_in_steps + config.sample_steps
    step = 0
    sample = 0
    while step < total:
        chunk = min(CHUNK_STEPS, total - step)
        # (chunk, count, 6): each trajectory consumes its own stream in order.
        z = np.stack([rng.standard_normal((chunk, 6)) for rng in rngs], axis=1)
        kicks = z @ noise_t
        for k in range(chunk):
            X = X @ phi_t + kicks[k]
            step += 1
            if step > config.burn_in_steps and (step - config.burn_in_steps) % config.sample_stride == 0:
                sum_x += X
                sum_xx += X[:, :, None] * X[:, None, :]
                if records is not None and sample % config.record_stride == 0:
                    records[first : first + count, sample // config.record_stride, :] = X
                sample += 1

        if not np.all(np.isfinite(X)) or float(np.max(np.abs(X))) > DIVERGENCE_LIMIT:
            raise NumericalError(
                f"Trajectories {first}..{first + count - 1} diverged at step {step} "
                f"(integrator={config.integrator}, dt={config.dt:.3g})"
            )

    return _BatchResult(first=first, sum_x=sum_x, sum_xx=sum_xx)


def _fsum_columns(values: np.ndarray) -> np.ndarray:
    """math.fsum over axis 0 for every remaining index."""
    flat = values.reshape(values.shape[0], -1)
    return np.array([math.fsum(flat[:, j]) for j in range(flat.shape[1])]).reshape(values.shape[1:])


def simulate(
    params: SystemParams,
    config: SimConfig,
    record_path: str | Path | None = None,
    workers: int | None = None,
) -> TrajectoryStats:
    """Time-and-ensemble second moments of the stationary fluctuations.

    Error bars come from the trajectory-to-trajectory spread of per-trajectory
    time averages.
    """
    model = linear_model(params)
    ok, reason = validate_sim_config(config, params, model)
    if not ok:
        raise ParameterError(reason)
    st = stability(model.drift)
    if not st.stable:
        raise NoStationaryStateError(
            f"no stationary state to sample: max Re eigenvalue {-st.margin:.6g}"
        )
    if config.n_trajectories < MIN_ORACLE_TRAJECTORIES:
        logger.warning(
            "Only %d trajectories; oracle comparisons expect at least %d",
            config.n_trajectories,
            MIN_ORACLE_TRAJECTORIES,
        )

    stepper = make_stepper(model.drift, model.diffusion, config.dt, config.integrator)
    std0 = initial_std(model.rates.n_bar)

    records = None
    if record_path is not None:
        n_recorded = -(-config.n_samples // config.record_stride)
        header = RecordHeader(
            n_trajectories=config.n_trajectories,
            n_samples=n_recorded,
            n_dims=6,
            sample_dt=config.dt * config.sample_stride * config.record_stride,
        )
        records = create_records(record_path, header)

    batches = [
        (first, min(config.batch_size, config.n_trajectories - first))
        for first in range(0, config.n_trajectories, config.batch_size)
    ]
    workers = workers or get_worker_count()
    logger.info(
        "Simulating %d trajectories (%s, dt=%.3g s, %d+%d steps) on %d worker(s)",
        config.n_trajectories,
        config.integrator,
        config.dt,
        config.burn_in_steps,
        config.sample_steps,
        workers,
    )

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(
            pool.map(lambda b: _run_batch(b[0], b[1], stepper, std0, config, records), batches)
        )
    if records is not None:
        records.flush()

    results.sort(key=lambda r: r.first)
    per_traj_x = np.concatenate([r.sum_x for r in results]) / config.n_samples
    per_traj_xx = np.concatenate([r.sum_xx for r in results]) / config.n_samples

    n = config.n_trajectories
    mean = _fsum_columns(per_traj_x) / n
    second = _fsum_columns(per_traj_xx) / n
    covariance = second - np.outer(mean, mean)
    covariance = 0.5 * (covariance + covariance.T)

    spread_xx = _fsum_columns((per_traj_xx - second) ** 2) / (n - 1)
    spread_x = _fsum_columns((per_traj_x - mean) ** 2) / (n - 1)

    return TrajectoryStats(
        mean=mean,
        covariance=covariance,
        stderr=np.sqrt(spread_xx / n),
        mean_stderr=np.sqrt(spread_x / n),
        n_trajectories=n,
        n_samples=config.n_samples,
    )
