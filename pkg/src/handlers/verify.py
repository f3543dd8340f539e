"""`verify`: compare the Lyapunov covariance with the stochastic oracle."""

from __future__ import annotations

import argparse
import asyncio
import logging

from langevin.compare import compare
from langevin.simulator import MIN_ORACLE_TRAJECTORIES, SimConfig, default_dt, simulate
from lyapunov.solver import solve_lyapunov
from model.dynamics import linear_model
from model.errors import ParameterError
from utils.formatting import finite_or_none

from .common import EXIT_FAILURE, EXIT_OK, command, emit_document, load_run_config

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ("i", "j", "lyapunov", "empirical", "stderr", "z", "flagged")


def sim_config_from_args(args: argparse.Namespace, dt: float) -> SimConfig:
    if args.trajectories < MIN_ORACLE_TRAJECTORIES:
        raise ParameterError(
            f"verify needs at least {MIN_ORACLE_TRAJECTORIES} trajectories (got {args.trajectories})"
        )
    return SimConfig(
        dt=dt,
        burn_in_steps=args.burn_in,
        sample_steps=args.samples,
        n_trajectories=args.trajectories,
        rng_seed=args.seed,
        sample_stride=args.stride,
        integrator=args.integrator,
    )


@command
async def verify_command(args: argparse.Namespace) -> int:
    params = load_run_config(args).system
    model = linear_model(params)
    V = solve_lyapunov(model.drift, model.diffusion)

    config = sim_config_from_args(args, default_dt(params, model, scale=args.dt_scale))
    stats = await asyncio.to_thread(simulate, params, config, args.record)
    report = compare(stats, V, z_threshold=args.z_threshold)

    rows = report.rows(stats, V)
    document = {
        "passed": report.passed,
        "max_abs_z": finite_or_none(report.max_abs_z),
        "z_threshold": report.threshold,
        "flagged": [list(ij) for ij in report.flagged],
        "n_trajectories": stats.n_trajectories,
        "n_samples": stats.n_samples,
        "effective_samples": stats.effective_samples,
        "dt": config.dt,
        "integrator": config.integrator,
        "rng_seed": config.rng_seed,
        "mean": stats.mean.tolist(),
        "mean_stderr": stats.mean_stderr.tolist(),
        "entries": rows,
    }
    emit_document(document, args.out, table=(TABLE_COLUMNS, rows))

    logger.info("Oracle %s: max |z| = %.3g", "passed" if report.passed else "FAILED", report.max_abs_z)
    return EXIT_OK if report.passed else EXIT_FAILURE
