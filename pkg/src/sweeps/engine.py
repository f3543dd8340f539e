"""Point evaluation and parallel sweep execution with result caching."""

from __future__ import annotations

import asyncio
import hashlib
import json
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Optional

from database import init_database
from database import queries as cache
from entanglement.negativity import bipartite_negativity
from entanglement.report import (
    REPORT_FIELDS,
    EntanglementReport,
    build_report,
    separable_report,
    unstable_report,
)
from lyapunov.covariance import CovarianceMatrix
from lyapunov.solver import solve_lyapunov
from model.config import RunConfig
from model.dynamics import (
    LinearModel,
    Stability,
    derive_rates,
    drift_matrix,
    linear_model,
    stability,
    static_stability_threshold,
    steady_state,
)
from model.errors import ParameterError
from model.params import SystemParams
from probe.readout import DEFAULT_HOMODYNE_PHASE, DEFAULT_TAU_M, ReadoutMap, apply_readout_map, resolve_probe
from utils.env import get_worker_count
from utils.formatting import finite_or_none

from . import CODE_VERSION
from .grid import SweepSpec, grid_points, point_config, validate_sweep_spec
from .output import rows_to_csv, rows_to_json

logger = logging.getLogger(__name__)

PROBE_OUTPUT_FIELDS: tuple[str, ...] = ("probe_gain", "e_probe", "probe_valid")
STABILITY_FIELDS: tuple[str, ...] = ("stable", "stability_margin", "static_threshold")

Evaluator = Callable[[RunConfig, tuple[str, ...]], dict[str, Any]]


def evaluate_point(
    model: LinearModel,
    st: Optional[Stability] = None,
) -> tuple[EntanglementReport, Optional[CovarianceMatrix]]:
    """Report for a built model, plus the covariance when one was solved for.

    Uncoupled modes (no pump, or χ = ζ = 0) give all-zero negativities even when
    the undamped atom leaves the drift marginal; V is then not computed.
    """
    st = st or stability(model.drift)
    if model.uncoupled:
        logger.debug("Modes are uncoupled (alpha_s^2=%.3g); product state", model.steady.alpha_s_sq)
        return separable_report(st.stable, st.margin), None
    if not st.stable:
        logger.debug("Point has no stationary state (margin %.3g)", st.margin)
        return unstable_report(st.margin), None
    V = solve_lyapunov(model.drift, model.diffusion)
    return build_report(V, st.margin), V


def run_point(params: SystemParams) -> EntanglementReport:
    """Full entanglement report for one parameter point.

    Unstable points give a report with stable=False and no negativities.
    """
    return evaluate_point(linear_model(params))[0]


def readout_for(config: RunConfig) -> ReadoutMap:
    probe = resolve_probe(config.system, config.probe)
    return ReadoutMap.from_probe(
        probe,
        config.system,
        tau_m=config.readout.get("tau_m", DEFAULT_TAU_M),
        homodyne_phase=config.readout.get("homodyne_phase", DEFAULT_HOMODYNE_PHASE),
    )


def report_row(config: RunConfig, fields: tuple[str, ...]) -> dict[str, Any]:
    """Evaluator for entanglement sweeps (report fields plus optional probe columns)."""
    report, V = evaluate_point(linear_model(config.system))
    row = report.to_dict()
    if V is not None and any(f in PROBE_OUTPUT_FIELDS for f in fields):
        readout = readout_for(config)
        mapped = apply_readout_map(V, readout)
        row["probe_gain"] = readout.gain
        row["e_probe"] = bipartite_negativity(mapped, ["probe"])
        row["probe_valid"] = mapped.valid
    return row


def stability_row(config: RunConfig, fields: tuple[str, ...]) -> dict[str, Any]:
    """Evaluator for stability maps: no covariance is computed."""
    params = config.system
    rates = derive_rates(params)
    st = stability(drift_matrix(params, steady_state(params, rates), rates))
    return {
        "stable": st.stable,
        "stability_margin": st.margin,
        "static_threshold": static_stability_threshold(params, rates),
    }


EVALUATOR_FIELDS: dict[Evaluator, tuple[str, ...]] = {
    report_row: REPORT_FIELDS + PROBE_OUTPUT_FIELDS,
    stability_row: STABILITY_FIELDS,
}


@dataclass(frozen=True)
class SweepResult:
    columns: tuple[str, ...]
    rows: list[dict[str, Any]]
    csv_text: str
    json_text: str
    cache_key: str
    cached: bool


def cache_key(spec: SweepSpec, base: RunConfig, evaluator: Evaluator) -> str:
    """sha256 of the canonical sweep definition, base configuration and code version."""
    payload = {
        "spec": spec.canonical(),
        "base": base.canonical(),
        "evaluator": evaluator.__name__,
        "version": CODE_VERSION,
    }
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class SweepRunner:
    """Evaluates grids on a worker pool; `evaluations` counts point computations."""

    def __init__(self, workers: Optional[int] = None, use_cache: bool = True) -> None:
        self.workers = workers or get_worker_count()
        self.use_cache = use_cache
        self.evaluations = 0
        self._lock = threading.Lock()

    def _evaluate(
        self,
        evaluator: Evaluator,
        spec: SweepSpec,
        base: RunConfig,
        index: int,
        point: dict[str, float],
    ) -> dict[str, Any]:
        with self._lock:
            self.evaluations += 1

        row: dict[str, Any] = dict(point)
        try:
            config = point_config(spec, base, point)
            values = evaluator(config, spec.fields)
            row.update({f: values.get(f) for f in spec.fields})
            row["error"] = None
        except Exception as e:
            logger.error("Sweep point %d (%s) failed: %s", index, point, e, exc_info=True)
            row.update({f: None for f in spec.fields})
            row["error"] = f"{type(e).__name__}: {e}"
        return row

    async def run(self, spec: SweepSpec, base: RunConfig, evaluator: Evaluator = report_row) -> SweepResult:
        ok, reason = validate_sweep_spec(spec, EVALUATOR_FIELDS[evaluator])
        if not ok:
            raise ParameterError(reason)

        columns = spec.axis_names + spec.fields + ("error",)
        key = cache_key(spec, base, evaluator)

        if self.use_cache:
            await init_database()
            hit = await cache.get_cached_sweep(key)
            if hit is not None:
                logger.info("Sweep %s served from cache (%s)", spec.name or "<spec>", key[:12])
                data = json.loads(hit["json"])
                # The name is not part of the key; label the document with the current one.
                return SweepResult(
                    columns=tuple(data["columns"]),
                    rows=data["rows"],
                    csv_text=hit["csv"],
                    json_text=rows_to_json(data["columns"], data["rows"], name=spec.name, cache_key=key),
                    cache_key=key,
                    cached=True,
                )

        points = grid_points(spec)
        logger.info("Running sweep %s: %d point(s) on %d worker(s)", spec.name or "<spec>", len(points), self.workers)

        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            rows = await asyncio.gather(
                *(
                    loop.run_in_executor(pool, self._evaluate, evaluator, spec, base, i, point)
                    for i, point in enumerate(points)
                )
            )
        rows = [_blank_non_finite(row) for row in rows]

        failed = sum(1 for row in rows if row["error"])
        if failed:
            logger.warning("Sweep finished with %d failed point(s) out of %d", failed, len(rows))

        csv_text = rows_to_csv(columns, rows)
        json_text = rows_to_json(columns, rows, name=spec.name, cache_key=key)
        if self.use_cache:
            await cache.store_sweep(
                cache_key=key,
                name=spec.name,
                n_points=len(rows),
                csv_text=csv_text,
                json_text=json_text,
                code_version=CODE_VERSION,
            )
        return SweepResult(columns=columns, rows=rows, csv_text=csv_text, json_text=json_text, cache_key=key, cached=False)


def _blank_non_finite(row: dict[str, Any]) -> dict[str, Any]:
    return {k: (finite_or_none(v) if isinstance(v, float) else v) for k, v in row.items()}
