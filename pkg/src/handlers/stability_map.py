"""`stability-map`: Hurwitz flag and margin over a (Δ, χ) grid, ζ tied to χ."""

from __future__ import annotations

import argparse
import logging

from model.params import OMEGA_M_BASE
from sweeps.engine import SweepRunner, stability_row
from sweeps.grid import Axis, SweepSpec

from .common import EXIT_OK, command, emit_table, load_run_config

logger = logging.getLogger(__name__)


def stability_map_spec(points: int, chi_max: float = 300.0) -> SweepSpec:
    return SweepSpec(
        name="stability-map",
        axes=(
            Axis("detuning", -3.0 * OMEGA_M_BASE, 3.0 * OMEGA_M_BASE, points),
            Axis("chi", 5.0, chi_max, points),
        ),
        links={"zeta": "chi"},
        fields=("stable", "stability_margin", "static_threshold"),
    )


@command
async def stability_map_command(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    spec = stability_map_spec(args.points, args.chi_max)
    result = await SweepRunner(use_cache=not args.no_cache).run(spec, config, evaluator=stability_row)

    unstable = sum(1 for row in result.rows if row.get("stable") is False)
    logger.info("%d of %d point(s) without a stationary state", unstable, len(result.rows))
    emit_table(result.columns, result.rows, args.out, name=spec.name, csv_text=result.csv_text, json_text=result.json_text)
    return EXIT_OK
