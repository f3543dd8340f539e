"""`sweep`: figure presets and user-defined grids."""

from __future__ import annotations

import argparse
import logging

from model.errors import ParameterError
from sweeps.engine import SweepRunner
from sweeps.grid import load_sweep_spec
from sweeps.presets import get_preset

from .common import EXIT_OK, command, emit_table, load_run_config

logger = logging.getLogger(__name__)


@command
async def sweep_command(args: argparse.Namespace) -> int:
    if bool(args.preset) == bool(args.spec):
        raise ParameterError("give exactly one of --preset or --spec")

    if args.preset:
        try:
            spec = get_preset(args.preset).spec
        except KeyError as e:
            raise ParameterError(str(e.args[0])) from e
    else:
        spec = load_sweep_spec(args.spec)

    config = load_run_config(args)
    runner = SweepRunner(use_cache=not args.no_cache)
    result = await runner.run(spec, config)
    logger.info(
        "Sweep %s: %d row(s), %s",
        spec.name or "<spec>",
        len(result.rows),
        "cached" if result.cached else f"{runner.evaluations} evaluation(s)",
    )

    emit_table(
        result.columns,
        result.rows,
        args.out,
        name=spec.name,
        csv_text=result.csv_text,
        json_text=result.json_text,
    )
    return EXIT_OK
