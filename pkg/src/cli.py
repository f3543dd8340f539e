"""Argument parser and subcommand registration."""

from __future__ import annotations

import argparse

from handlers.cache import cache_clear_command, cache_stats_command
from handlers.probe import probe_command
from handlers.stability_map import stability_map_command
from handlers.steady import steady_command
from handlers.sweep import sweep_command
from handlers.verify import verify_command
from sweeps.presets import PRESETS


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="key = value parameter file (SI units)")
    parser.add_argument(
        "--set",
        metavar="KEY=VALUE",
        action="append",
        default=[],
        help="override one parameter; repeatable, same grammar as the parameter file",
    )
    parser.add_argument("--out", metavar="PREFIX", help="write PREFIX.csv and PREFIX.json instead of stdout")


def create_parser() -> argparse.ArgumentParser:
    """Build the parser with one subcommand per handler."""
    parser = argparse.ArgumentParser(
        prog="hybrid-entanglement",
        description="Stationary entanglement of a cavity coupled to a mirror and a Bogoliubov mode.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    steady = sub.add_parser("steady", help="covariance and entanglement report at one point")
    _add_common(steady)
    steady.add_argument("--covariance", metavar="FILE", help="also write the covariance matrix as text")
    steady.set_defaults(handler=steady_command)

    sweep = sub.add_parser("sweep", help="parameter sweep from a preset or a JSON definition")
    _add_common(sweep)
    sweep.add_argument("--preset", choices=sorted(PRESETS))
    sweep.add_argument("--spec", metavar="FILE", help="JSON sweep definition")
    sweep.add_argument("--no-cache", action="store_true", help="neither read nor write the result cache")
    sweep.set_defaults(handler=sweep_command)

    verify = sub.add_parser("verify", help="check the covariance against stochastic trajectories")
    _add_common(verify)
    verify.add_argument("--trajectories", type=int, default=2000)
    verify.add_argument("--dt-scale", type=float, default=0.4, help="dt as a fraction of 0.05/fastest rate")
    verify.add_argument("--burn-in", type=int, default=20_000, help="steps discarded before sampling")
    verify.add_argument("--samples", type=int, default=20_000, help="steps in the sampling window")
    verify.add_argument("--stride", type=int, default=10, help="steps between recorded samples")
    verify.add_argument("--integrator", choices=("exact", "euler"), default="exact")
    verify.add_argument("--z-threshold", type=float, default=5.0)
    verify.add_argument("--seed", type=int, default=20240601)
    verify.add_argument("--record", metavar="FILE", help="dump sampled quadratures in the binary record format")
    verify.set_defaults(handler=verify_command)

    probe = sub.add_parser("probe", help="probe readout and inferred cavity/atom entanglement")
    _add_common(probe)
    probe.add_argument("--gain-check", action="store_true", help="repeat the inference with the gain off by +10%%")
    probe.add_argument("--records", metavar="FILE", help="also infer E_AC from simulator records (binary record format)")
    probe.add_argument("--noise-seed", type=int, default=0, help="seed of the vacuum noise added to recorded samples")
    probe.set_defaults(handler=probe_command)

    smap = sub.add_parser("stability-map", help="stability over detuning and coupling (zeta tied to chi)")
    _add_common(smap)
    smap.add_argument("--points", type=int, default=41, help="points per axis")
    smap.add_argument("--chi-max", type=float, default=300.0)
    smap.add_argument("--no-cache", action="store_true")
    smap.set_defaults(handler=stability_map_command)

    cache_parser = sub.add_parser("cache", help="inspect or clear the sweep result cache")
    cache_sub = cache_parser.add_subparsers(dest="cache_command", required=True)
    stats = cache_sub.add_parser("stats", help="entries and hit counts")
    stats.add_argument("--key", help="show a single entry")
    stats.add_argument("--out", metavar="PREFIX", help="write PREFIX.json instead of stdout")
    stats.set_defaults(handler=cache_stats_command)
    clear = cache_sub.add_parser("clear", help="delete every cached sweep")
    clear.add_argument("--out", metavar="PREFIX", help="write PREFIX.json instead of stdout")
    clear.set_defaults(handler=cache_clear_command)

    return parser
