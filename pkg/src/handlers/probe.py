"""`probe`: readout map, mapped negativity and inferred E_AC at one point."""

from __future__ import annotations

import argparse
import logging
from dataclasses import asdict, replace

from entanglement.negativity import bipartite_negativity, log_negativity
from lyapunov.solver import solve_lyapunov
from model.dynamics import linear_model
from model.errors import CalibrationError
from probe.readout import (
    apply_readout_map,
    infer_ac_entanglement,
    measured_covariance_from_records,
    probe_steady,
    resolve_probe,
)
from sweeps.engine import readout_for

from .common import EXIT_OK, command, emit_document, load_run_config

logger = logging.getLogger(__name__)

MISCALIBRATION = 1.10


@command
async def probe_command(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    params = config.system
    model = linear_model(params)
    V = solve_lyapunov(model.drift, model.diffusion)

    probe = resolve_probe(params, config.probe)
    readout = readout_for(config)
    measured = apply_readout_map(V, readout)
    inferred = infer_ac_entanglement(measured, readout)
    e_ac = log_negativity(V, "AC")

    document = {
        "probe": asdict(probe),
        "alpha_p_sq": probe_steady(probe),
        "gain": readout.gain,
        "homodyne_phase": readout.homodyne_phase,
        "validity": asdict(readout.validity) if readout.validity else None,
        "valid": measured.valid,
        "e_ac": e_ac,
        "e_probe": bipartite_negativity(measured, ["probe"]),
        "e_inferred": inferred.e_inferred,
        "measured_covariance": measured.matrix.tolist(),
    }

    if args.records:
        sampled = measured_covariance_from_records(args.records, readout, seed=args.noise_seed)
        from_records = infer_ac_entanglement(sampled, readout)
        relative = abs(from_records.e_inferred - e_ac) / e_ac if e_ac > 0 else None
        document["records"] = {
            "path": str(args.records),
            "noise_seed": args.noise_seed,
            "e_inferred": from_records.e_inferred,
            "relative_error": relative,
            "measured_covariance": sampled.matrix.tolist(),
        }
        logger.info("E_AC from %s: %.6g (model %.6g)", args.records, from_records.e_inferred, e_ac)

    if args.gain_check:
        wrong = replace(readout, gain=readout.gain * MISCALIBRATION)
        try:
            biased = infer_ac_entanglement(measured, wrong)
            document["gain_check"] = {"gain_factor": MISCALIBRATION, "physical": True, "e_inferred": biased.e_inferred}
            logger.warning(
                "Gain off by %+.0f%% still gives a physical state; E_AC biased to %.6g",
                (MISCALIBRATION - 1.0) * 100.0,
                biased.e_inferred,
            )
        except CalibrationError as e:
            document["gain_check"] = {"gain_factor": MISCALIBRATION, "physical": False, "error": str(e)}

    emit_document(document, args.out)
    return EXIT_OK
