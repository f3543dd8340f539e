"""`steady`: one parameter point end to end."""

from __future__ import annotations

import argparse
import logging
from dataclasses import asdict

from entanglement.gaussian import symplectic_eigenvalues
from entanglement.report import REPORT_FIELDS
from lyapunov.matrix_io import write_covariance
from lyapunov.solver import lyapunov_residual
from model.dynamics import back_action_ratio, linear_model, stability, static_stability_threshold
from sweeps.engine import evaluate_point

from .common import EXIT_OK, command, emit_document, load_run_config

logger = logging.getLogger(__name__)


@command
async def steady_command(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    params = config.system
    model = linear_model(params)
    st = stability(model.drift)

    document = {
        "params": asdict(params),
        "rates": asdict(model.rates),
        "steady_state": asdict(model.steady),
        "back_action_ratio": back_action_ratio(params, model.steady, model.rates),
        "static_threshold": static_stability_threshold(params, model.rates),
        "eigenvalues": [[float(z.real), float(z.imag)] for z in st.eigenvalues],
    }

    report, V = evaluate_point(model, st)
    if model.uncoupled:
        logger.warning("Cavity, mirror and atoms are uncoupled; every negativity is zero")
    elif not st.stable:
        logger.warning("No stationary state at this point (max Re eigenvalue %.6g)", -st.margin)

    if V is not None:
        document["covariance"] = V.matrix.tolist()
        document["modes"] = list(V.modes)
        document["residual"] = lyapunov_residual(model.drift, V.matrix, model.diffusion)
        document["symplectic_eigenvalues"] = symplectic_eigenvalues(V.matrix).tolist()
        if args.covariance:
            write_covariance(args.covariance, V)

    document["report"] = report.to_dict()
    emit_document(document, args.out, table=(REPORT_FIELDS, [report.to_dict()]))
    return EXIT_OK
