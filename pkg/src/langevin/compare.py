from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from lyapunov.covariance import CovarianceMatrix
from utils.formatting import finite_or_none

from .simulator import TrajectoryStats

logger = logging.getLogger(__name__)

DEFAULT_Z_THRESHOLD = 5.0


@dataclass(frozen=True, eq=False)
class DeviationReport:
    z: np.ndarray
    max_abs_z: float
    flagged: tuple[tuple[int, int], ...]
    passed: bool
    threshold: float

    def rows(self, stats: TrajectoryStats, V: CovarianceMatrix) -> list[dict[str, object]]:
        """One row per independent entry (i ≤ j), for tabular output."""
        out: list[dict[str, object]] = []
        n = self.z.shape[0]
        for i in range(n):
            for j in range(i, n):
                out.append(
                    {
                        "i": i,
                        "j": j,
                        "lyapunov": float(V.matrix[i, j]),
                        "empirical": float(stats.covariance[i, j]),
                        "stderr": float(stats.stderr[i, j]),
                        "z": finite_or_none(self.z[i, j]),
                        "flagged": (i, j) in self.flagged,
                    }
                )
        return out


def compare(stats: TrajectoryStats, V: CovarianceMatrix, z_threshold: float = DEFAULT_Z_THRESHOLD) -> DeviationReport:
    """Per-entry z-scores of the empirical covariance against V."""
    expected = np.asarray(V.matrix, dtype=float)
    diff = stats.covariance - expected
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(stats.stderr > 0, diff / stats.stderr, np.where(diff == 0, 0.0, np.inf))

    n = z.shape[0]
    flagged = tuple(
        (i, j) for i in range(n) for j in range(i, n) if not abs(z[i, j]) <= z_threshold
    )
    upper = np.abs(z[np.triu_indices(n)])
    max_abs_z = float(np.max(upper)) if upper.size else 0.0

    if flagged:
        logger.warning("Oracle comparison: %d entr(ies) beyond |z| = %.3g (max %.3g)", len(flagged), z_threshold, max_abs_z)
    return DeviationReport(
        z=z,
        max_abs_z=max_abs_z,
        flagged=flagged,
        passed=not flagged,
        threshold=z_threshold,
    )
