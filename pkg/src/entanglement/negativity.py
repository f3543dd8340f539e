"""Logarithmic negativities, tripartite classification and the monogamy residual."""

from __future__ import annotations

import math
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from lyapunov.covariance import CovarianceMatrix
from model.errors import NumericalError

from .gaussian import symplectic_eigenvalues


# E above this counts as inseparable.
INSEPARABILITY_THRESHOLD = 1e-9


class BipartitionLabel(str, Enum):
    AC = "AC"
    MC = "MC"
    AM = "AM"
    A_MC = "A|MC"
    M_AC = "M|AC"
    C_AM = "C|AM"

    @property
    def modes(self) -> tuple[str, ...]:
        """Modes kept in the reduced state the label acts on."""
        return tuple(ch for ch in self.value if ch != "|")

    @property
    def transposed(self) -> str:
        """The single mode whose momentum is flipped."""
        return self.value[0]

    @property
    def is_one_vs_two(self) -> bool:
        return "|" in self.value

    @property
    def key(self) -> str:
        return "e_" + self.value.lower().replace("|", "_")


PAIRWISE = (BipartitionLabel.AC, BipartitionLabel.MC, BipartitionLabel.AM)
ONE_VS_TWO = (BipartitionLabel.A_MC, BipartitionLabel.M_AC, BipartitionLabel.C_AM)


class TripartiteClass(str, Enum):
    FULLY_INSEPARABLE = "fully-inseparable"
    TWO_MODE_BISEPARABLE = "two-mode-biseparable"
    ONE_MODE_BISEPARABLE = "one-mode-biseparable"
    FULLY_SEPARABLE = "fully-separable"


_CLASS_BY_COUNT = {
    3: TripartiteClass.FULLY_INSEPARABLE,
    2: TripartiteClass.TWO_MODE_BISEPARABLE,
    1: TripartiteClass.ONE_MODE_BISEPARABLE,
    0: TripartiteClass.FULLY_SEPARABLE,
}


def reduced_covariance(V: CovarianceMatrix, modes: Iterable[str]) -> CovarianceMatrix:
    """Rows/columns of the selected modes, in V's mode order."""
    return V.select(list(modes))


def partial_transpose(V: CovarianceMatrix, transposed_modes: Iterable[str]) -> CovarianceMatrix:
    """Flip the momentum sign of each transposed mode: V' = P V P."""
    flipped = set(transposed_modes)
    if not flipped or not flipped < set(V.modes):
        raise ValueError(f"transposed modes {sorted(flipped)} must be a proper non-empty subset of {V.modes}")

    signs = np.ones(2 * V.n_modes)
    for mode in flipped:
        signs[2 * V.index(mode) + 1] = -1.0
    return CovarianceMatrix(V.matrix * np.outer(signs, signs), V.modes)


def bipartite_negativity(V: CovarianceMatrix, transposed_modes: Iterable[str]) -> float:
    """E = max(0, −ln 2ν̃_min) between the transposed modes and the rest of V."""
    transposed = partial_transpose(V, transposed_modes)
    nu_min = float(symplectic_eigenvalues(transposed.matrix)[0])
    if not math.isfinite(nu_min) or nu_min <= 0.0:
        raise NumericalError(f"degenerate partially transposed spectrum: {nu_min!r}")
    return max(0.0, -math.log(2.0 * nu_min))


def log_negativity(V: CovarianceMatrix, label: BipartitionLabel | str) -> float:
    """Natural-log negativity of one of the six bipartitions."""
    label = BipartitionLabel(label)
    return bipartite_negativity(reduced_covariance(V, label.modes), [label.transposed])


def all_negativities(V: CovarianceMatrix) -> dict[BipartitionLabel, float]:
    return {label: log_negativity(V, label) for label in BipartitionLabel}


def classify_tripartite(negativities: Mapping[BipartitionLabel, float]) -> TripartiteClass:
    """Class from the number of inseparable one-vs-two bipartitions."""
    count = sum(1 for label in ONE_VS_TWO if negativities[label] > INSEPARABILITY_THRESHOLD)
    return _CLASS_BY_COUNT[count]


def residual_tripartite(
    V: CovarianceMatrix,
    negativities: Mapping[BipartitionLabel, float] | None = None,
) -> float:
    """Monogamy residual with squared log-negativities in place of the convex roof.

    max(0, min over i of [E²_i|jk − E²_ij − E²_ik]), and 0 unless the state is
    fully inseparable.
    """
    if negativities is None:
        negativities = all_negativities(V)
    if classify_tripartite(negativities) is not TripartiteClass.FULLY_INSEPARABLE:
        return 0.0

    g = {label: negativities[label] ** 2 for label in BipartitionLabel}
    candidates = (
        g[BipartitionLabel.A_MC] - g[BipartitionLabel.AM] - g[BipartitionLabel.AC],
        g[BipartitionLabel.M_AC] - g[BipartitionLabel.AM] - g[BipartitionLabel.MC],
        g[BipartitionLabel.C_AM] - g[BipartitionLabel.AC] - g[BipartitionLabel.MC],
    )
    return max(0.0, min(candidates))
