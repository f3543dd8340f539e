from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Quadrature pairs in the order (δx, δy), (δq̃, δp̃), (δQ, δP).
MODES: tuple[str, ...] = ("C", "M", "A")


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Symmetric 2n×2n covariance with one label per quadrature pair."""

    matrix: np.ndarray
    modes: tuple[str, ...] = MODES

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        if m.shape != (2 * len(self.modes), 2 * len(self.modes)):
            raise ValueError(f"matrix shape {m.shape} does not match modes {self.modes}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "modes", tuple(self.modes))

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def index(self, mode: str) -> int:
        try:
            return self.modes.index(mode)
        except ValueError as e:
            raise ValueError(f"mode {mode!r} not in {self.modes}") from e

    def quadrature_indices(self, modes: Iterable[str]) -> list[int]:
        idx: list[int] = []
        for mode in modes:
            i = self.index(mode)
            idx.extend((2 * i, 2 * i + 1))
        return idx

    def block(self, row_mode: str, col_mode: str) -> np.ndarray:
        r = self.quadrature_indices([row_mode])
        c = self.quadrature_indices([col_mode])
        return self.matrix[np.ix_(r, c)].copy()

    def select(self, modes: Sequence[str]) -> "CovarianceMatrix":
        """Reduced state on the given modes, kept in this matrix's mode order."""
        wanted = set(modes)
        if not wanted:
            raise ValueError("at least one mode must be selected")
        unknown = wanted - set(self.modes)
        if unknown:
            raise ValueError(f"unknown mode(s): {sorted(unknown)}")
        ordered = [m for m in self.modes if m in wanted]
        idx = self.quadrature_indices(ordered)
        return CovarianceMatrix(self.matrix[np.ix_(idx, idx)], tuple(ordered))
