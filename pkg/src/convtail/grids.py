"""Uniform grids on [0, gamma] and densities sampled on them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class GridMismatchError(ValueError):
    """Raised when two grid densities do not live on the same mesh."""


@dataclass(frozen=True)
class UniformGrid:
    """Mesh x_j = j*h, j = 0..N, with step h = gamma/N."""

    gamma: float
    n_intervals: int

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.n_intervals < 2:
            raise ValueError(f"n_intervals must be >= 2, got {self.n_intervals}")

    @property
    def step(self) -> float:
        return self.gamma / self.n_intervals

    def nodes(self) -> np.ndarray:
        return np.arange(self.n_intervals + 1, dtype=np.float64) * self.step


@dataclass
class GridDensity:
    """A density sampled on a uniform grid.

    ``values`` has length N+1 and holds the density at the grid nodes,
    in float64 or float32 depending on the precision mode that produced
    it.  Values from sampling or direct convolution are non-negative;
    FFT-produced values may carry small negatives, which are kept as-is
    because they are the observable signature of precision loss.
    Treat instances as immutable once produced.
    """

    grid: UniformGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values)
        if self.values.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if self.values.shape[0] != self.grid.n_intervals + 1:
            raise ValueError(
                f"values must have length N+1 = {self.grid.n_intervals + 1}, "
                f"got {self.values.shape[0]}"
            )

    @property
    def dtype(self) -> np.dtype:
        return self.values.dtype


def require_same_grid(a: GridDensity, b: GridDensity) -> UniformGrid:
    if a.grid != b.grid:
        raise GridMismatchError(f"grid mismatch: {a.grid} vs {b.grid}")
    return a.grid
