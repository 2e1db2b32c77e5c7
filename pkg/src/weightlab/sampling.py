"""Sampled-function plumbing shared by the diagnostic modules."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class SampledFunction:
    """A function trace on a strictly increasing positive grid."""

    grid: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.grid.ndim != 1 or self.grid.shape != self.values.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if len(self.grid) and self.grid[0] <= 0:
            raise ValueError("grid must be positive")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")

    def __len__(self) -> int:
        return len(self.grid)

    def at(self, t: float) -> float:
        """Piecewise-constant-from-the-left lookup (steps jump at grid points)."""
        idx = np.searchsorted(self.grid, t, side="right") - 1
        if idx < 0:
            return float(self.values[0])
        return float(self.values[idx])


def log_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """n log-spaced points on [lo, hi]."""
    if not (0 < lo < hi) or n < 2:
        raise ValueError("need 0 < lo < hi and n >= 2")
    return np.exp(np.linspace(np.log(lo), np.log(hi), n))
