"""
Stochastic grid function over 0 <= x, y <= K.

    f(x, y) = -5 exp(-beta [(x - pi)^2 + (y - pi)^2])
              - sum_{i,j=1..K} eps_ij exp(-alpha [(x - i)^2 + (y - j)^2])

with eps_ij ~ Unif[0, 1]. There are K^2 random valleys at the integer grid
nodes and a deterministic well at (pi, pi); the minimum value varies with the
realization between -(K^2 + 5) and -5.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from ..core import Bounds, KnownOptimum, Sense
from ..errors import ConfigurationError
from .base import Realization, TestFunction

GRID_SIZE = 10
WELL_DEPTH = 5.0


def stochastic_grid(
    x: ArrayLike,
    y: ArrayLike,
    realization: Realization,
    alpha: float = 1.0,
    beta: float = 1.0,
    K: int = GRID_SIZE,
):
    """
    Evaluate at ``(x, y)``; both may be arrays and broadcast against each other.

    ``realization`` must hold a ``K x K`` array indexed ``[i - 1, j - 1]``.
    Resampling realizations draw a fresh array once per call.
    """
    if realization.shape != (K, K):
        raise ConfigurationError(f"stochastic_grid needs a {K}x{K} realization, got {realization.shape}")
    eps = realization.values()
    xs = np.asarray(x, dtype=np.float64)
    ys = np.asarray(y, dtype=np.float64)
    nodes = np.arange(1, K + 1, dtype=np.float64)
    # The valley sum factorises into exp(-alpha (x - i)^2) * exp(-alpha (y - j)^2).
    ex = np.exp(-alpha * (xs[..., None] - nodes) ** 2)
    ey = np.exp(-alpha * (ys[..., None] - nodes) ** 2)
    valleys = np.einsum("...i,ij,...j->...", ex, eps, ey)
    well = WELL_DEPTH * np.exp(-beta * ((xs - np.pi) ** 2 + (ys - np.pi) ** 2))
    result = -well - valleys
    return float(result) if result.ndim == 0 else result


class StochasticGrid(TestFunction):
    NAME = "stochastic_grid"
    SENSE = Sense.MINIMIZE
    STOCHASTIC = True
    FIXED_DIMENSION = 2
    DESCRIPTION = "K^2 random valleys plus a fixed well at (pi, pi); K = 10"

    def __init__(self, dimension: int = 2, realization: Optional[Realization] = None) -> None:
        super().__init__(dimension, realization)

    def evaluate(self, x):
        return stochastic_grid(x[..., 0], x[..., 1], self._require_realization())

    def default_bounds(self) -> Bounds:
        return Bounds.cube(0.0, float(GRID_SIZE), 2)

    def realization_shape(self) -> Tuple[int, ...]:
        return (GRID_SIZE, GRID_SIZE)

    def known_optimum(self) -> KnownOptimum:
        # Location only: the minimum value depends on the realization.
        return KnownOptimum(positions=((math.pi, math.pi),), value=None, kind=Sense.MINIMIZE)
