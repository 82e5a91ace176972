"""
Standing-wave function with a defect.

    f(x) = [exp(-sum (x_i/beta)^(2m)) - 2 exp(-sum (x_i - pi)^2)] * prod cos^2 x_i

With beta = 15 and m = 5 the unique global minimum is -1 at (pi, ..., pi)
inside [-20, 20]^d.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike

from ..core import Bounds, KnownOptimum, Sense
from .base import TestFunction

DEFAULT_BETA = 15.0
DEFAULT_M = 5


def standing_wave(x: ArrayLike, beta: float = DEFAULT_BETA, m: int = DEFAULT_M) -> float:
    return float(_standing_wave(np.asarray(x, dtype=np.float64), beta, m))


def _standing_wave(x: np.ndarray, beta: float = DEFAULT_BETA, m: int = DEFAULT_M):
    envelope = np.exp(-np.sum((x / beta) ** (2 * m), axis=-1))
    defect = 2.0 * np.exp(-np.sum((x - np.pi) ** 2, axis=-1))
    return (envelope - defect) * np.prod(np.cos(x) ** 2, axis=-1)


class StandingWave(TestFunction):
    NAME = "standing_wave"
    SENSE = Sense.MINIMIZE
    DESCRIPTION = "Standing wave with a defect; global minimum -1 at (pi, ..., pi)"

    def evaluate(self, x):
        return _standing_wave(x)

    def default_bounds(self) -> Bounds:
        return Bounds.cube(-20.0, 20.0, self.dimension)

    def known_optimum(self) -> KnownOptimum:
        position = (math.pi,) * self.dimension
        return KnownOptimum(positions=(position,), value=standing_wave(position), kind=Sense.MINIMIZE)
