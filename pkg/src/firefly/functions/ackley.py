"""
Ackley function.

    f(x) = -20 exp(-1/5 sqrt(mean(x_i^2))) - exp(mean(cos(2 pi x_i))) + 20 + e

Unique global minimum f = 0 at the origin. No search domain accompanies the
formula, so the conventional [-32.768, 32.768]^d box is used.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike

from ..core import Bounds, KnownOptimum, Sense
from .base import TestFunction

ACKLEY_HALF_WIDTH = 32.768


def ackley(x: ArrayLike) -> float:
    values = np.asarray(x, dtype=np.float64)
    return float(_ackley(values))


def _ackley(x: np.ndarray):
    root_mean_square = np.sqrt(np.mean(x**2, axis=-1))
    mean_cos = np.mean(np.cos(2.0 * np.pi * x), axis=-1)
    return -20.0 * np.exp(-0.2 * root_mean_square) - np.exp(mean_cos) + 20.0 + np.e


class Ackley(TestFunction):
    NAME = "ackley"
    SENSE = Sense.MINIMIZE
    DESCRIPTION = "Ackley; unique global minimum 0 at the origin"

    def evaluate(self, x):
        return _ackley(x)

    def default_bounds(self) -> Bounds:
        return Bounds.cube(-ACKLEY_HALF_WIDTH, ACKLEY_HALF_WIDTH, self.dimension)

    def known_optimum(self) -> KnownOptimum:
        return KnownOptimum(positions=((0.0,) * self.dimension,), value=0.0, kind=Sense.MINIMIZE)
