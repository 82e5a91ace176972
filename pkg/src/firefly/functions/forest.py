"""
Forest function: (sum |x_i|) exp(-sum sin(x_i^2)).

Non-negative everywhere, zero only at the origin where it is not
differentiable. Domain [-2 pi, 2 pi]^d.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike

from ..core import Bounds, KnownOptimum, Sense
from .base import TestFunction


def forest(x: ArrayLike) -> float:
    return float(_forest(np.asarray(x, dtype=np.float64)))


def _forest(x: np.ndarray):
    return np.sum(np.abs(x), axis=-1) * np.exp(-np.sum(np.sin(x**2), axis=-1))


class Forest(TestFunction):
    NAME = "forest"
    SENSE = Sense.MINIMIZE
    DESCRIPTION = "Multimodal with a singular minimum 0 at the origin"

    def evaluate(self, x):
        return _forest(x)

    def default_bounds(self) -> Bounds:
        return Bounds.cube(-2.0 * math.pi, 2.0 * math.pi, self.dimension)

    def known_optimum(self) -> KnownOptimum:
        return KnownOptimum(positions=((0.0,) * self.dimension,), value=0.0, kind=Sense.MINIMIZE)
