"""Sphere, sum x_i^2: a sanity baseline outside the benchmark catalogue."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike

from ..core import Bounds, KnownOptimum, Sense
from .base import TestFunction


def sphere(x: ArrayLike) -> float:
    return float(np.sum(np.asarray(x, dtype=np.float64) ** 2))


class Sphere(TestFunction):
    NAME = "sphere"
    SENSE = Sense.MINIMIZE
    IN_CATALOGUE = False
    DESCRIPTION = "Sanity baseline; minimum 0 at the origin"

    def evaluate(self, x):
        return np.sum(x**2, axis=-1)

    def default_bounds(self) -> Bounds:
        return Bounds.cube(-10.0, 10.0, self.dimension)

    def known_optimum(self) -> KnownOptimum:
        return KnownOptimum(positions=((0.0,) * self.dimension,), value=0.0, kind=Sense.MINIMIZE)
