"""
Four-peak function: (sum |x_i|) exp(-sum x_i^2), maximised over [-10, 10]^d.

For d = 2 there are four equal maxima 1/sqrt(e) at (+-1/2, +-1/2) and a
global minimum 0 at the origin.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from numpy.typing import ArrayLike

from ..core import Bounds, KnownOptimum, Sense
from .base import TestFunction


def four_peak(x: ArrayLike) -> float:
    return float(_four_peak(np.asarray(x, dtype=np.float64)))


def _four_peak(x: np.ndarray):
    return np.sum(np.abs(x), axis=-1) * np.exp(-np.sum(x**2, axis=-1))


class FourPeak(TestFunction):
    NAME = "four_peak"
    SENSE = Sense.MAXIMIZE
    DESCRIPTION = "Multiple equal global maxima; 4 peaks of height 1/sqrt(e) in 2-D"

    def evaluate(self, x):
        return _four_peak(x)

    def default_bounds(self) -> Bounds:
        return Bounds.cube(-10.0, 10.0, self.dimension)

    def known_optimum(self) -> KnownOptimum:
        # Maximisers sit at |x_i| = a with a = 1/sqrt(2d); d = 2 gives the four points (+-1/2, +-1/2).
        a = 1.0 / math.sqrt(2.0 * self.dimension)
        positions = tuple(
            tuple(sign * a for sign in signs)
            for signs in itertools.product((1.0, -1.0), repeat=self.dimension)
        )
        value = self.dimension * a * math.exp(-self.dimension * a * a)
        return KnownOptimum(positions=positions, value=value, kind=Sense.MAXIMIZE, multiplicity=len(positions))
