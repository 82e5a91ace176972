"""
Stochastic powers function: sum_i eps_i |x_i|^i over [-5, 5]^d.

The exponent is the 1-based coordinate index and eps_i ~ Unif[0, 1]. The
unique, singular minimum is 0 at the origin for every realization.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np
from numpy.typing import ArrayLike

from ..core import Bounds, KnownOptimum, Sense
from ..errors import ConfigurationError
from .base import Realization, TestFunction


def stochastic_powers(x: ArrayLike, realization: Realization):
    values = np.asarray(x, dtype=np.float64)
    d = values.shape[-1]
    if realization.shape != (d,):
        raise ConfigurationError(f"stochastic_powers needs {d} coefficients, got shape {realization.shape}")
    eps = realization.values()
    exponents = np.arange(1, d + 1, dtype=np.float64)
    result = np.sum(eps * np.abs(values) ** exponents, axis=-1)
    return float(result) if np.ndim(result) == 0 else result


class StochasticPowers(TestFunction):
    NAME = "stochastic_powers"
    SENSE = Sense.MINIMIZE
    STOCHASTIC = True
    DESCRIPTION = "Stochastic and non-smooth; minimum 0 at the origin"

    def evaluate(self, x):
        return stochastic_powers(x, self._require_realization())

    def default_bounds(self) -> Bounds:
        return Bounds.cube(-5.0, 5.0, self.dimension)

    def realization_shape(self) -> Tuple[int, ...]:
        return (self.dimension,)

    def known_optimum(self) -> KnownOptimum:
        return KnownOptimum(positions=((0.0,) * self.dimension,), value=0.0, kind=Sense.MINIMIZE)
