"""
Base class for the benchmark test functions.

Every function module (Ackley, four-peak, standing-wave, forest, the two
stochastic functions and the sphere baseline) subclasses ``TestFunction`` and
implements the hooks that differ per function:
  - ``evaluate``: vectorised evaluation over the last axis of ``x``
  - ``default_bounds``: the search box for a given dimension
  - ``known_optimum``: optimizer locations/value metadata, when known

Stochastic functions additionally carry a ``Realization`` of their random
coefficients.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, ClassVar, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core import Bounds, KnownOptimum, Objective, RandomSource, Sense, as_vector
from ..errors import ConfigurationError, DimensionError

logger = logging.getLogger(__name__)


class RealizationPolicy(str, Enum):
    FROZEN = "frozen"
    RESAMPLE = "resample"


@dataclass(frozen=True, eq=False)
class Realization:
    """
    Random coefficients of a stochastic test function.

    ``FROZEN`` always returns ``draws``; ``RESAMPLE`` draws a fresh Unif[0, 1]
    array of the same shape from ``rng`` on every call to ``values``.
    """

    draws: NDArray[np.float64]
    policy: RealizationPolicy = RealizationPolicy.FROZEN
    rng: Optional[RandomSource] = None

    def __post_init__(self) -> None:
        draws = np.array(self.draws, dtype=np.float64)
        draws.flags.writeable = False
        object.__setattr__(self, "draws", draws)
        if self.policy is RealizationPolicy.RESAMPLE and self.rng is None:
            raise ConfigurationError("A resampling realization needs a RandomSource")

    @classmethod
    def draw(
        cls,
        shape: Tuple[int, ...],
        rng: RandomSource,
        policy: RealizationPolicy = RealizationPolicy.FROZEN,
    ) -> "Realization":
        """Unif[0, 1] coefficients of *shape*; resampling keeps consuming *rng*."""
        draws = rng.uniform(shape)
        return cls(draws=draws, policy=policy, rng=rng if policy is RealizationPolicy.RESAMPLE else None)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(self.draws.shape)

    def values(self) -> NDArray[np.float64]:
        if self.policy is RealizationPolicy.RESAMPLE:
            assert self.rng is not None
            return self.rng.uniform(self.draws.shape)
        return self.draws


class TestFunction(ABC):
    """Base class for registry test functions."""

    __test__ = False  # not a pytest test class

    NAME: ClassVar[str] = ""
    SENSE: ClassVar[Sense] = Sense.MINIMIZE
    STOCHASTIC: ClassVar[bool] = False
    # Fixed dimension, or None when any d >= 1 is accepted.
    FIXED_DIMENSION: ClassVar[Optional[int]] = None
    # False for sanity baselines outside the benchmark catalogue.
    IN_CATALOGUE: ClassVar[bool] = True
    DESCRIPTION: ClassVar[str] = ""

    def __init__(self, dimension: int, realization: Optional[Realization] = None) -> None:
        if dimension < 1:
            raise ConfigurationError(f"{self.NAME}: dimension must be at least 1, got {dimension}")
        if self.FIXED_DIMENSION is not None and dimension != self.FIXED_DIMENSION:
            raise ConfigurationError(
                f"{self.NAME} is only defined for dimension {self.FIXED_DIMENSION}, got {dimension}"
            )
        self.dimension = dimension
        self.realization = realization
        if realization is not None:
            self.check_realization(realization)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dimension={self.dimension})"

    # ------------------------------------------------------------------
    # Hooks
    # ------------------------------------------------------------------
    @abstractmethod
    def evaluate(self, x: NDArray[np.float64]) -> Any:
        """Evaluate at points stacked along the leading axes of ``x[..., d]``."""
        ...

    @abstractmethod
    def default_bounds(self) -> Bounds:
        ...

    def known_optimum(self) -> Optional[KnownOptimum]:
        return None

    def realization_shape(self) -> Tuple[int, ...]:
        """Shape of the coefficient array a stochastic function consumes."""
        raise ConfigurationError(f"{self.NAME} is deterministic and takes no realization")

    # ------------------------------------------------------------------
    # Realizations
    # ------------------------------------------------------------------
    def check_realization(self, realization: Realization) -> None:
        expected = self.realization_shape()
        if realization.shape != expected:
            raise ConfigurationError(
                f"{self.NAME}: realization shape {realization.shape} does not match {expected}"
            )

    def realize(
        self,
        rng: RandomSource,
        policy: RealizationPolicy = RealizationPolicy.FROZEN,
    ) -> "TestFunction":
        """A copy bound to a realization drawn from *rng* (deterministic functions return self)."""
        if not self.STOCHASTIC:
            return self
        realization = Realization.draw(self.realization_shape(), rng, policy)
        logger.debug("Drew %s realization for %s from %r", policy.value, self.NAME, rng)
        return type(self)(self.dimension, realization)

    def _require_realization(self) -> Realization:
        if self.realization is None:
            raise ConfigurationError(f"{self.NAME} is stochastic; call realize() before evaluating")
        return self.realization

    # ------------------------------------------------------------------
    # Evaluation helpers
    # ------------------------------------------------------------------
    def __call__(self, x: ArrayLike) -> float:
        vector = as_vector(x, self.dimension)
        return float(self.evaluate(vector))

    def evaluate_many(self, points: ArrayLike) -> NDArray[np.float64]:
        """Vectorised evaluation of an ``(..., d)`` array of points."""
        array = np.asarray(points, dtype=np.float64)
        if array.shape[-1] != self.dimension:
            raise DimensionError(f"{self.NAME}: expected trailing dimension {self.dimension}, got {array.shape[-1]}")
        return np.asarray(self.evaluate(array), dtype=np.float64)

    def objective(self, bounds: Optional[Bounds] = None) -> Objective:
        """Wrap this function as an ``Objective`` over its (or the given) box."""
        if self.STOCHASTIC:
            self._require_realization()
        box = bounds or self.default_bounds()
        if box.dimension != self.dimension:
            raise DimensionError(f"{self.NAME}: bounds have dimension {box.dimension}, expected {self.dimension}")
        metadata: dict[str, Any] = {"stochastic": self.STOCHASTIC, "in_catalogue": self.IN_CATALOGUE}
        if self.realization is not None:
            metadata["realization_policy"] = self.realization.policy.value
        return Objective(
            func=self.__call__,
            bounds=box,
            sense=self.SENSE,
            name=self.NAME,
            known_optimum=self.known_optimum(),
            metadata=metadata,
        )
