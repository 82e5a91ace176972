"""
Numeric building blocks shared by every other module.

- ``RealVector``: a 1-D float64 numpy array of problem coordinates
- ``Bounds``: per-dimension box constraints
- ``RandomSource``: seedable random stream with order-independent children
- ``Objective``: evaluation contract handed to the optimizers
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ConfigurationError, DimensionError

logger = logging.getLogger(__name__)

RealVector = NDArray[np.float64]

_SEED_LIMIT = 2**64


class Sense(str, Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"

    def better(self, candidate: float, incumbent: float) -> bool:
        """Strict improvement test in this optimization direction."""
        if self is Sense.MAXIMIZE:
            return candidate > incumbent
        return candidate < incumbent


def as_vector(values: ArrayLike, dimension: Optional[int] = None) -> RealVector:
    """Coerce *values* to a 1-D float64 vector, optionally checking its length."""
    vector = np.asarray(values, dtype=np.float64)
    if vector.ndim == 0:
        vector = vector.reshape(1)
    if vector.ndim != 1 or vector.size == 0:
        raise DimensionError(f"Expected a non-empty 1-D vector, got shape {vector.shape}")
    if dimension is not None and vector.size != dimension:
        raise DimensionError(f"Expected dimension {dimension}, got {vector.size}")
    return vector


def distance(a: ArrayLike, b: ArrayLike, lengths: Optional[ArrayLike] = None) -> float:
    """
    Euclidean (l2) distance between two points of equal dimension.

    With *lengths*, each coordinate difference is first divided by its
    characteristic length, so r is measured in those units.
    """
    va = as_vector(a)
    vb = as_vector(b)
    if va.size != vb.size:
        raise DimensionError(f"Cannot measure distance between dimensions {va.size} and {vb.size}")
    if lengths is None:
        return float(np.linalg.norm(va - vb))
    units = as_vector(lengths, va.size)
    return float(np.linalg.norm((va - vb) / units))


@dataclass(frozen=True, eq=False)
class Bounds:
    lower: RealVector
    upper: RealVector

    def __post_init__(self) -> None:
        lower = as_vector(self.lower).copy()
        upper = as_vector(self.upper).copy()
        if lower.size != upper.size:
            raise DimensionError(
                f"Lower bound has {lower.size} components but upper bound has {upper.size}"
            )
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigurationError("Bounds must be finite")
        if np.any(lower >= upper):
            raise ConfigurationError("Every lower bound must be strictly below its upper bound")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def cube(cls, low: float, high: float, dimension: int) -> "Bounds":
        """The box [low, high]^dimension."""
        if dimension < 1:
            raise DimensionError(f"Dimension must be at least 1, got {dimension}")
        return cls(np.full(dimension, float(low)), np.full(dimension, float(high)))

    @property
    def dimension(self) -> int:
        return int(self.lower.size)

    @property
    def span(self) -> RealVector:
        return self.upper - self.lower

    def contains(self, x: ArrayLike, tol: float = 0.0) -> bool:
        vector = as_vector(x, self.dimension)
        return bool(np.all(vector >= self.lower - tol) and np.all(vector <= self.upper + tol))

    def sample(self, rng: "RandomSource", count: int) -> NDArray[np.float64]:
        """*count* points drawn uniformly from the box, shape ``(count, d)``."""
        return self.lower + rng.uniform((count, self.dimension)) * self.span

    def to_dict(self) -> dict[str, list[float]]:
        return {"lower": self.lower.tolist(), "upper": self.upper.tolist()}


def clamp(x: ArrayLike, bounds: Bounds) -> RealVector:
    """Project *x* component-wise onto the box."""
    vector = as_vector(x, bounds.dimension)
    return np.clip(vector, bounds.lower, bounds.upper)


class RandomSource:
    """
    Seedable pseudorandom stream built on ``numpy.random.Generator`` (PCG64).

    Children are keyed by the parent's seed and spawn key plus an integer index,
    so a replicate's stream never depends on the order replicates are created.
    Reproducibility is promised within one library/numpy version only.
    """

    def __init__(self, seed: int, spawn_key: Tuple[int, ...] = ()) -> None:
        if not 0 <= int(seed) < _SEED_LIMIT:
            raise ConfigurationError(f"Seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = int(seed)
        self.spawn_key = tuple(int(k) for k in spawn_key)
        self._sequence = np.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
        self._generator = np.random.Generator(np.random.PCG64(self._sequence))

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, spawn_key={self.spawn_key})"

    def uniform(self, size: Any = None) -> Any:
        """Draws from Unif[0, 1)."""
        return self._generator.random(size)

    def gaussian(self, size: Any = None) -> Any:
        """Standard normal draws (mean 0, variance 1)."""
        return self._generator.standard_normal(size)

    def child(self, index: int) -> "RandomSource":
        """Independent stream keyed by (seed, spawn key, index)."""
        if index < 0:
            raise ConfigurationError(f"Child index must be non-negative, got {index}")
        return RandomSource(self.seed, self.spawn_key + (int(index),))

    def derive_seed(self) -> int:
        """A 64-bit integer seed summarising this stream's key (not its position)."""
        return int(self._sequence.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class KnownOptimum:
    """Optimizer locations and value; ``value`` is None when it varies by realization."""

    positions: Tuple[Tuple[float, ...], ...]
    value: Optional[float]
    kind: Sense
    multiplicity: int = 1

    def nearest_distance(self, x: ArrayLike) -> float:
        return min(distance(x, position) for position in self.positions)


@dataclass(frozen=True, eq=False)
class Objective:
    """
    A black-box function over a box, plus the direction it is optimized in.

    ``func`` takes a ``RealVector`` of length ``bounds.dimension`` and returns a
    finite real number.
    """

    func: Callable[[RealVector], float]
    bounds: Bounds
    sense: Sense = Sense.MINIMIZE
    name: str = "objective"
    known_optimum: Optional[KnownOptimum] = None
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return self.bounds.dimension

    def __call__(self, x: ArrayLike) -> float:
        return float(self.func(as_vector(x, self.dimension)))


def make_objective(
    func: Callable[[RealVector], float],
    lower: Sequence[float],
    upper: Sequence[float],
    sense: Sense = Sense.MINIMIZE,
    name: str = "objective",
) -> Objective:
    """Convenience constructor for ad-hoc objectives."""
    return Objective(func=func, bounds=Bounds(as_vector(lower), as_vector(upper)), sense=sense, name=name)
