"""Seedable Firefly Algorithm with test functions, a constrained layer and an experiment harness."""

from .core import Bounds, KnownOptimum, Objective, RandomSource, Sense, clamp, distance, make_objective
from .engine import DistanceUnits, FaParams, RunResult, make_params, pso_limit_equivalence_mode, run, scales_from_bounds
from .errors import ConfigurationError, DimensionError, FireflyError, UnknownTargetError

__all__ = [
    "Bounds",
    "ConfigurationError",
    "DimensionError",
    "DistanceUnits",
    "FaParams",
    "FireflyError",
    "KnownOptimum",
    "Objective",
    "RandomSource",
    "RunResult",
    "Sense",
    "UnknownTargetError",
    "clamp",
    "distance",
    "make_objective",
    "make_params",
    "pso_limit_equivalence_mode",
    "run",
    "scales_from_bounds",
]
