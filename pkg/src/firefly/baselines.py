"""Deterministic local-search baseline used for robustness comparisons."""
from __future__ import annotations

import logging

import numpy as np
from scipy.optimize import minimize

from .core import Objective, RandomSource, Sense, clamp
from .engine import EvaluationTracker, RunResult, TraceRecord
from .errors import ConfigurationError

logger = logging.getLogger(__name__)


def hill_climb(objective: Objective, rng: RandomSource, max_evaluations: int = 300) -> RunResult:
    """
    Nelder-Mead simplex search from one uniform start inside the bounds.

    Points are clamped to the box before evaluation. The budget counts
    objective calls, so it can be matched to an FA run's n x generations.
    """
    if max_evaluations < 1:
        raise ConfigurationError(f"max_evaluations must be at least 1, got {max_evaluations}")
    tracker = EvaluationTracker(objective.func, objective.sense)
    sign = -1.0 if objective.sense is Sense.MAXIMIZE else 1.0
    trace: list[TraceRecord] = []

    def loss(x: np.ndarray) -> float:
        if tracker.count >= max_evaluations:
            # scipy may overshoot maxfev by a few calls while finishing a step
            return np.inf
        value = tracker(clamp(x, objective.bounds))
        trace.append(TraceRecord(tracker.count, float(tracker.best_value), value, 0.0))
        return sign * value

    start = objective.bounds.sample(rng, 1)[0]
    minimize(
        loss,
        start,
        method="Nelder-Mead",
        options={"maxfev": max_evaluations, "xatol": 1e-10, "fatol": 1e-12},
    )
    assert tracker.best_position is not None and tracker.best_value is not None
    logger.info("Hill climb on %s: best=%.10g after %d evaluations", objective.name, tracker.best_value, tracker.count)
    return RunResult(
        best_position=tracker.best_position,
        best_value=tracker.best_value,
        evaluations=tracker.count,
        trace=trace,
        generation_evaluations=tracker.count,
        initial_positions=start.reshape(1, -1),
        final_positions=tracker.best_position.reshape(1, -1),
        final_values=[tracker.best_value],
    )
