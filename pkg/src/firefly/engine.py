"""
Firefly Algorithm engine.

Each firefly's brightness is its objective value mapped so that brighter is
always better. In one generation every firefly i is compared with fireflies
j = 1..i; whenever j is strictly brighter, i moves towards it:

    x_i <- (1 - beta) x_i + beta x_j + alpha * S * eps,   beta = beta0 exp(-gamma r^m)

Positions are clamped to the bounds and re-evaluated immediately, so later
comparisons in the same sweep see the updated population. Fireflies that made
no move and have nobody brighter perform a random walk after the sweep.

By default r is measured in box units: every coordinate difference is divided
by the width of the search box along that axis, so gamma = O(1) means the same
thing on a unit square and on a 40-wide domain. ``DistanceUnits.ABSOLUTE``
uses raw coordinates instead.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .core import Bounds, Objective, RandomSource, RealVector, Sense, as_vector, clamp, distance
from .errors import ConfigurationError, DimensionError

logger = logging.getLogger(__name__)


class NoiseKind(str, Enum):
    GAUSSIAN = "gaussian"
    # Unif[-0.5, 0.5], the randomisation of the classic reference implementation.
    UNIFORM = "uniform"


class DistanceUnits(str, Enum):
    BOX = "box"
    ABSOLUTE = "absolute"


class FaParams(BaseModel):
    """All algorithm knobs. ``sense=None`` defers to the objective's sense."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: float = Field(0.2, ge=0.0, allow_inf_nan=False)
    beta0: float = Field(1.0, gt=0.0, allow_inf_nan=False)
    gamma: float = Field(1.0, ge=0.0, allow_inf_nan=False)
    distance_exponent: float = Field(2.0, gt=0.0, allow_inf_nan=False)
    population: int = Field(25, ge=2)
    # 0 is accepted and means "evaluate the initial population only".
    max_iterations: int = Field(20, ge=0)
    scales: Optional[Tuple[float, ...]] = None
    sense: Optional[Sense] = None
    seed: int = Field(0, ge=0, lt=2**64)
    alpha_decay: float = Field(1.0, gt=0.0, le=1.0)
    noise: NoiseKind = NoiseKind.GAUSSIAN
    global_best_only: bool = False
    distance_units: DistanceUnits = DistanceUnits.BOX

    @field_validator("scales")
    @classmethod
    def _positive_scales(cls, value: Optional[Tuple[float, ...]]) -> Optional[Tuple[float, ...]]:
        if value is None:
            return value
        if len(value) == 0:
            raise ValueError("scales must not be empty")
        if not all(math.isfinite(s) and s > 0 for s in value):
            raise ValueError("every scale S_k must be finite and > 0")
        return value

    def alpha_at(self, iteration_index: int) -> float:
        """Effective alpha for generation *iteration_index* (0-based)."""
        return self.alpha * self.alpha_decay**iteration_index

    def scale_vector(self, dimension: int) -> RealVector:
        if self.scales is None:
            return np.ones(dimension)
        if len(self.scales) != dimension:
            raise DimensionError(f"scales has {len(self.scales)} entries but the problem has dimension {dimension}")
        return np.asarray(self.scales, dtype=np.float64)

    def distance_lengths(self, bounds: Bounds) -> Optional[RealVector]:
        """Per-axis units for r, or None for raw coordinates."""
        if self.distance_units is DistanceUnits.ABSOLUTE:
            return None
        return bounds.span


def make_params(**kwargs) -> FaParams:
    """Build ``FaParams``, reporting validation failures as ``ConfigurationError``."""
    try:
        return FaParams(**kwargs)
    except ValidationError as exc:
        raise ConfigurationError(f"Invalid firefly parameters: {exc}") from exc


def scales_from_bounds(bounds: Bounds) -> Tuple[float, ...]:
    """S_k = upper_k - lower_k, for problems whose dimensions have different ranges."""
    return tuple(float(s) for s in bounds.span)


def pso_limit_equivalence_mode(params: FaParams) -> FaParams:
    """
    Degenerate variant where every firefly moves towards the current global
    best only (no pairwise loop, no velocity memory). Used for gamma -> 0 limit
    checks; this is not a full PSO.
    """
    return params.model_copy(update={"global_best_only": True})


@dataclass
class FireflyState:
    position: RealVector
    # Brightness at ``position``; for stochastic objectives, of the latest evaluation.
    intensity: float
    value: float


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    best_so_far: float
    current_best: float
    alpha_used: float


@dataclass
class RunResult:
    best_position: RealVector
    best_value: float
    evaluations: int
    trace: List[TraceRecord]
    # population x generations, the coarser accounting used when quoting budgets
    generation_evaluations: int = 0
    initial_positions: NDArray[np.float64] = field(default_factory=lambda: np.empty((0, 0)))
    final_positions: NDArray[np.float64] = field(default_factory=lambda: np.empty((0, 0)))
    final_values: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "best_position": self.best_position.tolist(),
            "best_value": self.best_value,
            "evaluations": self.evaluations,
            "generation_evaluations": self.generation_evaluations,
            "trace": [record.__dict__ for record in self.trace],
            "initial_positions": self.initial_positions.tolist(),
            "final_positions": self.final_positions.tolist(),
            "final_values": list(self.final_values),
        }


class EvaluationTracker:
    """
    Counting wrapper around an objective function that remembers the best
    (position, value) ever returned, in the given sense.
    """

    def __init__(self, func: Callable[[RealVector], float], sense: Sense) -> None:
        self._func = func
        self.sense = sense
        self.count = 0
        self.best_position: Optional[RealVector] = None
        self.best_value: Optional[float] = None

    def __call__(self, x: RealVector) -> float:
        value = float(self._func(x))
        self.count += 1
        if self.best_value is None or self.sense.better(value, self.best_value):
            self.best_value = value
            self.best_position = np.array(x, dtype=np.float64)
        return value


# ---------------------------------------------------------------------------
# Primitive operations
# ---------------------------------------------------------------------------


def brightness(value: float, sense: Sense) -> float:
    """Objective value mapped so that larger always means better."""
    return value if sense is Sense.MAXIMIZE else -value


def attractiveness(r: float, params: FaParams) -> float:
    """beta0 * exp(-gamma * r**m); equals beta0 at r = 0 and everywhere when gamma = 0."""
    if r < 0:
        raise ValueError(f"distance must be non-negative, got {r}")
    if params.gamma == 0.0:
        return params.beta0
    try:
        decay = params.gamma * r**params.distance_exponent
    except OverflowError:
        return 0.0
    return params.beta0 * math.exp(-decay)


def _noise(rng: RandomSource, dimension: int, params: FaParams) -> RealVector:
    if params.noise is NoiseKind.UNIFORM:
        return rng.uniform(dimension) - 0.5
    return rng.gaussian(dimension)


def move_towards(
    xi: ArrayLike,
    xj: ArrayLike,
    params: FaParams,
    rng: RandomSource,
    alpha: Optional[float] = None,
    lengths: Optional[ArrayLike] = None,
) -> RealVector:
    """
    Move *xi* towards the brighter *xj*. The result is not clamped.

    *alpha* overrides ``params.alpha`` (the per-generation decayed value).
    *lengths* are the per-axis units r is measured in; raw coordinates when
    omitted.
    """
    a = as_vector(xi)
    b = as_vector(xj)
    if a.size != b.size:
        raise DimensionError(f"Cannot move a {a.size}-d firefly towards a {b.size}-d one")
    step = params.alpha if alpha is None else alpha
    beta = attractiveness(distance(a, b, lengths), params)
    eps = _noise(rng, a.size, params)
    # Weighted form so beta = 1 lands exactly on xj and beta = 0 stays exactly at xi.
    return (1.0 - beta) * a + beta * b + step * params.scale_vector(a.size) * eps


def random_walk(
    xi: ArrayLike,
    params: FaParams,
    rng: RandomSource,
    alpha: Optional[float] = None,
) -> RealVector:
    """xi + alpha * S * eps. The result is not clamped."""
    a = as_vector(xi)
    step = params.alpha if alpha is None else alpha
    eps = _noise(rng, a.size, params)
    return a + step * params.scale_vector(a.size) * eps


# ---------------------------------------------------------------------------
# Generation loop
# ---------------------------------------------------------------------------


def _resolve_sense(objective: Objective, params: FaParams) -> Sense:
    if params.sense is not None and params.sense is not objective.sense:
        raise ConfigurationError(
            f"params.sense={params.sense.value} conflicts with objective '{objective.name}' "
            f"({objective.sense.value})"
        )
    return params.sense or objective.sense


def rank(population: Sequence[FireflyState]) -> List[FireflyState]:
    """Brightest first; the stable sort keeps lower indices first among ties."""
    return sorted(population, key=lambda state: -state.intensity)


def _relocate(state: FireflyState, position: RealVector, objective: Objective, sense: Sense) -> None:
    state.position = clamp(position, objective.bounds)
    state.value = float(objective.func(state.position))
    state.intensity = brightness(state.value, sense)


def step(
    population: Sequence[FireflyState],
    objective: Objective,
    params: FaParams,
    rng: RandomSource,
    iteration_index: int,
) -> List[FireflyState]:
    """
    Run one generation and return the population ranked brightest first.

    The sweep is sequential and in place: i = 1..n, j = 1..i, move on strict
    ``I_j > I_i``. Positions are clamped and re-evaluated after every move.
    """
    if len(population) < 2:
        raise ConfigurationError(f"Population must hold at least 2 fireflies, got {len(population)}")
    sense = _resolve_sense(objective, params)
    alpha_t = params.alpha_at(iteration_index)
    lengths = params.distance_lengths(objective.bounds)
    states = [FireflyState(s.position.copy(), s.intensity, s.value) for s in population]
    moved = [False] * len(states)

    def attract(state: FireflyState, target: FireflyState) -> None:
        _relocate(state, move_towards(state.position, target.position, params, rng, alpha_t, lengths), objective, sense)

    if params.global_best_only:
        leader = max(range(len(states)), key=lambda k: (states[k].intensity, -k))
        for i, state in enumerate(states):
            if states[leader].intensity > state.intensity:
                attract(state, states[leader])
                moved[i] = True
                if state.intensity > states[leader].intensity:
                    leader = i
    else:
        for i, state in enumerate(states):
            for j in range(i + 1):
                if states[j].intensity > state.intensity:
                    attract(state, states[j])
                    moved[i] = True

    # Fireflies with no brighter neighbour take a pure random step.
    brightest = max(s.intensity for s in states)
    for i, state in enumerate(states):
        if not moved[i] and state.intensity >= brightest:
            _relocate(state, random_walk(state.position, params, rng, alpha_t), objective, sense)

    return rank(states)


def initial_population(
    objective: Objective,
    params: FaParams,
    rng: RandomSource,
    positions: Optional[ArrayLike] = None,
) -> NDArray[np.float64]:
    """Uniform draws over the bounds box unless explicit *positions* are supplied."""
    if positions is None:
        return objective.bounds.sample(rng, params.population)
    array = np.array(positions, dtype=np.float64)
    if array.shape != (params.population, objective.dimension):
        raise DimensionError(
            f"initial positions must have shape {(params.population, objective.dimension)}, got {array.shape}"
        )
    return np.clip(array, objective.bounds.lower, objective.bounds.upper)


def run(
    objective: Objective,
    params: FaParams,
    initial_positions: Optional[ArrayLike] = None,
) -> RunResult:
    """
    Optimise *objective* with the seeded Firefly Algorithm.

    The best (position, value) over every evaluation ever made is tracked
    separately from the moving population, so ``best_so_far`` in the trace is
    monotone. The trace starts with an ``iteration=0`` record for the initial
    population (``alpha_used`` is 0 there).
    """
    sense = _resolve_sense(objective, params)
    params.scale_vector(objective.dimension)
    rng = RandomSource(params.seed)
    tracker = EvaluationTracker(objective.func, sense)
    tracked = replace(objective, func=tracker)

    logger.info(
        "FA run on %s: d=%d n=%d iterations=%d seed=%d distance=%s",
        objective.name, objective.dimension, params.population, params.max_iterations, params.seed,
        params.distance_units.value,
    )
    start = initial_population(objective, params, rng, initial_positions)
    population: List[FireflyState] = []
    for position in start:
        value = tracker(position)
        population.append(FireflyState(position.copy(), brightness(value, sense), value))
    population = rank(population)

    trace = [TraceRecord(0, float(tracker.best_value), population[0].value, 0.0)]
    for t in range(params.max_iterations):
        population = step(population, tracked, params, rng, t)
        trace.append(TraceRecord(t + 1, float(tracker.best_value), population[0].value, params.alpha_at(t)))
        logger.debug("iteration %d: best_so_far=%.10g current=%.10g", t + 1, tracker.best_value, population[0].value)

    assert tracker.best_position is not None and tracker.best_value is not None
    logger.info("FA run on %s finished: best=%.10g after %d evaluations", objective.name, tracker.best_value, tracker.count)
    return RunResult(
        best_position=tracker.best_position,
        best_value=tracker.best_value,
        evaluations=tracker.count,
        trace=trace,
        generation_evaluations=params.population * params.max_iterations,
        initial_positions=np.array(start),
        final_positions=np.array([state.position for state in population]),
        final_values=[state.value for state in population],
    )
