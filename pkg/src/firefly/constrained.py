"""
Inequality-constrained minimisation through a static penalty, instantiated
with the pressure-vessel design benchmark.

Design variables are ordered (d1, d2, r, L): head thickness, body thickness,
inner radius and length of the cylindrical section. Thicknesses are treated
as continuous; ``snap_thickness`` rounds them up to multiples of 0.0625 for
comparison with the classical discrete formulation.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .core import Bounds, Objective, RealVector, Sense, as_vector
from .engine import FaParams, RunResult, run, scales_from_bounds
from .errors import ConfigurationError

logger = logging.getLogger(__name__)

THICKNESS_STEP = 0.0625
VESSEL_VOLUME = 1_296_000.0
# Magnitudes used to scale feasibility tolerances per constraint.
VESSEL_CONSTRAINT_SCALES: Tuple[float, ...] = (1.0, 1.0, VESSEL_VOLUME, 1.0)
VESSEL_BOUNDS = Bounds(
    np.array([THICKNESS_STEP, THICKNESS_STEP, 10.0, 10.0]),
    np.array([99 * THICKNESS_STEP, 99 * THICKNESS_STEP, 200.0, 200.0]),
)
DEFAULT_FEASIBILITY_TOL = 1e-3

# Reference designs: (d1, d2, r, L).
SWARM_REFERENCE_DESIGN = (0.8125, 0.4375, 42.0984, 176.6366)
FIREFLY_DESIGN = (0.7782, 0.3846, 40.3196, 200.0000)


@dataclass(frozen=True, eq=False)
class ConstrainedProblem:
    """Minimise ``objective`` subject to ``g_i(x) <= 0`` for every constraint, inside ``bounds``."""

    objective: Callable[[RealVector], float]
    constraints: Tuple[Callable[[RealVector], float], ...]
    bounds: Bounds
    name: str = "constrained"
    constraint_scales: Optional[Tuple[float, ...]] = None

    def __post_init__(self) -> None:
        if self.constraint_scales is not None and len(self.constraint_scales) != len(self.constraints):
            raise ConfigurationError("constraint_scales must have one entry per constraint")

    @property
    def dimension(self) -> int:
        return self.bounds.dimension

    def constraint_values(self, x: ArrayLike) -> RealVector:
        vector = as_vector(x, self.dimension)
        return np.array([g(vector) for g in self.constraints], dtype=np.float64)

    def scales(self) -> RealVector:
        if self.constraint_scales is None:
            return np.ones(len(self.constraints))
        return np.asarray(self.constraint_scales, dtype=np.float64)


class PenaltyParams(BaseModel):
    """Static penalty lambda * sum max(0, g_i)^p. lambda = 0 switches the penalty off."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    coefficient: float = Field(1e6, ge=0.0, allow_inf_nan=False)
    exponent: float = Field(2.0, ge=1.0, allow_inf_nan=False)


def make_penalty(**kwargs) -> PenaltyParams:
    try:
        return PenaltyParams(**kwargs)
    except ValidationError as exc:
        raise ConfigurationError(f"Invalid penalty parameters: {exc}") from exc


# ---------------------------------------------------------------------------
# Pressure vessel
# ---------------------------------------------------------------------------


def vessel_objective(x: ArrayLike) -> float:
    """Material, forming and welding cost of the vessel."""
    d1, d2, r, length = as_vector(x, 4)
    return float(
        0.6224 * d1 * r * length
        + 1.7781 * d2 * r**2
        + 3.1661 * d1**2 * length
        + 19.84 * d1**2 * r
    )


def _g1(x: RealVector) -> float:
    return float(-x[0] + 0.0193 * x[2])


def _g2(x: RealVector) -> float:
    return float(-x[1] + 0.00954 * x[2])


def _g3(x: RealVector) -> float:
    r, length = x[2], x[3]
    return float(-math.pi * r**2 * length - (4.0 * math.pi / 3.0) * r**3 + VESSEL_VOLUME)


def _g4(x: RealVector) -> float:
    return float(x[3] - 240.0)


VESSEL_CONSTRAINTS: Tuple[Callable[[RealVector], float], ...] = (_g1, _g2, _g3, _g4)


def vessel_constraints(x: ArrayLike) -> RealVector:
    """(g1, g2, g3, g4); the design is feasible when all are <= 0."""
    vector = as_vector(x, 4)
    return np.array([g(vector) for g in VESSEL_CONSTRAINTS], dtype=np.float64)


def vessel_problem() -> ConstrainedProblem:
    return ConstrainedProblem(
        objective=vessel_objective,
        constraints=VESSEL_CONSTRAINTS,
        bounds=VESSEL_BOUNDS,
        name="vessel",
        constraint_scales=VESSEL_CONSTRAINT_SCALES,
    )


# ---------------------------------------------------------------------------
# Penalty and feasibility
# ---------------------------------------------------------------------------


def penalized(problem: ConstrainedProblem, penalty: PenaltyParams) -> Objective:
    """f(x) + lambda * sum max(0, g_i(x))^p as a minimisation ``Objective``."""
    if penalty.coefficient == 0.0:
        logger.warning("Penalty coefficient is 0: constraints of %s are ignored", problem.name)

    def func(x: RealVector) -> float:
        value = float(problem.objective(x))
        violation = np.maximum(problem.constraint_values(x), 0.0)
        if not np.any(violation > 0.0):
            return value
        return value + penalty.coefficient * float(np.sum(violation**penalty.exponent))

    return Objective(
        func=func,
        bounds=problem.bounds,
        sense=Sense.MINIMIZE,
        name=f"{problem.name}[penalized]",
        metadata={"penalty": penalty.model_dump()},
    )


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    within_bounds: bool
    constraint_values: Tuple[float, ...]
    tolerances: Tuple[float, ...]
    # Largest violation relative to its constraint scale, and which g_i it is (0-based).
    max_violation: float
    worst_constraint: Optional[int]

    def __bool__(self) -> bool:
        return self.feasible

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "within_bounds": self.within_bounds,
            "constraint_values": list(self.constraint_values),
            "tolerances": list(self.tolerances),
            "max_violation": self.max_violation,
            "worst_constraint": self.worst_constraint,
        }


def is_feasible(problem: ConstrainedProblem, x: ArrayLike, tol: float = 0.0) -> FeasibilityReport:
    """
    Feasible when every g_i(x) <= tol * max(1, scale_i) and x lies in the
    bounds widened by *tol*.
    """
    if tol < 0 or math.isnan(tol):
        raise ConfigurationError(f"Feasibility tolerance must be non-negative, got {tol}")
    vector = as_vector(x, problem.dimension)
    values = problem.constraint_values(vector)
    scales = np.maximum(problem.scales(), 1.0)
    tolerances = tol * scales
    relative = np.maximum(values, 0.0) / scales
    worst = int(np.argmax(relative)) if np.any(relative > 0.0) else None
    within_bounds = problem.bounds.contains(vector, tol)
    feasible = bool(np.all(values <= tolerances)) and within_bounds
    return FeasibilityReport(
        feasible=feasible,
        within_bounds=within_bounds,
        constraint_values=tuple(float(v) for v in values),
        tolerances=tuple(float(t) for t in tolerances),
        max_violation=float(relative.max()) if relative.size else 0.0,
        worst_constraint=worst,
    )


def snap_thickness(x: ArrayLike, bounds: Bounds = VESSEL_BOUNDS) -> RealVector:
    """Round d1 and d2 up to the next multiple of 0.0625 (exact multiples are kept)."""
    vector = as_vector(x, 4).copy()
    steps = np.ceil(vector[:2] / THICKNESS_STEP - 1e-9)
    vector[:2] = steps * THICKNESS_STEP
    return np.clip(vector, bounds.lower, bounds.upper)


# ---------------------------------------------------------------------------
# Solving
# ---------------------------------------------------------------------------


class _FeasibleTracker:
    """Remembers the cheapest design seen that passes the feasibility check."""

    def __init__(self, problem: ConstrainedProblem, penalty_objective: Objective, tol: float) -> None:
        self._problem = problem
        self._penalized = penalty_objective.func
        self._tol = tol
        self.best_position: Optional[RealVector] = None
        self.best_cost: Optional[float] = None

    def __call__(self, x: RealVector) -> float:
        value = self._penalized(x)
        # Within tol a design may still carry a small penalty, so compare raw costs.
        if is_feasible(self._problem, x, self._tol).feasible:
            cost = float(self._problem.objective(x))
            if self.best_cost is None or cost < self.best_cost:
                self.best_cost = cost
                self.best_position = np.array(x, dtype=np.float64)
        return value


@dataclass
class VesselSolution:
    result: RunResult
    cost: float
    report: FeasibilityReport
    best_feasible_position: Optional[RealVector]
    best_feasible_cost: Optional[float]
    snapped_position: Optional[RealVector] = None
    snapped_cost: Optional[float] = None
    snapped_report: Optional[FeasibilityReport] = None

    def to_dict(self) -> dict:
        payload = {
            "best_position": self.result.best_position.tolist(),
            "best_penalized": self.result.best_value,
            "cost": self.cost,
            "evaluations": self.result.evaluations,
            "report": self.report.to_dict(),
            "best_feasible_position": None if self.best_feasible_position is None else self.best_feasible_position.tolist(),
            "best_feasible_cost": self.best_feasible_cost,
        }
        if self.snapped_position is not None:
            payload["snapped_position"] = self.snapped_position.tolist()
            payload["snapped_cost"] = self.snapped_cost
            payload["snapped_report"] = self.snapped_report.to_dict() if self.snapped_report else None
        return payload


def vessel_fa_params(**overrides) -> FaParams:
    """
    Defaults for the vessel: 40 fireflies, 20 generations, alpha scaled per
    dimension by the box width and decayed geometrically. Distances are in box
    units, so gamma = 1 treats thickness and radius/length moves alike.
    """
    settings = {
        "population": 40,
        "max_iterations": 20,
        "alpha": 0.2,
        "alpha_decay": 0.8,
        "gamma": 1.0,
        "scales": scales_from_bounds(VESSEL_BOUNDS),
    }
    settings.update(overrides)
    try:
        return FaParams(**settings)
    except ValidationError as exc:
        raise ConfigurationError(f"Invalid firefly parameters: {exc}") from exc


def solve_vessel(
    fa_params: FaParams,
    penalty: Optional[PenaltyParams] = None,
    tol: float = DEFAULT_FEASIBILITY_TOL,
    snap: bool = False,
) -> VesselSolution:
    """
    Minimise the penalised vessel cost with the FA engine.

    ``result`` ranks by penalised value; the report re-evaluates the raw cost
    and constraints at its best position. The cheapest feasible design seen at
    any evaluation is tracked alongside.
    """
    problem = vessel_problem()
    penalty = penalty or PenaltyParams()
    objective = penalized(problem, penalty)
    feasible_tracker = _FeasibleTracker(problem, objective, tol)
    params = fa_params.model_copy(update={"sense": Sense.MINIMIZE})
    result = run(Objective(func=feasible_tracker, bounds=objective.bounds, sense=Sense.MINIMIZE, name=objective.name), params)

    report = is_feasible(problem, result.best_position, tol)
    cost = vessel_objective(result.best_position)
    logger.info(
        "Vessel seed=%d: penalized=%.6f cost=%.6f feasible=%s best_feasible=%s",
        params.seed, result.best_value, cost, report.feasible, feasible_tracker.best_cost,
    )
    if feasible_tracker.best_cost is None:
        logger.warning("Vessel seed=%d: no design within feasibility tolerance %g was evaluated", params.seed, tol)
    solution = VesselSolution(
        result=result,
        cost=cost,
        report=report,
        best_feasible_position=feasible_tracker.best_position,
        best_feasible_cost=feasible_tracker.best_cost,
    )
    if snap:
        source = feasible_tracker.best_position if feasible_tracker.best_position is not None else result.best_position
        snapped = snap_thickness(source)
        solution.snapped_position = snapped
        solution.snapped_cost = vessel_objective(snapped)
        solution.snapped_report = is_feasible(problem, snapped, tol)
    return solution


def evaluate_design(x: Sequence[float], tol: float = DEFAULT_FEASIBILITY_TOL) -> Tuple[float, FeasibilityReport]:
    """Raw cost and feasibility report of a given design."""
    return vessel_objective(x), is_feasible(vessel_problem(), x, tol)
