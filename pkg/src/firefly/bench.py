"""
Experiment harness: seeded replicates, success predicates, aggregates,
multimodal capture counts, landscape grids and the declarative suites.

A replicate is fully determined by ``(config, index)``: its seed is the
``index``-th child of ``base_seed``, so serial, process-pool and Celery
execution all produce the same rows. Rows are sorted by index before
aggregation.
"""
from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from . import settings
from .baselines import hill_climb
from .constrained import DEFAULT_FEASIBILITY_TOL, VESSEL_BOUNDS, PenaltyParams, solve_vessel
from .core import Bounds, KnownOptimum, RandomSource, Sense
from .engine import FaParams, RunResult, run, scales_from_bounds
from .errors import ConfigurationError, FireflyError, UnknownTargetError
from .functions import VALID_FUNCTIONS, RealizationPolicy, TestFunction, get_function

logger = logging.getLogger(__name__)

VESSEL_TARGET = "vessel"
# Child index of a replicate's RandomSource that feeds stochastic coefficients.
REALIZATION_STREAM = 1
# Child index for the hill-climb start point.
BASELINE_STREAM = 2
# Default success radius when only the optimizer location is known.
DEFAULT_POSITION_TOL = 0.3
# Points per axis above which a landscape grid is logged as oversized.
LARGE_LANDSCAPE = 2001


class ExperimentConfig(BaseModel):
    """One experiment: a target, algorithm settings and the replicate plan."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = "experiment"
    target: str
    dimension: int = Field(2, ge=1)
    params: FaParams = Field(default_factory=FaParams)
    replicates: int = Field(1, ge=1)
    base_seed: int = Field(0, ge=0, lt=2**64)
    algorithm: Literal["firefly", "hill_climb"] = "firefly"
    # Success: best at least as good as ``threshold`` and/or within ``position_tol`` of a known optimizer.
    threshold: Optional[float] = None
    position_tol: Optional[float] = Field(None, gt=0.0)
    realization: RealizationPolicy = RealizationPolicy.FROZEN
    output_format: Literal["json", "csv"] = "json"
    scale_by_range: bool = False
    penalty: PenaltyParams = Field(default_factory=PenaltyParams)
    feasibility_tol: float = Field(DEFAULT_FEASIBILITY_TOL, ge=0.0)
    snap_thickness: bool = False
    capture_peaks: Optional[Tuple[Tuple[float, ...], ...]] = None
    capture_radius: Optional[float] = Field(None, gt=0.0)

    @field_validator("target")
    @classmethod
    def _normalise_target(cls, value: str) -> str:
        return value.lower().strip()

    @field_validator("capture_peaks")
    @classmethod
    def _non_empty_peaks(cls, value):
        if value is not None and len(value) == 0:
            raise ValueError("capture_peaks must list at least one position")
        return value


def make_config(**kwargs) -> ExperimentConfig:
    try:
        return ExperimentConfig(**kwargs)
    except ValidationError as exc:
        raise ConfigurationError(f"Invalid experiment configuration: {exc}") from exc


@dataclass
class ReplicateRow:
    index: int
    seed: int
    best_value: float
    best_position: List[float]
    evaluations: int
    success: bool
    generation_evaluations: int = 0
    # Target-specific columns (feasibility, peak counts); keys are emitted sorted.
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "seed": self.seed,
            "best_value": self.best_value,
            "best_position": list(self.best_position),
            "evaluations": self.evaluations,
            "generation_evaluations": self.generation_evaluations,
            "success": self.success,
            "extra": {key: self.extra[key] for key in sorted(self.extra)},
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "ReplicateRow":
        return cls(
            index=int(payload["index"]),
            seed=int(payload["seed"]),
            best_value=float(payload["best_value"]),
            best_position=[float(v) for v in payload["best_position"]],
            evaluations=int(payload["evaluations"]),
            success=bool(payload["success"]),
            generation_evaluations=int(payload.get("generation_evaluations", 0)),
            extra=dict(payload.get("extra", {})),
        )


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    sense: Sense
    rows: List[ReplicateRow]
    aggregates: Dict[str, Any]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config.model_dump(mode="json"),
            "sense": self.sense.value,
            "rows": [row.to_dict() for row in self.rows],
            "aggregates": self.aggregates,
        }

    @property
    def success_rate(self) -> float:
        return float(self.aggregates["success_rate"])


# ---------------------------------------------------------------------------
# Targets
# ---------------------------------------------------------------------------


def replicate_seed(base_seed: int, index: int) -> int:
    return RandomSource(base_seed).child(index).derive_seed()


def target_function(config: ExperimentConfig) -> TestFunction:
    if config.target == VESSEL_TARGET:
        raise ConfigurationError("The vessel target is not a registry test function")
    return get_function(config.target, config.dimension)


def target_sense(config: ExperimentConfig) -> Sense:
    if config.target == VESSEL_TARGET:
        return Sense.MINIMIZE
    return target_function(config).SENSE


def success_criteria(config: ExperimentConfig, known: Optional[KnownOptimum]) -> Tuple[Optional[float], Optional[float]]:
    """
    ``(threshold, position_tol)`` in force for *config*.

    Without explicit settings, a known optimum value gives a threshold within
    1% of it, and a known location without a value gives ``DEFAULT_POSITION_TOL``.
    """
    if config.threshold is not None or config.position_tol is not None:
        if config.position_tol is not None and (known is None or not known.positions):
            raise ConfigurationError(f"{config.target} has no known optimizer to measure position_tol against")
        return config.threshold, config.position_tol
    if known is None:
        return None, None
    if known.value is not None:
        slack = 0.01 * max(1.0, abs(known.value))
        threshold = known.value - slack if known.kind is Sense.MAXIMIZE else known.value + slack
        return threshold, None
    return None, DEFAULT_POSITION_TOL


def _meets_threshold(value: float, threshold: Optional[float], sense: Sense) -> bool:
    if threshold is None:
        return True
    return value >= threshold if sense is Sense.MAXIMIZE else value <= threshold


def _peak_counts(final_positions: np.ndarray, peaks: Sequence[Sequence[float]], radius: float) -> List[int]:
    centres = np.asarray(peaks, dtype=np.float64)
    gaps = np.linalg.norm(final_positions[:, None, :] - centres[None, :, :], axis=-1)
    return [int(count) for count in np.sum(gaps <= radius, axis=0)]


# ---------------------------------------------------------------------------
# Replicates
# ---------------------------------------------------------------------------


def _replicate_params(config: ExperimentConfig, seed: int, bounds: Bounds) -> FaParams:
    update: Dict[str, Any] = {"seed": seed}
    if config.scale_by_range:
        update["scales"] = scales_from_bounds(bounds)
    return config.params.model_copy(update=update)


def _vessel_replicate(config: ExperimentConfig, index: int, seed: int) -> Tuple[ReplicateRow, RunResult]:
    params = _replicate_params(config, seed, VESSEL_BOUNDS).model_copy(update={"sense": None})
    solution = solve_vessel(params, config.penalty, tol=config.feasibility_tol, snap=config.snap_thickness)
    feasible = solution.best_feasible_cost is not None
    if feasible:
        value = float(solution.best_feasible_cost)
        position = solution.best_feasible_position
    else:
        value, position = solution.cost, solution.result.best_position
    extra: Dict[str, Any] = {
        "feasible": feasible,
        "best_penalized": solution.result.best_value,
        "max_violation": solution.report.max_violation,
    }
    if solution.snapped_position is not None:
        extra["snapped_cost"] = solution.snapped_cost
        extra["snapped_feasible"] = bool(solution.snapped_report)
    row = ReplicateRow(
        index=index,
        seed=seed,
        best_value=value,
        best_position=[float(v) for v in position],
        evaluations=solution.result.evaluations,
        success=feasible and _meets_threshold(value, config.threshold, Sense.MINIMIZE),
        generation_evaluations=solution.result.generation_evaluations,
        extra=extra,
    )
    return row, solution.result


def run_replicate(config: ExperimentConfig, index: int) -> Tuple[ReplicateRow, RunResult]:
    """Replicate *index* of *config*, with the full ``RunResult`` for trace export."""
    seed = replicate_seed(config.base_seed, index)
    if config.target == VESSEL_TARGET:
        return _vessel_replicate(config, index, seed)

    function = target_function(config)
    source = RandomSource(seed)
    if function.STOCHASTIC:
        function = function.realize(source.child(REALIZATION_STREAM), config.realization)
    objective = function.objective()
    known = objective.known_optimum
    threshold, position_tol = success_criteria(config, known)

    if config.algorithm == "hill_climb":
        budget = max(1, config.params.population * config.params.max_iterations)
        result = hill_climb(objective, source.child(BASELINE_STREAM), max_evaluations=budget)
    else:
        result = run(objective, _replicate_params(config, seed, objective.bounds))

    success = _meets_threshold(result.best_value, threshold, objective.sense)
    if position_tol is not None:
        assert known is not None
        success = success and known.nearest_distance(result.best_position) <= position_tol
    extra: Dict[str, Any] = {}
    if config.capture_peaks is not None:
        radius = config.capture_radius if config.capture_radius is not None else DEFAULT_POSITION_TOL
        counts = _peak_counts(result.final_positions, config.capture_peaks, radius)
        extra["peak_counts"] = counts
        extra["all_peaks_occupied"] = all(count > 0 for count in counts)
    row = ReplicateRow(
        index=index,
        seed=seed,
        best_value=result.best_value,
        best_position=result.best_position.tolist(),
        evaluations=result.evaluations,
        success=bool(success),
        generation_evaluations=result.generation_evaluations,
        extra=extra,
    )
    return row, result


def replicate_row(config: ExperimentConfig, index: int) -> ReplicateRow:
    return run_replicate(config, index)[0]


def _celery_rows(config: ExperimentConfig, indices: Sequence[int]) -> List[ReplicateRow]:
    from celery_worker import run_replicate_task

    payload = config.model_dump(mode="json")
    pending = [run_replicate_task.delay(payload, index) for index in indices]
    rows = []
    for index, async_result in zip(indices, pending):
        reply = async_result.get(timeout=settings.CELERY_RESULT_TIMEOUT)
        if not reply.get("success"):
            raise FireflyError(f"Replicate {index} of {config.name} failed on a worker: {reply.get('error')}")
        rows.append(ReplicateRow.from_dict(reply["row"]))
    return rows


def _execute(config: ExperimentConfig, workers: int, executor: str) -> List[ReplicateRow]:
    indices = list(range(config.replicates))
    if executor == "celery":
        logger.info("Dispatching %d replicates of %s to Celery", len(indices), config.name)
        return _celery_rows(config, indices)
    if executor != "local":
        raise ConfigurationError(f"Unknown executor '{executor}'. Valid options: local, celery")
    if workers > 1 and len(indices) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(replicate_row, [config] * len(indices), indices))
    return [replicate_row(config, index) for index in indices]


def aggregate(rows: Sequence[ReplicateRow], sense: Sense) -> Dict[str, Any]:
    """Summary statistics recomputable from *rows* alone."""
    if not rows:
        raise ConfigurationError("Cannot aggregate an empty set of replicates")
    values = np.array([row.best_value for row in rows], dtype=np.float64)
    best = values.max() if sense is Sense.MAXIMIZE else values.min()
    worst = values.min() if sense is Sense.MAXIMIZE else values.max()
    successes = sum(1 for row in rows if row.success)
    summary: Dict[str, Any] = {
        "replicates": len(rows),
        "successes": successes,
        "success_rate": successes / len(rows),
        "best_value": float(best),
        "median_value": float(np.median(values)),
        "worst_value": float(worst),
        "mean_evaluations": float(np.mean([row.evaluations for row in rows])),
    }
    if all("all_peaks_occupied" in row.extra for row in rows):
        summary["all_peaks_fraction"] = sum(1 for row in rows if row.extra["all_peaks_occupied"]) / len(rows)
    if all("feasible" in row.extra for row in rows):
        summary["feasible_rate"] = sum(1 for row in rows if row.extra["feasible"]) / len(rows)
    return summary


def run_experiment(
    config: ExperimentConfig,
    workers: Optional[int] = None,
    executor: Optional[str] = None,
) -> ExperimentReport:
    """
    Run ``config.replicates`` independent seeded replicates and aggregate them.

    The report is identical for any worker count or executor.
    """
    if config.target != VESSEL_TARGET and config.target not in VALID_FUNCTIONS:
        raise UnknownTargetError(
            f"Unknown target '{config.target}'. Valid options: {', '.join(VALID_FUNCTIONS + [VESSEL_TARGET])}"
        )
    sense = target_sense(config)
    rows = _execute(config, settings.FIREFLY_WORKERS if workers is None else workers, executor or settings.FIREFLY_EXECUTOR)
    rows.sort(key=lambda row: row.index)
    summary = aggregate(rows, sense)
    logger.info(
        "Experiment %s: %d/%d successes, best=%.10g median=%.10g",
        config.name, summary["successes"], summary["replicates"], summary["best_value"], summary["median_value"],
    )
    return ExperimentReport(config=config, sense=sense, rows=rows, aggregates=summary)


# ---------------------------------------------------------------------------
# Multimodal capture
# ---------------------------------------------------------------------------


@dataclass
class CaptureReport:
    peaks: List[List[float]]
    radius: float
    # Runs in which each peak held at least one final firefly.
    hits_per_peak: List[int]
    all_occupied_fraction: float
    report: ExperimentReport


def multimodal_capture(
    config: ExperimentConfig,
    peaks: Sequence[Sequence[float]],
    radius: float,
    workers: Optional[int] = None,
    executor: Optional[str] = None,
) -> CaptureReport:
    """How often the final population occupies every one of *peaks* simultaneously."""
    if len(peaks) == 0:
        raise ConfigurationError("At least one peak is required")
    if not radius > 0:
        raise ConfigurationError(f"Capture radius must be positive, got {radius}")
    if any(len(peak) != config.dimension for peak in peaks):
        raise ConfigurationError(f"Every peak must have dimension {config.dimension}")
    centres = np.asarray(peaks, dtype=np.float64)
    gaps = np.linalg.norm(centres[:, None, :] - centres[None, :, :], axis=-1)
    if np.any(gaps[np.triu_indices(len(peaks), k=1)] < 2.0 * radius):
        logger.warning("Capture discs of radius %g overlap; one firefly can occupy several peaks", radius)
    capture_config = config.model_copy(
        update={"capture_peaks": tuple(tuple(float(v) for v in peak) for peak in peaks), "capture_radius": float(radius)}
    )
    report = run_experiment(capture_config, workers=workers, executor=executor)
    hits = [0] * len(peaks)
    for row in report.rows:
        for k, count in enumerate(row.extra["peak_counts"]):
            hits[k] += int(count > 0)
    return CaptureReport(
        peaks=[list(map(float, peak)) for peak in peaks],
        radius=float(radius),
        hits_per_peak=hits,
        all_occupied_fraction=float(report.aggregates["all_peaks_fraction"]),
        report=report,
    )


# ---------------------------------------------------------------------------
# Landscapes
# ---------------------------------------------------------------------------


@dataclass
class Landscape:
    target: str
    seed: int
    axes: Tuple[int, int]
    xs: np.ndarray
    ys: np.ndarray
    # values[i, j] = f at (xs[i], ys[j])
    values: np.ndarray

    def rows(self) -> List[Tuple[float, float, float]]:
        """(x, y, f) triples, x-major."""
        return [
            (float(x), float(y), float(self.values[i, j]))
            for i, x in enumerate(self.xs)
            for j, y in enumerate(self.ys)
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target": self.target,
            "seed": self.seed,
            "axes": list(self.axes),
            "resolution": int(self.xs.size),
            "rows": [list(row) for row in self.rows()],
        }


def landscape_grid(
    target: str,
    resolution: int,
    seed: int = 0,
    dimension: int = 2,
    lower: Optional[Tuple[float, float]] = None,
    upper: Optional[Tuple[float, float]] = None,
    axes: Tuple[int, int] = (0, 1),
    base_point: Optional[Sequence[float]] = None,
) -> Landscape:
    """
    Evaluate *target* on a resolution x resolution grid over two coordinates.

    For d > 2 the remaining coordinates are held at *base_point* (default: the
    centre of the box). Stochastic targets use one frozen realization drawn
    from ``seed``.
    """
    if resolution < 2:
        raise ConfigurationError(f"Landscape resolution must be at least 2 per axis, got {resolution}")
    function = get_function(target, dimension)
    if function.STOCHASTIC:
        function = function.realize(RandomSource(seed), RealizationPolicy.FROZEN)
    if dimension < 2:
        raise ConfigurationError("A landscape needs at least two dimensions")
    ax, ay = axes
    if ax == ay or not (0 <= ax < dimension and 0 <= ay < dimension):
        raise ConfigurationError(f"Invalid slice axes {axes} for dimension {dimension}")
    bounds = function.default_bounds()
    lo = lower if lower is not None else (bounds.lower[ax], bounds.lower[ay])
    hi = upper if upper is not None else (bounds.upper[ax], bounds.upper[ay])
    if not (lo[0] < hi[0] and lo[1] < hi[1]):
        raise ConfigurationError("Landscape lower corner must be below the upper corner")

    xs = np.linspace(lo[0], hi[0], resolution)
    ys = np.linspace(lo[1], hi[1], resolution)
    centre = (bounds.lower + bounds.upper) / 2.0 if base_point is None else np.asarray(base_point, dtype=np.float64)
    if centre.size != dimension:
        raise ConfigurationError(f"base_point must have {dimension} coordinates")
    grid = np.broadcast_to(centre, (resolution, resolution, dimension)).copy()
    grid[:, :, ax] = xs[:, None]
    grid[:, :, ay] = ys[None, :]
    if resolution > LARGE_LANDSCAPE:
        logger.warning("Landscape %s at resolution %d evaluates %d points", function.NAME, resolution, resolution**2)
    values = function.evaluate_many(grid)
    logger.info("Landscape %s: %dx%d grid, seed=%d", function.NAME, resolution, resolution, seed)
    return Landscape(target=function.NAME, seed=seed, axes=(ax, ay), xs=xs, ys=ys, values=values)


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


class SuiteDefinition(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    description: str = ""
    experiments: List[ExperimentConfig]


def load_suite(name: str = "paper", config_dir: Optional[Path] = None) -> SuiteDefinition:
    path = (config_dir or settings.CONFIG_DIR) / f"{name}_suite.json"
    if not path.exists():
        raise UnknownTargetError(f"Unknown suite '{name}' (no {path.name} in {path.parent})")
    try:
        return SuiteDefinition.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except (ValidationError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"Invalid suite file {path}: {exc}") from exc


def run_suite(
    suite: SuiteDefinition,
    base_seed: Optional[int] = None,
    replicates: Optional[int] = None,
    workers: Optional[int] = None,
    executor: Optional[str] = None,
) -> List[ExperimentReport]:
    """Run every experiment of *suite*, optionally overriding seed and replicate count."""
    update: Dict[str, Any] = {}
    if base_seed is not None:
        update["base_seed"] = base_seed
    if replicates is not None:
        if replicates < 1:
            raise ConfigurationError(f"replicates must be at least 1, got {replicates}")
        update["replicates"] = replicates
    reports = []
    for experiment in suite.experiments:
        config = experiment.model_copy(update=update) if update else experiment
        reports.append(run_experiment(config, workers=workers, executor=executor))
    return reports

