#!/usr/bin/env python3
"""Command-line front end for single runs, benchmark suites, the vessel problem and landscape grids."""
from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import List, Optional, Sequence

from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text
from rich.theme import Theme

from src.firefly import settings
from src.firefly.bench import ExperimentReport, landscape_grid, load_suite, make_config, run_experiment, run_suite
from src.firefly.constrained import evaluate_design, make_penalty, vessel_fa_params
from src.firefly.core import RandomSource
from src.firefly.engine import DistanceUnits, NoiseKind, RunResult, make_params, run, scales_from_bounds
from src.firefly.errors import ConfigurationError, DimensionError, UnknownTargetError
from src.firefly.functions import VALID_FUNCTIONS, RealizationPolicy, get_function
from src.firefly.report_io import FORMATS, write_landscape, write_report, write_run

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIGURATION = 2
EXIT_UNKNOWN_TARGET = 3

COLOR_BG_PRIMARY = "#0b1220"
COLOR_BG_SECONDARY = "#11192d"
COLOR_ACCENT_CYAN = "#38bdf8"
COLOR_ACCENT_PURPLE = "#a78bfa"
COLOR_ACCENT_AMBER = "#f59e0b"
BACKGROUND_STYLE = f"on {COLOR_BG_PRIMARY}"
GLASS_ROW_STYLES = [BACKGROUND_STYLE, f"on {COLOR_BG_SECONDARY}"]
TRACE_ROWS_SHOWN = 25

TOOL_THEME = Theme(
    {
        "muted": "#cbd5e1",
        "info": "#93c5fd",
        "success": "#22c55e",
        "warning": "#eab308",
        "danger": "#ef4444",
    }
)


def themed_console(*, record: bool = False) -> Console:
    return Console(record=record, theme=TOOL_THEME, style="muted")


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.10g}"


def format_pct(value: float) -> str:
    return f"{value * 100:.1f}%"


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def build_trace_table(result: RunResult) -> Table:
    table = Table(
        title="Trace",
        box=box.SIMPLE_HEAVY,
        border_style=COLOR_ACCENT_CYAN,
        header_style="bold white",
        title_style=f"bold {COLOR_ACCENT_CYAN}",
        row_styles=GLASS_ROW_STYLES,
    )
    table.add_column("Iteration", justify="right")
    table.add_column("Best so far", justify="right")
    table.add_column("Current best", justify="right")
    table.add_column("Alpha", justify="right")
    records = result.trace
    if len(records) > TRACE_ROWS_SHOWN:
        records = records[: TRACE_ROWS_SHOWN - 1] + records[-1:]
    for record in records:
        table.add_row(str(record.iteration), _fmt(record.best_so_far), _fmt(record.current_best), f"{record.alpha_used:.4g}")
    return table


def build_run_panel(name: str, result: RunResult) -> Panel:
    position = ", ".join(f"{v:.6g}" for v in result.best_position)
    lines = [
        f"Best value: {_fmt(result.best_value)}",
        f"Best position: ({position})",
        f"Evaluations: {result.evaluations} (n x generations: {result.generation_evaluations})",
    ]
    return Panel("\n".join(lines), title=name, box=box.ROUNDED, border_style=COLOR_ACCENT_AMBER, title_align="left", padding=(1, 2))


def build_report_table(reports: Sequence[ExperimentReport], title: str) -> Table:
    table = Table(
        title=title,
        box=box.MINIMAL_HEAVY_HEAD,
        border_style=COLOR_ACCENT_PURPLE,
        header_style="bold white",
        title_style=f"bold {COLOR_ACCENT_PURPLE}",
        row_styles=GLASS_ROW_STYLES,
    )
    table.add_column("Experiment")
    table.add_column("Runs", justify="right")
    table.add_column("Success", justify="right")
    table.add_column("Best", justify="right")
    table.add_column("Median", justify="right")
    table.add_column("Worst", justify="right")
    table.add_column("Mean evals", justify="right")
    table.add_column("Notes")
    for report in reports:
        agg = report.aggregates
        notes = []
        if "all_peaks_fraction" in agg:
            notes.append(f"all peaks {format_pct(agg['all_peaks_fraction'])}")
        if "feasible_rate" in agg:
            notes.append(f"feasible {format_pct(agg['feasible_rate'])}")
        rate = agg["success_rate"]
        table.add_row(
            report.config.name,
            str(agg["replicates"]),
            Text(format_pct(rate), style="success" if rate >= 0.5 else "warning"),
            _fmt(agg["best_value"]),
            _fmt(agg["median_value"]),
            _fmt(agg["worst_value"]),
            f"{agg['mean_evaluations']:.1f}",
            ", ".join(notes) or "-",
        )
    return table


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def command_run(args: argparse.Namespace, console: Console) -> None:
    function = get_function(args.function, args.dim)
    policy = RealizationPolicy.RESAMPLE if args.resample else RealizationPolicy.FROZEN
    if function.STOCHASTIC:
        # Same stream a bench replicate with this seed uses for its coefficients.
        function = function.realize(RandomSource(args.seed).child(1), policy)
    objective = function.objective()
    params = make_params(
        population=args.n,
        max_iterations=args.iters,
        alpha=args.alpha,
        beta0=args.beta0,
        gamma=args.gamma,
        distance_exponent=args.m_exp,
        seed=args.seed,
        alpha_decay=args.alpha_decay,
        noise=args.noise,
        global_best_only=args.global_best_only,
        distance_units=args.distance_units,
        scales=scales_from_bounds(objective.bounds) if args.scale_by_range else None,
    )
    result = run(objective, params)
    console.print(build_trace_table(result))
    console.print(build_run_panel(f"{function.NAME} (d={args.dim})", result))
    if args.out:
        meta = {
            "function": function.NAME,
            "dimension": args.dim,
            "sense": objective.sense.value,
            "bounds": objective.bounds.to_dict(),
            "realization": policy.value if function.STOCHASTIC else None,
            "params": params.model_dump(mode="json"),
        }
        path = write_run(result, args.out, args.format, meta=meta)
        console.print(f"Saved run to {path}", style="info")


def command_bench(args: argparse.Namespace, console: Console) -> None:
    suite = load_suite(args.suite)
    reports = run_suite(
        suite,
        base_seed=args.base_seed,
        replicates=args.replicates,
        workers=args.workers,
        executor=args.executor,
    )
    out_dir: Path = args.out or settings.FIREFLY_OUTPUT_DIR
    for report in reports:
        fmt = args.format or report.config.output_format
        write_report(report, out_dir / f"{report.config.name}.{fmt}", fmt)
    console.print(build_report_table(reports, f"Suite: {suite.name}"))
    console.print(f"Saved {len(reports)} reports to {out_dir}", style="info")


def command_vessel(args: argparse.Namespace, console: Console) -> None:
    params = vessel_fa_params(
        population=args.n,
        max_iterations=args.iters,
        alpha=args.alpha,
        gamma=args.gamma,
        alpha_decay=args.alpha_decay,
    )
    config = make_config(
        name="vessel",
        target="vessel",
        dimension=4,
        params=params,
        replicates=args.replicates,
        base_seed=args.base_seed,
        penalty=make_penalty(coefficient=args.lambda_, exponent=args.p),
        feasibility_tol=args.tol,
        snap_thickness=args.snap_thickness,
    )
    report = run_experiment(config, workers=args.workers, executor=args.executor)
    console.print(build_report_table([report], "Pressure vessel"))

    feasible = [row for row in report.rows if row.extra.get("feasible")]
    if feasible:
        best = min(feasible, key=lambda row: row.best_value)
        cost, feasibility = evaluate_design(best.best_position, args.tol)
        lines = [
            f"Seed: {best.seed}",
            "Design (d1, d2, r, L): (" + ", ".join(f"{v:.6f}" for v in best.best_position) + ")",
            f"Cost: {cost:.4f}",
            "Constraints: " + ", ".join(f"g{k + 1}={g:.4g}" for k, g in enumerate(feasibility.constraint_values)),
        ]
        if "snapped_cost" in best.extra:
            state = "feasible" if best.extra.get("snapped_feasible") else "infeasible"
            lines.append(f"Snapped thickness cost: {best.extra['snapped_cost']:.4f} ({state})")
        console.print(Panel("\n".join(lines), title="Best feasible design", box=box.ROUNDED, border_style=COLOR_ACCENT_AMBER, title_align="left", padding=(1, 2)))
    else:
        console.print("No feasible design found", style="warning")
    if args.out:
        path = write_report(report, args.out, args.format)
        console.print(f"Saved report to {path}", style="info")


def command_landscape(args: argparse.Namespace, console: Console) -> None:
    landscape = landscape_grid(
        args.function,
        args.resolution,
        seed=args.seed,
        dimension=args.dim,
        lower=tuple(args.lower) if args.lower else None,
        upper=tuple(args.upper) if args.upper else None,
    )
    path = write_landscape(landscape, args.out)
    console.print(
        f"{landscape.target}: {args.resolution}x{args.resolution} grid, "
        f"min {_fmt(float(landscape.values.min()))}, max {_fmt(float(landscape.values.max()))}",
    )
    console.print(f"Saved landscape to {path}", style="info")


# ---------------------------------------------------------------------------
# Arguments
# ---------------------------------------------------------------------------


def _add_executor_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workers", type=int, default=None, help="Worker processes (default: FIREFLY_WORKERS).")
    parser.add_argument(
        "--executor",
        choices=["local", "celery"],
        default=None,
        help="Replicate executor (default: FIREFLY_EXECUTOR).",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Firefly Algorithm runs, benchmarks and landscapes.")
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="Single seeded run on a test function.")
    run_parser.add_argument("--function", required=True, help=f"One of: {', '.join(VALID_FUNCTIONS)}.")
    run_parser.add_argument("--dim", type=int, default=2, help="Dimension (default: 2).")
    run_parser.add_argument("--n", type=int, default=25, help="Number of fireflies (default: 25).")
    run_parser.add_argument("--iters", type=int, default=20, help="Generations (default: 20).")
    run_parser.add_argument("--alpha", type=float, default=0.2, help="Randomization weight.")
    run_parser.add_argument("--beta0", type=float, default=1.0, help="Attractiveness at r = 0.")
    run_parser.add_argument("--gamma", type=float, default=1.0, help="Light absorption coefficient.")
    run_parser.add_argument("--m-exp", dest="m_exp", type=float, default=2.0, help="Distance exponent m.")
    run_parser.add_argument("--seed", type=int, default=0, help="Unsigned 64-bit seed.")
    run_parser.add_argument("--resample", action="store_true", help="Redraw stochastic coefficients on every evaluation.")
    run_parser.add_argument("--alpha-decay", dest="alpha_decay", type=float, default=1.0, help="Geometric alpha decay per generation.")
    run_parser.add_argument("--noise", choices=[k.value for k in NoiseKind], default=NoiseKind.GAUSSIAN.value)
    run_parser.add_argument("--scale-by-range", dest="scale_by_range", action="store_true", help="Scale alpha by each box width.")
    run_parser.add_argument("--global-best-only", dest="global_best_only", action="store_true", help="Move towards the global best only.")
    run_parser.add_argument(
        "--distance-units",
        dest="distance_units",
        choices=[u.value for u in DistanceUnits],
        default=DistanceUnits.BOX.value,
        help="Measure r in box widths (default) or raw coordinates.",
    )
    run_parser.add_argument("--out", type=Path, help="Write the run (JSON) or its trace (CSV).")
    run_parser.add_argument("--format", choices=FORMATS, default="json")

    bench_parser = commands.add_parser("bench", help="Run a declarative experiment suite.")
    bench_parser.add_argument("--suite", default="paper", help="Suite name (default: paper).")
    bench_parser.add_argument("--replicates", type=int, default=None, help="Override replicates of every experiment.")
    bench_parser.add_argument("--base-seed", dest="base_seed", type=int, default=None, help="Override the base seed.")
    bench_parser.add_argument("--out", type=Path, default=None, help="Report directory (default: FIREFLY_OUTPUT_DIR).")
    bench_parser.add_argument("--format", choices=FORMATS, default=None)
    _add_executor_args(bench_parser)

    vessel_parser = commands.add_parser("vessel", help="Pressure-vessel design with a static penalty.")
    vessel_parser.add_argument("--n", type=int, default=40, help="Number of fireflies (default: 40).")
    vessel_parser.add_argument("--iters", type=int, default=20, help="Generations (default: 20).")
    vessel_parser.add_argument("--lambda", dest="lambda_", type=float, default=1e6, help="Penalty coefficient.")
    vessel_parser.add_argument("--p", type=float, default=2.0, help="Penalty exponent.")
    vessel_parser.add_argument("--replicates", type=int, default=30)
    vessel_parser.add_argument("--base-seed", dest="base_seed", type=int, default=0)
    vessel_parser.add_argument("--snap-thickness", dest="snap_thickness", action="store_true", help="Also report d1, d2 rounded up to 0.0625 multiples.")
    vessel_parser.add_argument("--alpha", type=float, default=0.2)
    vessel_parser.add_argument("--gamma", type=float, default=1.0)
    vessel_parser.add_argument("--alpha-decay", dest="alpha_decay", type=float, default=0.8)
    vessel_parser.add_argument("--tol", type=float, default=1e-3, help="Feasibility tolerance (scaled per constraint).")
    vessel_parser.add_argument("--out", type=Path, help="Write the replicate report.")
    vessel_parser.add_argument("--format", choices=FORMATS, default="json")
    _add_executor_args(vessel_parser)

    landscape_parser = commands.add_parser("landscape", help="Evaluate a test function on a 2-D grid.")
    landscape_parser.add_argument("--function", required=True)
    landscape_parser.add_argument("--resolution", type=int, default=101, help="Grid points per axis.")
    landscape_parser.add_argument("--seed", type=int, default=0, help="Seed of the frozen realization.")
    landscape_parser.add_argument("--dim", type=int, default=2, help="Dimension; extra coordinates sit at the box centre.")
    landscape_parser.add_argument("--lower", type=float, nargs=2, help="Lower corner of the slice.")
    landscape_parser.add_argument("--upper", type=float, nargs=2, help="Upper corner of the slice.")
    landscape_parser.add_argument("--out", type=Path, required=True, help="Output file (.json or .csv).")
    return parser


COMMANDS = {
    "run": command_run,
    "bench": command_bench,
    "vessel": command_vessel,
    "landscape": command_landscape,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=settings.FIREFLY_LOG_LEVEL, format=settings.LOG_FORMAT)
    console = themed_console()
    try:
        COMMANDS[args.command](args, console)
    except UnknownTargetError as exc:
        console.print(f"Unknown target: {exc}", style="danger")
        return EXIT_UNKNOWN_TARGET
    except (ConfigurationError, DimensionError) as exc:
        console.print(f"Configuration error: {exc}", style="danger")
        return EXIT_CONFIGURATION
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
