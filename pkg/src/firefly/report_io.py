"""
File emission for runs, experiment reports and landscapes.

JSON floats are written with ``repr`` (shortest string that round-trips
exactly); CSV floats use 17 significant digits. Output depends only on the
data, so equal reports give byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

from .bench import ExperimentReport, Landscape, ReplicateRow
from .engine import RunResult
from .errors import ConfigurationError

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")
TRACE_COLUMNS = ["iteration", "best_so_far", "current_best", "alpha_used"]
ROW_COLUMNS = ["index", "seed", "best_value", "success", "evaluations", "generation_evaluations"]
# Extra columns that are always lists, even with a single entry.
LIST_EXTRAS = frozenset({"peak_counts"})


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, (list, tuple)):
        return ";".join(_fmt(item) for item in value)
    return str(value)


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(cell) for cell in row])
    return buffer.getvalue()


def _json_text(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"


def _write(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="")
    logger.info("Wrote %s", path)
    return path


def _check_format(fmt: str) -> str:
    fmt = fmt.lower()
    if fmt not in FORMATS:
        raise ConfigurationError(f"Unknown output format '{fmt}'. Valid options: {', '.join(FORMATS)}")
    return fmt


# ---------------------------------------------------------------------------
# Runs
# ---------------------------------------------------------------------------


def trace_csv(result: RunResult) -> str:
    return _csv_text(
        TRACE_COLUMNS,
        ([r.iteration, r.best_so_far, r.current_best, r.alpha_used] for r in result.trace),
    )


def write_run(result: RunResult, path: Path, fmt: str = "json", meta: Dict[str, Any] | None = None) -> Path:
    """JSON carries metadata, trace, best point and population snapshots; CSV is the trace only."""
    if _check_format(fmt) == "csv":
        return _write(path, trace_csv(result))
    payload = {"meta": meta or {}}
    payload.update(result.to_dict())
    return _write(path, _json_text(payload))


# ---------------------------------------------------------------------------
# Experiment reports
# ---------------------------------------------------------------------------


def _row_columns(rows: Sequence[ReplicateRow]) -> List[str]:
    dimension = max(len(row.best_position) for row in rows)
    extras = sorted({key for row in rows for key in row.extra})
    return ROW_COLUMNS + [f"x{k}" for k in range(dimension)] + extras


def report_csv(report: ExperimentReport) -> str:
    columns = _row_columns(report.rows)
    dimension = sum(1 for c in columns if c.startswith("x") and c[1:].isdigit())
    extras = columns[len(ROW_COLUMNS) + dimension:]

    def cells(row: ReplicateRow) -> List[Any]:
        position = list(row.best_position) + [""] * (dimension - len(row.best_position))
        return (
            [row.index, row.seed, row.best_value, row.success, row.evaluations, row.generation_evaluations]
            + position
            + [row.extra.get(key, "") for key in extras]
        )

    return _csv_text(columns, (cells(row) for row in report.rows))


def write_report(report: ExperimentReport, path: Path, fmt: str | None = None) -> Path:
    fmt = _check_format(fmt or report.config.output_format)
    if fmt == "csv":
        return _write(path, report_csv(report))
    return _write(path, _json_text(report.to_dict()))


def _parse_scalar(text: str) -> Any:
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        return float(text)


def _parse_extra(key: str, text: str) -> Any:
    if key in LIST_EXTRAS or ";" in text:
        return [_parse_scalar(item) for item in text.split(";")] if text else []
    return _parse_scalar(text)


def read_report_rows(path: Path) -> List[ReplicateRow]:
    """Replicate rows back from a JSON or CSV report (by file suffix)."""
    path = Path(path)
    if path.suffix == ".json":
        payload = json.loads(path.read_text(encoding="utf-8"))
        return [ReplicateRow.from_dict(row) for row in payload["rows"]]
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        columns = list(reader.fieldnames or [])
        records = list(reader)
    coordinates = [key for key in columns if key.startswith("x") and key[1:].isdigit()]
    extras = [key for key in columns if key not in ROW_COLUMNS and key not in coordinates]
    rows = []
    for record in records:
        rows.append(
            ReplicateRow(
                index=int(record["index"]),
                seed=int(record["seed"]),
                best_value=float(record["best_value"]),
                best_position=[float(record[key]) for key in coordinates if record[key]],
                evaluations=int(record["evaluations"]),
                success=record["success"] == "true",
                generation_evaluations=int(record["generation_evaluations"]),
                # An empty cell means the row never had that column.
                extra={key: _parse_extra(key, record[key]) for key in extras if record[key] != ""},
            )
        )
    return rows


# ---------------------------------------------------------------------------
# Landscapes
# ---------------------------------------------------------------------------


def write_landscape(landscape: Landscape, path: Path, fmt: str | None = None) -> Path:
    """x-major (x, y, f) rows; the format follows the suffix unless given."""
    path = Path(path)
    fmt = _check_format(fmt or ("csv" if path.suffix == ".csv" else "json"))
    if fmt == "csv":
        return _write(path, _csv_text(["x", "y", "f"], landscape.rows()))
    return _write(path, _json_text(landscape.to_dict()))
