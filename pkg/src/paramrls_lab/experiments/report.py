"""Deterministic CSV / JSON rendering of reports, tuner traces and run trajectories."""
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from paramrls_lab.errors import InvalidArgumentError, ReportWriteError
from paramrls_lab.experiments.stats import wilson_interval
from paramrls_lab.models.report_models import Report
from paramrls_lab.models.tuner_models import TunerTrace

logger = logging.getLogger("paramrls-lab.experiments")

HISTOGRAM_HEADER = ["outcome", "count", "frequency", "ci_low", "ci_high"]
FORMATS = ("csv", "json")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def histogram_rows(rep: Report) -> List[list]:
    rows = []
    for outcome, count in rep.counts.items():
        low, high = wilson_interval(count, rep.replicates)
        rows.append([outcome, count, count / rep.replicates, low, high])
    return rows


def render_report(rep: Report, format: str = "json") -> str:
    """Report as text. CSV carries the row table when there is one, the outcome histogram otherwise."""
    if format == "json":
        return rep.model_dump_json(indent=2) + "\n"
    if format == "csv":
        if rep.rows:
            return csv_text(rep.columns, rep.rows)
        return csv_text(HISTOGRAM_HEADER, histogram_rows(rep))
    raise InvalidArgumentError(f"format must be one of {FORMATS}, got {format!r}")


def _write_text(text: str, path: Union[str, Path]) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportWriteError(path, exc)


def emit_report(rep: Report, format: str = "json", path: Optional[Union[str, Path]] = None) -> None:
    """Write the report to path, or to stdout when path is None or "-"."""
    text = render_report(rep, format)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    _write_text(text, path)
    logger.info(f"Wrote {format} report for '{rep.scenario}' to {path}.")


def load_report(path: Union[str, Path]) -> Report:
    return Report.model_validate_json(Path(path).read_text(encoding="utf-8"))


def write_trace(trace: TunerTrace, stem: Union[str, Path]) -> None:
    """Trace as <stem>.json plus a flat <stem>.csv with one row per loop iteration."""
    stem = Path(stem)
    _write_text(trace.model_dump_json(indent=2) + "\n", stem.with_suffix(".json"))
    _write_text(csv_text(trace.csv_header(), trace.csv_rows()), stem.with_suffix(".csv"))


def write_trajectory(trajectory: Optional[Sequence[Tuple[int, int]]], path: Union[str, Path]) -> None:
    if trajectory is None:
        return
    _write_text(csv_text(["iteration", "fitness"], trajectory), path)
