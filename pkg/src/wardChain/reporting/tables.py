"""Results table and histogram table rendering."""

import logging
from collections.abc import Sequence
from pathlib import Path

import pandas as pd
from pydantic import ValidationError as PydanticValidationError

from ..core.exceptions import OutputError, ValidationError
from ..models.schemas import EpsilonReport

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ["Constraint", "Property 4?", "Property 5?", "ε", "p"]
HISTOGRAM_COLUMNS = ["bin_left", "count"]


def _yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


def format_epsilon(epsilon: float) -> str:
    return f"{epsilon:.2g}"


def table_row(report: EpsilonReport) -> dict[str, str]:
    """One results-table row: constraint, the two property toggles, ε and p."""
    return {
        "Constraint": report.mode.table_name,
        "Property 4?": _yes_no(report.enforce_counties),
        "Property 5?": _yes_no(report.enforce_mm),
        "ε": format_epsilon(report.epsilon),
        "p": report.p_rendered,
    }


def render_table(reports: Sequence[EpsilonReport], *, with_labels: bool = False) -> str:
    """Aligned text table with one row per report, in the given order."""
    rows = [table_row(report) for report in reports]
    frame = pd.DataFrame(rows, columns=TABLE_COLUMNS)
    if with_labels:
        frame.insert(0, "Run", [report.label or "" for report in reports])
    return frame.to_string(index=False, justify="left")


def mixed_instances(reports: Sequence[EpsilonReport]) -> list[str]:
    """Distinct graph fingerprints when the reports come from more than one instance."""
    hashes = sorted({report.graph_hash for report in reports if report.graph_hash})
    return hashes if len(hashes) > 1 else []


def write_report(report: EpsilonReport, path: Path) -> None:
    """Report JSON; the rendering is stable for a given report."""
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"Failed to write report: {exc}", path=str(path)) from exc


def read_report(path: Path) -> EpsilonReport:
    """Parse a report written by write_report."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"Cannot read report {path}: {exc}", path=str(path)) from exc
    try:
        return EpsilonReport.model_validate_json(text)
    except PydanticValidationError as exc:
        raise ValidationError(
            f"{path} is not a trajectory report",
            details={"path": str(path), "errors": exc.error_count()},
        ) from exc


def write_histogram_table(histogram: Sequence[tuple[float, int]], path: Path) -> None:
    """Two-column histogram file `bin_left,count`."""
    frame = pd.DataFrame(list(histogram), columns=HISTOGRAM_COLUMNS)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(frame.to_csv(index=False, lineterminator="\n"), encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"Failed to write histogram: {exc}", path=str(path)) from exc
