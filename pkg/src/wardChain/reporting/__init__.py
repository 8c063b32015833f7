"""Results tables, report files and histogram output."""

from .plots import write_histogram_svg
from .tables import (
    TABLE_COLUMNS,
    format_epsilon,
    mixed_instances,
    read_report,
    render_table,
    table_row,
    write_histogram_table,
    write_report,
)

__all__ = [
    "TABLE_COLUMNS",
    "table_row",
    "render_table",
    "format_epsilon",
    "mixed_instances",
    "read_report",
    "write_report",
    "write_histogram_table",
    "write_histogram_svg",
]
