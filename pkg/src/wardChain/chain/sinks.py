"""Trajectory trace sinks."""

import csv
from pathlib import Path
from types import TracebackType
from typing import IO, Any, Protocol

from ..core.exceptions import OutputError
from ..models.schemas import TrajectoryRecord

TRACE_HEADER = ["step", "accepted", "ward", "to_district", "label"]


class TraceSink(Protocol):
    def write(self, record: TrajectoryRecord) -> None: ...


class MemoryTraceSink:
    """Keeps every record in memory."""

    def __init__(self) -> None:
        self.records: list[TrajectoryRecord] = []

    def write(self, record: TrajectoryRecord) -> None:
        self.records.append(record)

    @property
    def labels(self) -> list[float]:
        return [record.label for record in self.records]


class CsvTraceSink:
    """
    Append-only delimiter-separated trace.

    Labels are written with repr() so the file round-trips every float
    exactly; lazy holds leave ward and to_district empty.
    """

    def __init__(self, path: Path):
        self.path = path
        self._handle: IO[str] | None = None
        self._writer: Any = None

    def open(self) -> "CsvTraceSink":
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = open(self.path, "w", encoding="utf-8", newline="")
        except OSError as exc:
            raise OutputError(f"Cannot open trace file: {exc}", path=str(self.path)) from exc
        self._writer = csv.writer(self._handle, lineterminator="\n")
        self._writer.writerow(TRACE_HEADER)
        return self

    def write(self, record: TrajectoryRecord) -> None:
        if self._writer is None:
            self.open()
        assert self._writer is not None
        self._writer.writerow([
            record.step,
            int(record.accepted),
            "" if record.ward is None else record.ward,
            "" if record.to_district is None else record.to_district,
            repr(record.label),
        ])

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None
            self._writer = None

    def __enter__(self) -> "CsvTraceSink":
        return self.open()

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        self.close()
