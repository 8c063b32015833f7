"""Serialized artifact models for wardChain."""

from .schemas import (
    DistrictConservation,
    DistrictTally,
    ElectionResult,
    EpsilonReport,
    IngestReport,
    PrecinctMove,
    TrajectoryRecord,
    format_probability,
)

__all__ = [
    "DistrictTally",
    "ElectionResult",
    "TrajectoryRecord",
    "EpsilonReport",
    "PrecinctMove",
    "DistrictConservation",
    "IngestReport",
    "format_probability",
]
