"""Precinct map preprocessing and dual graph extraction."""

from .extract import ExtractedGraph, extract_graph, ingest_file
from .pipeline import (
    PipelineResult,
    dissolve_contained,
    district_totals,
    merge_islands,
    run_pipeline,
    split_multipolygons,
)
from .precincts import (
    LENGTH_EPSILON,
    PrecinctGeometry,
    load_precincts,
    nearest,
    parse_precincts,
    shared_length,
)

__all__ = [
    "LENGTH_EPSILON",
    "PrecinctGeometry",
    "load_precincts",
    "parse_precincts",
    "shared_length",
    "nearest",
    "merge_islands",
    "split_multipolygons",
    "dissolve_contained",
    "district_totals",
    "run_pipeline",
    "PipelineResult",
    "extract_graph",
    "ExtractedGraph",
    "ingest_file",
]
