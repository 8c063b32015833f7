"""Ward dual graph and districting plans."""

from .dual_graph import DualGraph, EdgeRecord, WardNode
from .io import graph_fingerprint, load_graph, write_graph
from .plan import (
    DistrictCaches,
    FlipDelta,
    Plan,
    build_plan,
    compute_boundary_pairs,
    compute_caches,
)

__all__ = [
    "WardNode",
    "EdgeRecord",
    "DualGraph",
    "load_graph",
    "write_graph",
    "graph_fingerprint",
    "Plan",
    "FlipDelta",
    "DistrictCaches",
    "build_plan",
    "compute_caches",
    "compute_boundary_pairs",
]
