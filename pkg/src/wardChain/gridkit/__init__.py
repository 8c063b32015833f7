"""Synthetic grid instances and brute-force oracles."""

from .generator import banded_assignment, generate, grid_graph, random_grid_spec, serpentine_order
from .oracles import (
    PlanKey,
    enumerate_valid_plans,
    flip_mismatches,
    oracle_valid_flip,
    partition_of,
    reachable_plans,
    valid_flips,
)

__all__ = [
    "generate",
    "grid_graph",
    "banded_assignment",
    "serpentine_order",
    "random_grid_spec",
    "PlanKey",
    "enumerate_valid_plans",
    "reachable_plans",
    "valid_flips",
    "oracle_valid_flip",
    "flip_mismatches",
    "partition_of",
]
