"""Pytest configuration and fixtures for wardChain tests."""

import logging
import sys
from pathlib import Path

import pytest

# Add src to Python path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from wardChain.core.config_schema import CompactnessMode, GridSpec, ValidityConfig  # noqa: E402
from wardChain.graph.dual_graph import DualGraph, EdgeRecord, WardNode  # noqa: E402
from wardChain.gridkit.generator import generate  # noqa: E402


def path_graph(
    districts: list[int],
    num_districts: int | None = None,
    *,
    population: list[float] | None = None,
    counties: list[str] | None = None,
    frozen: list[bool] | None = None,
) -> DualGraph:
    """Path 0-1-...-(n-1) of unit wards with the given seed districts."""
    n = len(districts)
    population = population or [1.0] * n
    nodes = [
        WardNode(
            id=i,
            population=population[i],
            rep_votes=float(i + 1),
            dem_votes=float(n - i),
            area=1.0,
            outer_boundary=2.0 + (i == 0) + (i == n - 1),
            county=counties[i] if counties else f"c{i}",
            initial_district=districts[i],
            frozen=frozen[i] if frozen else False,
        )
        for i in range(n)
    ]
    edges = [EdgeRecord(i, i + 1, 1.0) for i in range(n - 1)]
    return DualGraph(nodes, edges, num_districts or max(districts) + 1)


@pytest.fixture
def half_split_spec():
    """4x4 unit grid, two banded districts: columns 0-1 and columns 2-3."""
    return GridSpec(rows=4, cols=4, num_districts=2)


@pytest.fixture
def half_split(half_split_spec):
    """(graph, seed plan) of the 4x4 half split."""
    return generate(half_split_spec)


@pytest.fixture
def loose_validity():
    """Validity settings that only bind contiguity."""
    return ValidityConfig(
        pop_tolerance_wards=100.0,
        compactness_mode=CompactnessMode.PERIMETER,
        compactness_budget=100.0,
        enforce_counties=False,
        enforce_mm=False,
    )


@pytest.fixture
def make_path_graph():
    """Factory for small path graphs."""
    return path_graph


@pytest.fixture
def restore_root_logger():
    """Put the root logger back after a test reconfigures it."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)
