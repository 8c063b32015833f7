"""
Synthetic unit-square grid instances.

Cell (r, c) is ward r * cols + c. Cells are rook-adjacent with shared
length 1 and their outer boundary is the number of exposed sides. Each
cell is its own county unless the spec groups them.
"""

import logging

import numpy as np

from ..core.config_schema import GridSpec
from ..graph.dual_graph import DualGraph, EdgeRecord, WardNode
from ..graph.plan import Plan, build_plan

logger = logging.getLogger(__name__)


def _table(value: float | list[list[float]] | None, rows: int, cols: int, default: float) -> list[list[float]]:
    if value is None:
        return [[default] * cols for _ in range(rows)]
    if isinstance(value, list):
        return [[float(x) for x in row] for row in value]
    return [[float(value)] * cols for _ in range(rows)]


def _gradient(rows: int, cols: int) -> list[list[float]]:
    """Republican share rising from 0.35 in the west to 0.65 in the east."""
    shares = np.linspace(0.35, 0.65, cols) if cols > 1 else np.array([0.5])
    return [[float(s) for s in shares] for _ in range(rows)]


def serpentine_order(rows: int, cols: int) -> list[int]:
    """Column-major boustrophedon walk; consecutive cells are rook-adjacent."""
    order = []
    for c in range(cols):
        row_range = range(rows) if c % 2 == 0 else range(rows - 1, -1, -1)
        order.extend(r * cols + c for r in row_range)
    return order


def banded_assignment(rows: int, cols: int, num_districts: int) -> list[int]:
    """
    Cut the serpentine walk into num_districts contiguous runs.

    Run k covers walk positions [k*N/D, (k+1)*N/D), so districts are
    connected and differ in size by at most one cell.
    """
    n = rows * cols
    assignment = [0] * n
    for position, ward in enumerate(serpentine_order(rows, cols)):
        assignment[ward] = position * num_districts // n
    return assignment


def grid_graph(spec: GridSpec) -> DualGraph:
    """Dual graph of a grid spec."""
    rows, cols = spec.rows, spec.cols
    population = _table(spec.population, rows, cols, 1.0)

    if spec.rep is not None and spec.dem is not None:
        rep = _table(spec.rep, rows, cols, 0.0)
        dem = _table(spec.dem, rows, cols, 0.0)
    else:
        share = _table(spec.rep_share, rows, cols, 0.5) if spec.rep_share is not None else _gradient(rows, cols)
        rep = [[population[r][c] * share[r][c] for c in range(cols)] for r in range(rows)]
        dem = [[population[r][c] - rep[r][c] for c in range(cols)] for r in range(rows)]

    if spec.seed == "explicit" and spec.assignment is not None:
        assignment = [spec.assignment[r][c] for r in range(rows) for c in range(cols)]
    else:
        assignment = banded_assignment(rows, cols, spec.num_districts)

    frozen_districts = set(spec.frozen_districts)
    nodes = []
    edges = []
    for r in range(rows):
        for c in range(cols):
            ward = r * cols + c
            exposed = (r == 0) + (r == rows - 1) + (c == 0) + (c == cols - 1)
            nodes.append(WardNode(
                id=ward,
                population=population[r][c],
                rep_votes=rep[r][c],
                dem_votes=dem[r][c],
                area=1.0,
                outer_boundary=float(exposed),
                county=spec.counties[r][c] if spec.counties is not None else str(ward),
                initial_district=assignment[ward],
                frozen=assignment[ward] in frozen_districts,
            ))
            if c + 1 < cols:
                edges.append(EdgeRecord(ward, ward + 1, 1.0))
            if r + 1 < rows:
                edges.append(EdgeRecord(ward, ward + cols, 1.0))

    return DualGraph(nodes, edges, spec.num_districts)


def generate(spec: GridSpec) -> tuple[DualGraph, Plan]:
    """Dual graph and seed plan of a grid spec; deterministic."""
    graph = grid_graph(spec)
    logger.debug(
        f"Generated {spec.rows}x{spec.cols} grid with {spec.num_districts} districts",
        extra={"event_type": "grid_generated", "rows": spec.rows, "cols": spec.cols},
    )
    return graph, build_plan(graph)


def random_grid_spec(
    seed: int,
    rows: int,
    cols: int,
    num_districts: int,
    *,
    county_blocks: bool = False,
    frozen_district: int | None = None,
) -> GridSpec:
    """
    Random integer-valued grid for oracle comparisons.

    Populations are 1..3 and both parties get 1..9 votes per cell, so
    every cache is an exact sum of small integers. With county_blocks,
    horizontally adjacent cell pairs share a county.
    """
    rng = np.random.default_rng(seed)
    population = rng.integers(1, 4, size=(rows, cols)).astype(float).tolist()
    rep = rng.integers(1, 10, size=(rows, cols)).astype(float).tolist()
    dem = rng.integers(1, 10, size=(rows, cols)).astype(float).tolist()
    counties = None
    if county_blocks:
        counties = [[f"{r}-{c // 2}" for c in range(cols)] for r in range(rows)]
    return GridSpec(
        rows=rows,
        cols=cols,
        num_districts=num_districts,
        population=population,
        rep=rep,
        dem=dem,
        counties=counties,
        frozen_districts=[] if frozen_district is None else [frozen_district],
    )
