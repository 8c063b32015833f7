"""Node/edge table I/O and graph fingerprinting."""

import hashlib
import logging
from pathlib import Path
from typing import IO

import pandas as pd

from ..core.exceptions import GraphValidationError, OutputError
from .dual_graph import DualGraph, EdgeRecord, WardNode

logger = logging.getLogger(__name__)

NODE_COLUMNS = ["id", "pop", "rep", "dem", "area", "outer_boundary", "county", "district", "frozen"]
EDGE_COLUMNS = ["u", "v", "shared_length"]

TableSource = str | Path | IO[str] | pd.DataFrame

_TRUE_FLAGS = {"1", "true", "yes", "t", "y"}
_FALSE_FLAGS = {"0", "false", "no", "f", "n", ""}


def _read_table(source: TableSource, columns: list[str], kind: str) -> pd.DataFrame:
    if isinstance(source, pd.DataFrame):
        frame = source.copy()
    else:
        try:
            frame = pd.read_csv(
                source,
                dtype=str,
                keep_default_na=False,
                skipinitialspace=True,
                encoding="utf-8",
            )
        except FileNotFoundError as exc:
            raise OutputError(f"{kind} file not found: {source}", path=str(source)) from exc
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
            raise GraphValidationError(f"{kind} table does not parse: {exc}") from exc

    frame.columns = [str(c).strip() for c in frame.columns]
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise GraphValidationError(f"{kind} table is missing columns {missing}")
    return frame


def _to_float(value: object, column: str, row: int) -> float:
    try:
        return float(value)  # type: ignore[arg-type]
    except (TypeError, ValueError) as exc:
        raise GraphValidationError(f"row {row}: {column}={value!r} is not a number") from exc


def _to_int(value: object, column: str, row: int) -> int:
    number = _to_float(value, column, row)
    if not number.is_integer():
        raise GraphValidationError(f"row {row}: {column}={value!r} is not an integer")
    return int(number)


def _to_flag(value: object, row: int) -> bool:
    text = str(value).strip().lower()
    if text in _TRUE_FLAGS:
        return True
    if text in _FALSE_FLAGS:
        return False
    raise GraphValidationError(f"row {row}: frozen={value!r} is not a boolean flag")


def load_graph(
    nodes_source: TableSource,
    edges_source: TableSource,
    num_districts: int,
) -> DualGraph:
    """
    Load and validate a chain instance from its node and edge tables.

    Args:
        nodes_source: Path, text stream or DataFrame with NODE_COLUMNS
        edges_source: Path, text stream or DataFrame with EDGE_COLUMNS
        num_districts: Number of districts D; district indices are 0..D-1

    Returns:
        Validated DualGraph

    Raises:
        GraphValidationError: Malformed tables, duplicate or dangling edges,
            nonpositive areas or a disconnected initial district
    """
    nodes_frame = _read_table(nodes_source, NODE_COLUMNS, "nodes")
    edges_frame = _read_table(edges_source, EDGE_COLUMNS, "edges")

    nodes: list[WardNode] = []
    for row, record in enumerate(nodes_frame.to_dict(orient="records")):
        nodes.append(WardNode(
            id=_to_int(record["id"], "id", row),
            population=_to_float(record["pop"], "pop", row),
            rep_votes=_to_float(record["rep"], "rep", row),
            dem_votes=_to_float(record["dem"], "dem", row),
            area=_to_float(record["area"], "area", row),
            outer_boundary=_to_float(record["outer_boundary"], "outer_boundary", row),
            county=str(record["county"]).strip(),
            initial_district=_to_int(record["district"], "district", row),
            frozen=_to_flag(record["frozen"], row),
        ))
    nodes.sort(key=lambda node: node.id)

    edges = [
        EdgeRecord(
            u=_to_int(record["u"], "u", row),
            v=_to_int(record["v"], "v", row),
            shared_length=_to_float(record["shared_length"], "shared_length", row),
        )
        for row, record in enumerate(edges_frame.to_dict(orient="records"))
    ]

    graph = DualGraph(nodes, edges, num_districts)
    logger.info(
        f"Loaded graph with {graph.num_wards} wards and {len(graph.edges)} edges",
        extra={"event_type": "graph_loaded", "wards": graph.num_wards, "edges": len(graph.edges)},
    )
    return graph


def nodes_frame(graph: DualGraph) -> pd.DataFrame:
    """Node table of a graph in file column order."""
    return pd.DataFrame(
        [
            (n.id, n.population, n.rep_votes, n.dem_votes, n.area, n.outer_boundary,
             n.county, n.initial_district, int(n.frozen))
            for n in graph.nodes
        ],
        columns=NODE_COLUMNS,
    )


def edges_frame(graph: DualGraph) -> pd.DataFrame:
    """Edge table with each pair written as (min, max), sorted."""
    rows = sorted(
        (min(e.u, e.v), max(e.u, e.v), e.shared_length) for e in graph.edges
    )
    return pd.DataFrame(rows, columns=EDGE_COLUMNS)


def _render(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n")


def write_graph(graph: DualGraph, nodes_path: Path, edges_path: Path) -> None:
    """Write the node and edge tables; output is byte-stable for a given graph."""
    try:
        nodes_path.parent.mkdir(parents=True, exist_ok=True)
        edges_path.parent.mkdir(parents=True, exist_ok=True)
        nodes_path.write_text(_render(nodes_frame(graph)), encoding="utf-8")
        edges_path.write_text(_render(edges_frame(graph)), encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"Failed to write graph tables: {exc}", path=str(nodes_path)) from exc


def graph_fingerprint(graph: DualGraph) -> str:
    """sha256 over the canonical node/edge rendering and district count."""
    digest = hashlib.sha256()
    digest.update(_render(nodes_frame(graph)).encode("utf-8"))
    digest.update(b"\x00")
    digest.update(_render(edges_frame(graph)).encode("utf-8"))
    digest.update(f"\x00{graph.num_districts}".encode())
    return digest.hexdigest()
