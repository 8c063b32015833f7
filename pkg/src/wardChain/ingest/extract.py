"""Dual graph extraction from preprocessed precincts, and ingest outputs on disk."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import pandas as pd
from shapely import STRtree

from ..core.exceptions import GraphValidationError, IngestError, OutputError
from ..core.logging import performance_logger
from ..graph.io import EDGE_COLUMNS, NODE_COLUMNS, load_graph
from ..models.schemas import IngestReport
from .pipeline import district_sort_key, run_pipeline
from .precincts import LENGTH_EPSILON, PrecinctGeometry, load_precincts, shared_length

logger = logging.getLogger(__name__)

NODES_FILE = "nodes.csv"
EDGES_FILE = "edges.csv"
WARDS_INDEX_FILE = "wards_index.csv"
REPORT_FILE = "ingest_report.json"


@dataclass(frozen=True)
class ExtractedGraph:
    nodes: pd.DataFrame
    edges: pd.DataFrame
    wards_index: pd.DataFrame
    district_labels: dict[str, int]

    @property
    def num_districts(self) -> int:
        return len(self.district_labels)


def _finite(value: float, what: str, precinct: str) -> float:
    if not math.isfinite(value):
        raise IngestError(f"precinct {precinct}: {what} is not finite", precincts=[precinct], step="extract_graph")
    return value


@performance_logger.performance_timer("extract_graph")
def extract_graph(precincts: list[PrecinctGeometry]) -> ExtractedGraph:
    """
    Node and edge tables of a preprocessed precinct map.

    Precincts are numbered densely in id order. An edge joins two precincts
    sharing more than LENGTH_EPSILON of boundary; corner contacts do not
    count. Attached islands add their area and their whole boundary, which
    is outer boundary. Input district labels are mapped to 0..D-1, numeric
    labels in numeric order.

    Raises:
        IngestError: a geometric quantity is not finite
    """
    ordered = sorted(precincts, key=lambda p: p.id)
    geometries = [p.geometry for p in ordered]
    labels = sorted({p.district for p in ordered}, key=district_sort_key)
    district_index = {label: i for i, label in enumerate(labels)}

    tree = STRtree(geometries)
    shared = [0.0] * len(ordered)
    edge_rows = []
    for i, geometry in enumerate(geometries):
        for j in sorted(int(j) for j in tree.query(geometry)):
            if j <= i:
                continue
            length = _finite(shared_length(geometry, geometries[j]), "shared boundary", ordered[i].id)
            if length > LENGTH_EPSILON:
                edge_rows.append((i, j, length))
                shared[i] += length
                shared[j] += length

    node_rows = []
    for i, precinct in enumerate(ordered):
        perimeter = _finite(precinct.total_length, "perimeter", precinct.id)
        area = _finite(precinct.total_area, "area", precinct.id)
        node_rows.append((
            i,
            float(precinct.population),
            float(precinct.rep_votes),
            float(precinct.dem_votes),
            area,
            max(0.0, perimeter - shared[i]),
            precinct.county,
            district_index[precinct.district],
            int(precinct.frozen),
        ))

    extracted = ExtractedGraph(
        nodes=pd.DataFrame(node_rows, columns=NODE_COLUMNS),
        edges=pd.DataFrame(edge_rows, columns=EDGE_COLUMNS),
        wards_index=pd.DataFrame([(i, p.id) for i, p in enumerate(ordered)], columns=["id", "precinct"]),
        district_labels=district_index,
    )
    logger.info(
        f"Extracted {len(node_rows)} wards and {len(edge_rows)} edges",
        extra={"event_type": "graph_extracted", "wards": len(node_rows), "edges": len(edge_rows)},
    )
    return extracted


def _write_csv(frame: pd.DataFrame, path: Path) -> None:
    path.write_text(frame.to_csv(index=False, lineterminator="\n"), encoding="utf-8")


def ingest_file(geometry_path: Path, out_dir: Path) -> IngestReport:
    """
    Run the whole pipeline on a geometry file and write its outputs.

    out_dir receives nodes.csv, edges.csv, wards_index.csv and
    ingest_report.json. The tables are checked by loading them as a chain
    instance before anything is written.

    Raises:
        IngestError: a step failed or the tables are not a valid chain
            instance (for instance a district split into pieces by the map)
        ConservationError: preprocessing changed a district total
        OutputError: the input cannot be read or the outputs written
    """
    precincts = load_precincts(geometry_path)
    result = run_pipeline(precincts)
    extracted = extract_graph(result.precincts)

    report = result.report.model_copy(update={
        "num_wards": len(extracted.nodes),
        "num_edges": len(extracted.edges),
        "district_labels": extracted.district_labels,
    })

    try:
        load_graph(extracted.nodes, extracted.edges, extracted.num_districts)
    except GraphValidationError as exc:
        raise IngestError(
            f"ingested tables are not a valid chain instance: {exc.message}",
            step="extract_graph",
            recovery_suggestion="Check the precinct map for districts in several pieces",
        ) from exc

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_csv(extracted.nodes, out_dir / NODES_FILE)
        _write_csv(extracted.edges, out_dir / EDGES_FILE)
        _write_csv(extracted.wards_index, out_dir / WARDS_INDEX_FILE)
        (out_dir / REPORT_FILE).write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"Failed to write ingest outputs: {exc}", path=str(out_dir)) from exc

    logger.info(
        f"Ingested {report.initial_count} precincts into {report.num_wards} wards",
        extra={"event_type": "ingest_complete", "wards": report.num_wards, "edges": report.num_edges},
    )
    return report
