"""
Immutable dual multigraph of a ward map.

Wards are nodes; an edge joins two wards that share boundary of positive
length, weighted by the total shared length. Parallel boundary segments
between the same pair are expected to be aggregated before construction.
"""

import logging
import math
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from ..core.exceptions import DisconnectedDistrictError, GraphValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class WardNode:
    """One ward: attributes, county and seed district."""
    id: int
    population: float
    rep_votes: float
    dem_votes: float
    area: float
    outer_boundary: float
    county: str
    initial_district: int
    frozen: bool = False


@dataclass(frozen=True, slots=True)
class EdgeRecord:
    """Aggregated shared boundary between two wards."""
    u: int
    v: int
    shared_length: float


class DualGraph:
    """
    Validated, read-only ward graph shared by every plan built on it.

    Construction checks attribute ranges, edge consistency and the
    connectivity of every initial district, then derives the county
    structure (intact counties, locked wards) and the frozen districts
    from the seed assignment.
    """

    def __init__(
        self,
        nodes: Sequence[WardNode],
        edges: Sequence[EdgeRecord],
        num_districts: int,
    ):
        if num_districts < 1:
            raise GraphValidationError(f"num_districts must be positive, got {num_districts}")

        self.nodes: tuple[WardNode, ...] = tuple(nodes)
        self.edges: tuple[EdgeRecord, ...] = tuple(edges)
        self.num_districts = num_districts
        self.num_wards = len(self.nodes)

        if self.num_wards == 0:
            raise GraphValidationError("graph has no wards")

        self._validate_nodes()
        neighbors = self._validate_edges()

        # Hot-path views; plain tuples of floats index faster than arrays
        self.neighbors: tuple[tuple[tuple[int, float], ...], ...] = tuple(
            tuple(sorted(adj)) for adj in neighbors
        )
        self.population: tuple[float, ...] = tuple(n.population for n in self.nodes)
        self.rep_votes: tuple[float, ...] = tuple(n.rep_votes for n in self.nodes)
        self.dem_votes: tuple[float, ...] = tuple(n.dem_votes for n in self.nodes)
        self.area: tuple[float, ...] = tuple(n.area for n in self.nodes)
        self.outer_boundary: tuple[float, ...] = tuple(n.outer_boundary for n in self.nodes)
        self.initial_assignment: tuple[int, ...] = tuple(n.initial_district for n in self.nodes)

        self._validate_districts()

        groups: dict[str, set[int]] = defaultdict(set)
        for node in self.nodes:
            groups[node.county].add(node.id)
        self.county_groups: dict[str, frozenset[int]] = {
            county: frozenset(members) for county, members in sorted(groups.items())
        }
        self.intact_counties: frozenset[str] = frozenset(
            county
            for county, members in self.county_groups.items()
            if len({self.initial_assignment[w] for w in members}) == 1
        )
        self.locked_wards: frozenset[int] = frozenset(
            w
            for county in self.intact_counties
            if len(self.county_groups[county]) >= 2
            for w in self.county_groups[county]
        )
        self.frozen_districts: frozenset[int] = frozenset(
            n.initial_district for n in self.nodes if n.frozen
        )
        # Every seed member of a frozen district is frozen, flagged or not
        self.frozen_wards: frozenset[int] = frozenset(
            w for w, d in enumerate(self.initial_assignment) if d in self.frozen_districts
        )

        self.total_population = math.fsum(self.population)
        self.ideal_population = self.total_population / self.num_districts
        self.average_ward_population = self.total_population / self.num_wards

        logger.debug(
            f"Dual graph built: {self.num_wards} wards, {len(self.edges)} edges, "
            f"{self.num_districts} districts",
            extra={
                "event_type": "graph_built",
                "wards": self.num_wards,
                "edges": len(self.edges),
                "districts": self.num_districts,
                "intact_counties": len(self.intact_counties),
                "frozen_districts": sorted(self.frozen_districts),
            },
        )

    def _validate_nodes(self) -> None:
        for index, node in enumerate(self.nodes):
            if node.id != index:
                raise GraphValidationError(
                    f"ward ids must be dense 0..{self.num_wards - 1}; found {node.id} at position {index}",
                    ward=node.id,
                )
            values = {
                "pop": node.population,
                "rep": node.rep_votes,
                "dem": node.dem_votes,
                "area": node.area,
                "outer_boundary": node.outer_boundary,
            }
            for name, value in values.items():
                if not math.isfinite(value) or value < 0:
                    raise GraphValidationError(
                        f"ward {node.id} has invalid {name}={value!r}", ward=node.id
                    )
            if node.area <= 0:
                raise GraphValidationError(
                    f"ward {node.id} has nonpositive area {node.area!r}", ward=node.id
                )
            if not 0 <= node.initial_district < self.num_districts:
                raise GraphValidationError(
                    f"ward {node.id} has district {node.initial_district} outside 0..{self.num_districts - 1}",
                    ward=node.id,
                    district=node.initial_district,
                )

    def _validate_edges(self) -> list[list[tuple[int, float]]]:
        neighbors: list[list[tuple[int, float]]] = [[] for _ in range(self.num_wards)]
        seen: set[tuple[int, int]] = set()
        for edge in self.edges:
            for endpoint in (edge.u, edge.v):
                if not 0 <= endpoint < self.num_wards:
                    raise GraphValidationError(
                        f"edge ({edge.u}, {edge.v}) references unknown ward {endpoint}",
                        ward=endpoint,
                    )
            if edge.u == edge.v:
                raise GraphValidationError(f"self-loop on ward {edge.u}", ward=edge.u)
            if not math.isfinite(edge.shared_length) or edge.shared_length <= 0:
                raise GraphValidationError(
                    f"edge ({edge.u}, {edge.v}) has invalid shared_length {edge.shared_length!r}"
                )
            pair = (min(edge.u, edge.v), max(edge.u, edge.v))
            if pair in seen:
                raise GraphValidationError(f"duplicate edge pair {pair}")
            seen.add(pair)
            neighbors[edge.u].append((edge.v, edge.shared_length))
            neighbors[edge.v].append((edge.u, edge.shared_length))
        return neighbors

    def _validate_districts(self) -> None:
        members = self.district_members(self.initial_assignment)
        for district, wards in enumerate(members):
            if not wards:
                raise GraphValidationError(
                    f"district {district} has no wards in the initial assignment",
                    district=district,
                )
            if not nx.is_connected(self.nx_graph.subgraph(wards)):
                raise DisconnectedDistrictError(
                    f"initial district {district} is not connected",
                    district=district,
                )

    def district_members(self, assignment: Sequence[int]) -> list[list[int]]:
        """Ward ids of each district under an assignment."""
        members: list[list[int]] = [[] for _ in range(self.num_districts)]
        for ward, district in enumerate(assignment):
            members[district].append(ward)
        return members

    @cached_property
    def nx_graph(self) -> nx.Graph:
        """networkx view (read-only use) with shared_length edge weights."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.num_wards))
        graph.add_weighted_edges_from(
            ((e.u, e.v, e.shared_length) for e in self.edges), weight="shared_length"
        )
        return graph

    def __repr__(self) -> str:
        return (
            f"DualGraph(wards={self.num_wards}, edges={len(self.edges)}, "
            f"districts={self.num_districts})"
        )
