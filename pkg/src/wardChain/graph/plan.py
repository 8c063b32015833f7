"""
Districting plans with incrementally maintained district statistics.

A Plan owns the assignment of wards to districts plus per-district caches
(population, votes, area, perimeter, size) and the set of boundary pairs.
Single-ward flips update everything in time proportional to the ward's
degree and return a FlipDelta that undoes the flip exactly.
"""

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from numbers import Integral
from typing import Any

from ..core.exceptions import ContractViolationError, PlanError
from .dual_graph import DualGraph

_plan_tokens = itertools.count(1)


@dataclass(frozen=True, slots=True)
class DistrictCaches:
    """Per-district statistics of an assignment."""
    population: tuple[float, ...]
    rep_votes: tuple[float, ...]
    dem_votes: tuple[float, ...]
    area: tuple[float, ...]
    perimeter: tuple[float, ...]
    sizes: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class FlipDelta:
    """Everything needed to undo one flip; valid only for the next revert."""
    ward: int
    from_district: int
    to_district: int
    prior: tuple[float, ...]
    version: int
    plan_token: int


def compute_caches(graph: DualGraph, assignment: Sequence[int]) -> DistrictCaches:
    """From-scratch district statistics, accumulated in ward id order."""
    d = graph.num_districts
    pop = [0.0] * d
    rep = [0.0] * d
    dem = [0.0] * d
    area = [0.0] * d
    perim = [0.0] * d
    sizes = [0] * d
    for ward, district in enumerate(assignment):
        pop[district] += graph.population[ward]
        rep[district] += graph.rep_votes[ward]
        dem[district] += graph.dem_votes[ward]
        area[district] += graph.area[ward]
        sizes[district] += 1
        boundary = graph.outer_boundary[ward]
        for nbr, length in graph.neighbors[ward]:
            if assignment[nbr] != district:
                boundary += length
        perim[district] += boundary
    return DistrictCaches(
        population=tuple(pop),
        rep_votes=tuple(rep),
        dem_votes=tuple(dem),
        area=tuple(area),
        perimeter=tuple(perim),
        sizes=tuple(sizes),
    )


def compute_boundary_pairs(graph: DualGraph, assignment: Sequence[int]) -> set[tuple[int, int]]:
    """All (ward, foreign district) pairs where the ward touches that district."""
    pairs: set[tuple[int, int]] = set()
    for ward, district in enumerate(assignment):
        for nbr, _ in graph.neighbors[ward]:
            other = assignment[nbr]
            if other != district:
                pairs.add((ward, other))
    return pairs


class Plan:
    """
    Mutable assignment of wards to districts.

    Single writer: one chain owns one Plan. Parallel trajectories each build
    a private Plan from the shared, read-only DualGraph.
    """

    __slots__ = (
        "graph", "assignment", "population", "rep_votes", "dem_votes", "area",
        "perimeter", "sizes", "boundary_pairs", "_nbr_counts", "_version",
        "_token", "memo",
    )

    def __init__(self, graph: DualGraph, assignment: Sequence[int]):
        self.graph = graph
        self.assignment: list[int] = list(assignment)

        caches = compute_caches(graph, self.assignment)
        self.population: list[float] = list(caches.population)
        self.rep_votes: list[float] = list(caches.rep_votes)
        self.dem_votes: list[float] = list(caches.dem_votes)
        self.area: list[float] = list(caches.area)
        self.perimeter: list[float] = list(caches.perimeter)
        self.sizes: list[int] = list(caches.sizes)

        self._nbr_counts: list[dict[int, int]] = []
        for ward in range(graph.num_wards):
            counts: dict[int, int] = {}
            for nbr, _ in graph.neighbors[ward]:
                district = self.assignment[nbr]
                counts[district] = counts.get(district, 0) + 1
            self._nbr_counts.append(counts)

        self.boundary_pairs: set[tuple[int, int]] = compute_boundary_pairs(graph, self.assignment)
        self._version = 0
        self._token = next(_plan_tokens)
        # Derived values (the efficiency-gap label); cleared on every mutation
        self.memo: dict[str, Any] = {}

    @property
    def num_districts(self) -> int:
        return self.graph.num_districts

    @property
    def version(self) -> int:
        """Mutation counter; bumps on every apply and revert."""
        return self._version

    def touches(self, ward: int, district: int) -> bool:
        """True iff ward has a neighbor in district."""
        return self._nbr_counts[ward].get(district, 0) > 0

    def caches(self) -> DistrictCaches:
        """Snapshot of the incrementally maintained caches."""
        return DistrictCaches(
            population=tuple(self.population),
            rep_votes=tuple(self.rep_votes),
            dem_votes=tuple(self.dem_votes),
            area=tuple(self.area),
            perimeter=tuple(self.perimeter),
            sizes=tuple(self.sizes),
        )

    def key(self) -> tuple[int, ...]:
        """Hashable identity of the labeled plan."""
        return tuple(self.assignment)

    def members(self) -> list[list[int]]:
        return self.graph.district_members(self.assignment)

    def copy(self) -> "Plan":
        """Independent plan with the same assignment and caches."""
        clone = object.__new__(Plan)
        clone.graph = self.graph
        clone.assignment = list(self.assignment)
        clone.population = list(self.population)
        clone.rep_votes = list(self.rep_votes)
        clone.dem_votes = list(self.dem_votes)
        clone.area = list(self.area)
        clone.perimeter = list(self.perimeter)
        clone.sizes = list(self.sizes)
        clone._nbr_counts = [dict(counts) for counts in self._nbr_counts]
        clone.boundary_pairs = set(self.boundary_pairs)
        clone._version = 0
        clone._token = next(_plan_tokens)
        clone.memo = dict(self.memo)
        return clone

    def perimeters_after(self, ward: int, to_district: int) -> tuple[float, float]:
        """
        Perimeters of the source and target districts if ward moved.

        Shared by apply_flip and the compactness predicate so both see
        identical floating-point values.
        """
        graph = self.graph
        assignment = self.assignment
        source = assignment[ward]
        outer = graph.outer_boundary[ward]
        shift_source = -outer
        shift_target = outer
        for nbr, length in graph.neighbors[ward]:
            district = assignment[nbr]
            if district == source:
                shift_source += length
                shift_target += length
            elif district == to_district:
                shift_source -= length
                shift_target -= length
            else:
                shift_source -= length
                shift_target += length
        return (
            self.perimeter[source] + shift_source,
            self.perimeter[to_district] + shift_target,
        )

    def apply_flip(self, ward: int, to_district: int) -> FlipDelta:
        """
        Move ward to to_district, updating every cache incrementally.

        Raises:
            PlanError: unknown ward or district, a flip to the ward's own
                district, or a flip that would empty the source district
        """
        if not 0 <= ward < self.graph.num_wards:
            raise PlanError(f"unknown ward {ward}", ward=ward)
        if not 0 <= to_district < self.graph.num_districts:
            raise PlanError(f"unknown district {to_district}", district=to_district)
        source = self.assignment[ward]
        if source == to_district:
            raise PlanError(
                f"ward {ward} is already in district {to_district}",
                ward=ward,
                district=to_district,
            )
        if self.sizes[source] == 1:
            raise PlanError(
                f"flipping ward {ward} would empty district {source}",
                ward=ward,
                district=source,
            )

        graph = self.graph
        prior = (
            self.population[source], self.population[to_district],
            self.rep_votes[source], self.rep_votes[to_district],
            self.dem_votes[source], self.dem_votes[to_district],
            self.area[source], self.area[to_district],
            self.perimeter[source], self.perimeter[to_district],
        )

        perim_source, perim_target = self.perimeters_after(ward, to_district)
        self.perimeter[source] = perim_source
        self.perimeter[to_district] = perim_target

        pop = graph.population[ward]
        self.population[source] -= pop
        self.population[to_district] += pop
        rep = graph.rep_votes[ward]
        self.rep_votes[source] -= rep
        self.rep_votes[to_district] += rep
        dem = graph.dem_votes[ward]
        self.dem_votes[source] -= dem
        self.dem_votes[to_district] += dem
        area = graph.area[ward]
        self.area[source] -= area
        self.area[to_district] += area

        self._move(ward, source, to_district)
        self._version += 1
        return FlipDelta(
            ward=ward,
            from_district=source,
            to_district=to_district,
            prior=prior,
            version=self._version,
            plan_token=self._token,
        )

    def revert_flip(self, delta: FlipDelta) -> None:
        """
        Undo the immediately preceding apply_flip exactly.

        Raises:
            ContractViolationError: the delta belongs to another plan or is
                stale (any mutation happened after it was produced)
        """
        if delta.plan_token != self._token:
            raise ContractViolationError(
                "flip delta was produced by a different plan",
                contract="revert_flip.same_plan",
            )
        if delta.version != self._version:
            raise ContractViolationError(
                f"stale flip delta (delta version {delta.version}, plan version {self._version})",
                contract="revert_flip.immediately_preceding",
            )

        source, target = delta.from_district, delta.to_district
        self._move(delta.ward, target, source)
        (
            self.population[source], self.population[target],
            self.rep_votes[source], self.rep_votes[target],
            self.dem_votes[source], self.dem_votes[target],
            self.area[source], self.area[target],
            self.perimeter[source], self.perimeter[target],
        ) = delta.prior
        self._version += 1

    def _move(self, ward: int, source: int, target: int) -> None:
        """Integer and set bookkeeping of a move; exact in both directions."""
        self.assignment[ward] = target
        self.sizes[source] -= 1
        self.sizes[target] += 1
        self.memo.clear()

        pairs = self.boundary_pairs
        counts = self._nbr_counts
        assignment = self.assignment

        pairs.discard((ward, target))
        if counts[ward].get(source, 0) > 0:
            pairs.add((ward, source))

        for nbr, _ in self.graph.neighbors[ward]:
            nbr_counts = counts[nbr]
            remaining = nbr_counts[source] - 1
            if remaining:
                nbr_counts[source] = remaining
            else:
                del nbr_counts[source]
                if assignment[nbr] != source:
                    pairs.discard((nbr, source))
            nbr_counts[target] = nbr_counts.get(target, 0) + 1
            if assignment[nbr] != target:
                pairs.add((nbr, target))

    def __repr__(self) -> str:
        return f"Plan(districts={self.num_districts}, sizes={self.sizes}, version={self._version})"


def build_plan(graph: DualGraph, assignment: Sequence[int] | Mapping[int, int] | None = None) -> Plan:
    """
    Build a plan with every cache computed from scratch.

    Args:
        graph: The dual graph
        assignment: Ward -> district as a sequence indexed by ward id or a
            mapping covering every ward; the graph's initial districts when
            omitted

    Raises:
        PlanError: unknown ward or district, missing wards, or an empty district
    """
    if assignment is None:
        values = list(graph.initial_assignment)
    elif isinstance(assignment, Mapping):
        unknown = [w for w in assignment if not 0 <= w < graph.num_wards]
        if unknown:
            raise PlanError(f"assignment references unknown ward {unknown[0]}", ward=unknown[0])
        missing = [w for w in range(graph.num_wards) if w not in assignment]
        if missing:
            raise PlanError(f"assignment misses ward {missing[0]}", ward=missing[0])
        values = [assignment[w] for w in range(graph.num_wards)]
    else:
        values = list(assignment)
        if len(values) != graph.num_wards:
            raise PlanError(
                f"assignment has {len(values)} entries for {graph.num_wards} wards"
            )

    for ward, district in enumerate(values):
        if not isinstance(district, Integral) or not 0 <= district < graph.num_districts:
            raise PlanError(
                f"ward {ward} assigned to unknown district {district!r}",
                ward=ward,
                district=int(district) if isinstance(district, Integral) else None,
            )
    values = [int(district) for district in values]

    sizes = [0] * graph.num_districts
    for district in values:
        sizes[district] += 1
    for district, size in enumerate(sizes):
        if size == 0:
            raise PlanError(f"district {district} is empty", district=district)

    return Plan(graph, values)
