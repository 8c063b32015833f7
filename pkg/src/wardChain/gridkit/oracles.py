"""
Brute-force oracles for small instances.

Everything here recomputes from scratch and is meant to be compared
against the incremental code paths: exhaustive enumeration of valid
plans, the flip-closure of the seed plan and a from-scratch flip check.
"""

import itertools
import logging
import math
from collections import deque
from collections.abc import Iterable, Sequence

import networkx as nx

from ..constraints.validity import compactness_score, is_valid_flip, plan_violations
from ..core.config import app_config
from ..core.config_schema import CompactnessMode, ValidityConfig
from ..core.exceptions import EnumerationLimitError, PlanError
from ..core.logging import performance_logger
from ..graph.dual_graph import DualGraph
from ..graph.plan import Plan, build_plan

logger = logging.getLogger(__name__)

PlanKey = tuple[int, ...]

_SLACK = 1e-9


def partition_of(assignment: Sequence[int]) -> frozenset[frozenset[int]]:
    """Unlabeled view of a plan: the set of its districts' ward sets."""
    groups: dict[int, set[int]] = {}
    for ward, district in enumerate(assignment):
        groups.setdefault(district, set()).add(ward)
    return frozenset(frozenset(wards) for wards in groups.values())


def oracle_valid_flip(
    graph: DualGraph,
    plan: Plan,
    vcfg: ValidityConfig,
    seed_score: float,
    flip: tuple[int, int],
) -> bool:
    """Rebuild the post-flip plan and test all five properties globally."""
    ward, to_district = flip
    if not 0 <= to_district < graph.num_districts or plan.assignment[ward] == to_district:
        return False
    assignment = list(plan.assignment)
    assignment[ward] = to_district
    try:
        post = build_plan(graph, assignment)
    except PlanError:
        return False
    return not plan_violations(post, graph, vcfg, seed_score)


class _Enumerator:
    """
    Depth-first labeled-plan search.

    Labels of non-frozen districts are interchangeable for every property,
    so the search only visits canonical labelings (a free label is opened
    only after all smaller free labels are in use) and expands each hit by
    permuting the free labels. Partial assignments are pruned by the
    population window, the partial cut length (PERIMETER mode) and
    sealed district fragments.
    """

    def __init__(self, graph: DualGraph, vcfg: ValidityConfig, seed_score: float, limit: int):
        self.graph = graph
        self.vcfg = vcfg
        self.seed_score = seed_score
        self.limit = limit
        self.explored = 0

        d = graph.num_districts
        self.order = self._ward_order()
        self.assignment: list[int] = [-1] * graph.num_wards
        self.pop = [0.0] * d
        self.size = [0] * d
        self.sealed = [False] * d
        self.open_nbrs = [len(graph.neighbors[w]) for w in range(graph.num_wards)]
        self.remaining_pop = graph.total_population

        tolerance = vcfg.pop_tolerance_wards * graph.average_ward_population
        self.pop_high = graph.ideal_population + tolerance
        self.pop_low = graph.ideal_population - tolerance

        self.cut_budget = math.inf
        if vcfg.compactness_mode is CompactnessMode.PERIMETER:
            outer = math.fsum(graph.outer_boundary)
            self.cut_budget = (vcfg.compactness_budget * seed_score - outer) / 2

        pinned = graph.frozen_districts if vcfg.enforce_mm else frozenset()
        self.free_labels = [x for x in range(d) if x not in pinned]
        self.pinned_ward: list[int | None] = [
            graph.initial_assignment[w] if w in graph.frozen_wards and vcfg.enforce_mm else None
            for w in range(graph.num_wards)
        ]

        self.county_of: list[str | None] = [None] * graph.num_wards
        if vcfg.enforce_counties:
            for county in graph.intact_counties:
                if len(graph.county_groups[county]) >= 2:
                    for ward in graph.county_groups[county]:
                        self.county_of[ward] = county
        self.county_label: dict[str, int] = {}
        self.county_owner: dict[str, int] = {}

        self.results: list[PlanKey] = []

    def _ward_order(self) -> list[int]:
        """Ward id order when every ward touches an earlier one, else BFS order."""
        neighbors = self.graph.neighbors
        if all(any(nbr < w for nbr, _ in neighbors[w]) for w in range(1, self.graph.num_wards)):
            return list(range(self.graph.num_wards))
        order: list[int] = []
        seen: set[int] = set()
        for start in range(self.graph.num_wards):
            if start in seen:
                continue
            component = list(nx.bfs_tree(self.graph.nx_graph, start))
            seen.update(component)
            order.extend(component)
        return order

    def run(self) -> list[PlanKey]:
        self._extend(0, 0.0)
        self.results.sort()
        return self.results

    def _candidates(self, ward: int) -> list[int]:
        pinned = self.pinned_ward[ward]
        if pinned is not None:
            return [pinned]
        candidates = []
        for label in self.free_labels:
            candidates.append(label)
            if self.size[label] == 0:
                break
        return candidates

    def _sealed_component_ok(self, ward: int, district: int) -> bool:
        """If ward's fragment of district can no longer grow, it must be all of it."""
        graph = self.graph
        assignment = self.assignment
        component = {ward}
        stack = [ward]
        while stack:
            current = stack.pop()
            if self.open_nbrs[current] > 0:
                return True
            for nbr, _ in graph.neighbors[current]:
                if nbr not in component and assignment[nbr] == district:
                    component.add(nbr)
                    stack.append(nbr)
        if len(component) != self.size[district]:
            return False
        if not self.pop[district] > self.pop_low:
            return False
        self.sealed[district] = True
        return True

    def _extend(self, index: int, cut: float) -> None:
        graph = self.graph
        if index == len(self.order):
            self._accept()
            return

        ward = self.order[index]
        unused = sum(1 for s in self.size if s == 0)
        remaining_wards = len(self.order) - index
        ward_pop = graph.population[ward]
        county = self.county_of[ward]

        for district in self._candidates(ward):
            self.explored += 1
            if self.explored > self.limit:
                raise EnumerationLimitError(
                    f"enumeration explored more than {self.limit} assignments", limit=self.limit
                )
            if self.sealed[district]:
                continue
            if unused - (self.size[district] == 0) > remaining_wards - 1:
                continue
            if county is not None and self.county_label.get(county, district) != district:
                continue
            if not self.pop[district] + ward_pop < self.pop_high:
                continue

            added_cut = 0.0
            for nbr, length in graph.neighbors[ward]:
                other = self.assignment[nbr]
                if other >= 0 and other != district:
                    added_cut += length
            if cut + added_cut > self.cut_budget + _SLACK * max(1.0, abs(self.cut_budget)):
                continue

            deficit = 0.0
            for label, pop in enumerate(self.pop):
                level = pop + ward_pop if label == district else pop
                if level <= self.pop_low:
                    deficit += self.pop_low - level
            if self.remaining_pop - ward_pop + _SLACK < deficit:
                continue

            self._place(ward, district, county)
            sealed_before = list(self.sealed)
            ok = self._sealed_component_ok(ward, district)
            if ok:
                for nbr, _ in graph.neighbors[ward]:
                    other = self.assignment[nbr]
                    if other >= 0 and self.open_nbrs[nbr] == 0 and not self._sealed_component_ok(nbr, other):
                        ok = False
                        break
            if ok:
                self._extend(index + 1, cut + added_cut)
            self.sealed = sealed_before
            self._unplace(ward, district, county)

    def _place(self, ward: int, district: int, county: str | None) -> None:
        self.assignment[ward] = district
        self.pop[district] += self.graph.population[ward]
        self.size[district] += 1
        self.remaining_pop -= self.graph.population[ward]
        for nbr, _ in self.graph.neighbors[ward]:
            self.open_nbrs[nbr] -= 1
        if county is not None and county not in self.county_label:
            self.county_label[county] = district
            self.county_owner[county] = ward

    def _unplace(self, ward: int, district: int, county: str | None) -> None:
        for nbr, _ in self.graph.neighbors[ward]:
            self.open_nbrs[nbr] += 1
        self.remaining_pop += self.graph.population[ward]
        self.size[district] -= 1
        self.pop[district] -= self.graph.population[ward]
        self.assignment[ward] = -1
        if county is not None and self.county_owner.get(county) == ward:
            del self.county_label[county]
            del self.county_owner[county]

    def _accept(self) -> None:
        if any(s == 0 for s in self.size):
            return
        plan = build_plan(self.graph, self.assignment)
        if plan_violations(plan, self.graph, self.vcfg, self.seed_score):
            return
        free = self.free_labels
        for permutation in itertools.permutations(free):
            relabel = dict(zip(free, permutation, strict=True))
            self.results.append(tuple(relabel.get(x, x) for x in self.assignment))


@performance_logger.performance_timer("enumerate_valid_plans")
def enumerate_valid_plans(
    graph: DualGraph,
    vcfg: ValidityConfig,
    seed_plan: Plan,
    limit: int | None = None,
) -> list[PlanKey]:
    """
    Every labeled plan satisfying the five properties relative to the seed.

    Returns:
        Assignment tuples in ascending lexicographic order

    Raises:
        EnumerationLimitError: more than limit partial assignments explored
            (default WARDCHAIN_ENUMERATION_LIMIT)
    """
    seed_score = compactness_score(seed_plan, vcfg.compactness_mode)
    enumerator = _Enumerator(graph, vcfg, seed_score, limit or app_config.enumeration_limit)
    results = enumerator.run()
    logger.info(
        f"Enumerated {len(results)} valid plans ({enumerator.explored} assignments explored)",
        extra={
            "event_type": "enumeration_complete",
            "plans": len(results),
            "explored": enumerator.explored,
        },
    )
    return results


def valid_flips(plan: Plan, graph: DualGraph, vcfg: ValidityConfig, seed_score: float) -> list[tuple[int, int]]:
    """All valid flips of a plan, in (ward, district) order."""
    return [
        pair for pair in sorted(plan.boundary_pairs)
        if is_valid_flip(plan, graph, vcfg, seed_score, pair)
    ]


def reachable_plans(
    graph: DualGraph,
    vcfg: ValidityConfig,
    seed_plan: Plan,
    limit: int | None = None,
) -> list[PlanKey]:
    """
    Breadth-first closure of the seed plan under valid single flips.

    This is the support of the chain's stationary distribution.

    Raises:
        EnumerationLimitError: more than limit plans reached
    """
    limit = limit or app_config.enumeration_limit
    seed_score = compactness_score(seed_plan, vcfg.compactness_mode)
    start = seed_plan.key()
    seen = {start}
    queue: deque[PlanKey] = deque([start])
    while queue:
        key = queue.popleft()
        plan = build_plan(graph, key)
        for ward, district in valid_flips(plan, graph, vcfg, seed_score):
            child = list(key)
            child[ward] = district
            child_key = tuple(child)
            if child_key not in seen:
                seen.add(child_key)
                if len(seen) > limit:
                    raise EnumerationLimitError(
                        f"more than {limit} plans reachable from the seed", limit=limit
                    )
                queue.append(child_key)
    return sorted(seen)


def flip_mismatches(
    graph: DualGraph,
    plan: Plan,
    vcfg: ValidityConfig,
    seed_score: float,
    pairs: Iterable[tuple[int, int]] | None = None,
) -> list[tuple[int, int]]:
    """(ward, district) pairs where the incremental and oracle checks disagree."""
    if pairs is None:
        pairs = ((w, d) for w in range(graph.num_wards) for d in range(graph.num_districts))
    return [
        pair for pair in pairs
        if is_valid_flip(plan, graph, vcfg, seed_score, pair)
        != oracle_valid_flip(graph, plan, vcfg, seed_score, pair)
    ]
