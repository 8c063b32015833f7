"""
Validity predicates over single-ward flips.

A plan is valid when

1. every district is connected,
2. every district population is within pop_tolerance_wards average ward
   populations of the ideal (strictly),
3. its compactness score is at most compactness_budget times the seed
   plan's score,
4. counties intact in the seed plan stay intact,
5. the membership of frozen (majority-minority) districts is unchanged.

The flip predicates assume the current plan is valid and only look at the
two districts a flip touches. plan_violations re-checks a whole plan from
scratch and backs the seed check and the brute-force oracles.
"""

import math
from collections.abc import Sequence

import networkx as nx

from ..core.config_schema import CompactnessMode, ValidityConfig
from ..graph.dual_graph import DualGraph
from ..graph.plan import Plan, compute_caches

Flip = tuple[int, int]


def compactness_term(mode: CompactnessMode, perimeter: float, area: float) -> float:
    """One district's contribution to the plan-level compactness score."""
    if mode is CompactnessMode.PERIMETER:
        return perimeter
    ratio = perimeter * perimeter / area
    if mode is CompactnessMode.L1:
        return ratio
    return ratio * ratio


def score_from_stats(
    mode: CompactnessMode,
    perimeters: Sequence[float],
    areas: Sequence[float],
) -> float:
    return math.fsum(compactness_term(mode, p, a) for p, a in zip(perimeters, areas, strict=True))


def compactness_score(plan: Plan, mode: CompactnessMode) -> float:
    """
    PERIMETER: sum of district perimeters.
    L1: sum of per-district isoperimetric ratios perimeter**2 / area.
    L2: sum of squared isoperimetric ratios.
    """
    return score_from_stats(mode, plan.perimeter, plan.area)


def _terms(plan: Plan, mode: CompactnessMode) -> list[float]:
    key = f"compactness_terms:{mode.value}"
    terms = plan.memo.get(key)
    if terms is None:
        terms = [compactness_term(mode, p, a) for p, a in zip(plan.perimeter, plan.area, strict=True)]
        plan.memo[key] = terms
    return terms


def check_population(plan: Plan, graph: DualGraph, cfg: ValidityConfig, flip: Flip) -> bool:
    """Both affected districts stay strictly within tolerance of the ideal."""
    ward, to_district = flip
    source = plan.assignment[ward]
    moved = graph.population[ward]
    ideal = graph.ideal_population
    tolerance = cfg.pop_tolerance_wards * graph.average_ward_population
    return (
        abs(plan.population[source] - moved - ideal) < tolerance
        and abs(plan.population[to_district] + moved - ideal) < tolerance
    )


def check_contiguity(plan: Plan, graph: DualGraph, flip: Flip) -> bool:
    """ward touches to_district and its district stays connected without it."""
    ward, to_district = flip
    assignment = plan.assignment
    source = assignment[ward]
    if to_district == source or not plan.touches(ward, to_district):
        return False

    neighbors = graph.neighbors
    pending = {nbr for nbr, _ in neighbors[ward] if assignment[nbr] == source}
    if len(pending) <= 1:
        return True

    start = pending.pop()
    seen = {ward, start}
    stack = [start]
    while stack:
        current = stack.pop()
        for nbr, _ in neighbors[current]:
            if nbr in seen or assignment[nbr] != source:
                continue
            seen.add(nbr)
            if nbr in pending:
                pending.discard(nbr)
                if not pending:
                    return True
            stack.append(nbr)
    return False


def check_compactness(plan: Plan, cfg: ValidityConfig, seed_score: float, flip: Flip) -> bool:
    """Post-flip score, recomputed for the two affected districts, within budget."""
    ward, to_district = flip
    mode = cfg.compactness_mode
    source = plan.assignment[ward]
    perim_source, perim_target = plan.perimeters_after(ward, to_district)
    moved_area = plan.graph.area[ward]

    terms = list(_terms(plan, mode))
    terms[source] = compactness_term(mode, perim_source, plan.area[source] - moved_area)
    terms[to_district] = compactness_term(mode, perim_target, plan.area[to_district] + moved_area)
    return math.fsum(terms) <= cfg.compactness_budget * seed_score


def check_county_and_frozen(graph: DualGraph, cfg: ValidityConfig, flip: Flip) -> bool:
    """Frozen wards and frozen districts never change; locked county wards never move."""
    ward, to_district = flip
    if cfg.enforce_mm and (ward in graph.frozen_wards or to_district in graph.frozen_districts):
        return False
    if cfg.enforce_counties and ward in graph.locked_wards:
        return False
    return True


def is_valid_flip(
    plan: Plan,
    graph: DualGraph,
    cfg: ValidityConfig,
    seed_score: float,
    flip: Flip,
) -> bool:
    """All five properties hold after the flip; cheapest checks first."""
    ward, to_district = flip
    source = plan.assignment[ward]
    if to_district == source or plan.sizes[source] == 1:
        return False
    if not plan.touches(ward, to_district):
        return False
    return (
        check_county_and_frozen(graph, cfg, flip)
        and check_population(plan, graph, cfg, flip)
        and check_compactness(plan, cfg, seed_score, flip)
        and check_contiguity(plan, graph, flip)
    )


def plan_violations(
    plan: Plan,
    graph: DualGraph,
    cfg: ValidityConfig,
    seed_score: float,
) -> list[str]:
    """
    From-scratch check of all five properties over the whole plan.

    Uses only the assignment, never the plan's caches.

    Returns:
        Human-readable violations; empty when the plan is valid
    """
    assignment = plan.assignment
    violations: list[str] = []
    caches = compute_caches(graph, assignment)
    members = graph.district_members(assignment)

    for district, wards in enumerate(members):
        if not wards:
            violations.append(f"district {district} is empty")
        elif not nx.is_connected(graph.nx_graph.subgraph(wards)):
            violations.append(f"district {district} is not connected")

    tolerance = cfg.pop_tolerance_wards * graph.average_ward_population
    for district, pop in enumerate(caches.population):
        deviation = abs(pop - graph.ideal_population)
        if not deviation < tolerance:
            violations.append(
                f"district {district} population {pop:g} deviates {deviation:g} "
                f"from ideal {graph.ideal_population:g} (limit < {tolerance:g})"
            )

    score = score_from_stats(cfg.compactness_mode, caches.perimeter, caches.area)
    limit = cfg.compactness_budget * seed_score
    if not score <= limit:
        violations.append(
            f"{cfg.compactness_mode.value} compactness {score:g} exceeds budget {limit:g}"
        )

    if cfg.enforce_counties:
        for county in sorted(graph.intact_counties):
            wards = graph.county_groups[county]
            if len({assignment[w] for w in wards}) > 1:
                violations.append(f"intact county {county} is split")

    if cfg.enforce_mm:
        seed_members = graph.district_members(graph.initial_assignment)
        for district in sorted(graph.frozen_districts):
            if members[district] != seed_members[district]:
                violations.append(f"frozen district {district} changed membership")

    return violations
