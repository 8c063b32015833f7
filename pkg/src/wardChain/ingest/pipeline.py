"""
Precinct preprocessing.

Three steps turn a precinct map into something the dual graph can
represent:

1. island precincts are merged into the closest mainland precinct of the
   same district; the island stays one piece attached to its receiver,
2. precincts that are multi-polygons in the input are split into one
   precinct per part, with their own attributes divided in proportion to
   area; attached islands are never divided,
3. precincts lying inside another precinct are removed; their attributes
   go to the closest surviving precinct of the same district and their
   area fills the surrounding precinct's hole.

District-level population, votes and the efficiency gap are identical
before and after; run_pipeline checks this exactly.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, replace
from fractions import Fraction

from shapely import STRtree
from shapely.geometry import Polygon

from ..core.exceptions import ConservationError, IngestError
from ..core.logging import performance_logger
from ..election.metrics import efficiency_gap_of
from ..models.schemas import DistrictConservation, IngestReport, PrecinctMove
from .precincts import LENGTH_EPSILON, PrecinctGeometry, nearest, shared_length

logger = logging.getLogger(__name__)


def shared_totals(precincts: list[PrecinctGeometry]) -> dict[str, float]:
    """Total boundary each precinct shares with all others."""
    geometries = [p.geometry for p in precincts]
    tree = STRtree(geometries)
    totals = {p.id: 0.0 for p in precincts}
    for i, geometry in enumerate(geometries):
        for j in tree.query(geometry):
            j = int(j)
            if j <= i:
                continue
            length = shared_length(geometry, geometries[j])
            if length > LENGTH_EPSILON:
                totals[precincts[i].id] += length
                totals[precincts[j].id] += length
    return totals


def merge_islands(precincts: list[PrecinctGeometry]) -> tuple[list[PrecinctGeometry], list[PrecinctMove]]:
    """
    Merge every island precinct into its closest same-district mainland precinct.

    An island shares no boundary with any other precinct. Its attributes
    are added to the receiver and its geometry is attached whole as one
    of the receiver's islands; the island never becomes a part of the
    receiver's own geometry.

    Raises:
        IngestError: an island has no mainland precinct in its district
    """
    if len(precincts) < 2:
        return list(precincts), []

    totals = shared_totals(precincts)
    islands = sorted((p for p in precincts if totals[p.id] <= LENGTH_EPSILON), key=lambda p: p.id)
    if not islands:
        return list(precincts), []

    island_ids = {p.id for p in islands}
    mainland = [p for p in precincts if p.id not in island_ids]
    receivers = {p.id: p for p in mainland}
    moves = []
    for island in islands:
        found = nearest(island, [p for p in mainland if p.district == island.district])
        if found is None:
            raise IngestError(
                f"island precinct {island.id} has no mainland precinct in district {island.district}",
                precincts=[island.id],
                step="merge_islands",
            )
        target, distance = found
        receivers[target.id] = receivers[target.id].attach(island)
        moves.append(PrecinctMove(precinct=island.id, receiver=target.id, distance=distance))

    merged = [receivers[p.id] for p in mainland]
    logger.info(
        f"Merged {len(moves)} island precincts",
        extra={"event_type": "ingest_step", "step": "merge_islands", "removed": len(moves)},
    )
    return merged, moves


def _proportional_shares(value: Fraction, weights: list[Fraction]) -> list[Fraction]:
    """Split value by weights; the last share takes the remainder."""
    total = sum(weights, Fraction(0))
    shares = [value * weight / total for weight in weights[:-1]]
    shares.append(value - sum(shares, Fraction(0)))
    return shares


def _own_attributes(precinct: PrecinctGeometry) -> tuple[Fraction, Fraction, Fraction]:
    """Population and votes of a precinct without its attached islands."""
    return (
        precinct.population - sum((i.population for i in precinct.islands), Fraction(0)),
        precinct.rep_votes - sum((i.rep_votes for i in precinct.islands), Fraction(0)),
        precinct.dem_votes - sum((i.dem_votes for i in precinct.islands), Fraction(0)),
    )


def split_multipolygons(precincts: list[PrecinctGeometry]) -> tuple[list[PrecinctGeometry], dict[str, int]]:
    """
    Replace every precinct whose own geometry is multi-part with one precinct per part.

    Parts are ordered by their bounds and named '<id>_<n>' from 1. District,
    county and the frozen flag are inherited. Only the precinct's own
    attributes are divided by area; each attached island moves whole to
    the part nearest it.

    Raises:
        IngestError: a part has zero area
    """
    result: list[PrecinctGeometry] = []
    split: dict[str, int] = {}
    for precinct in precincts:
        if not precinct.is_multipart:
            result.append(precinct)
            continue
        parts = sorted(precinct.parts, key=lambda part: (part.bounds, part.area))
        areas = [Fraction(part.area) for part in parts]
        if any(area <= 0 for area in areas):
            raise IngestError(
                f"precinct {precinct.id} has a zero-area part",
                precincts=[precinct.id],
                step="split_multipolygons",
            )
        population, rep, dem = _own_attributes(precinct)
        populations = _proportional_shares(population, areas)
        reps = _proportional_shares(rep, areas)
        dems = _proportional_shares(dem, areas)
        pieces = [
            replace(
                precinct,
                id=f"{precinct.id}_{n + 1}",
                geometry=part,
                population=populations[n],
                rep_votes=reps[n],
                dem_votes=dems[n],
                islands=(),
            )
            for n, part in enumerate(parts)
        ]
        position = {piece.id: n for n, piece in enumerate(pieces)}
        for island in precinct.islands:
            found = nearest(island, pieces)
            assert found is not None
            n = position[found[0].id]
            pieces[n] = pieces[n].attach(island)
        result.extend(pieces)
        split[precinct.id] = len(parts)

    logger.info(
        f"Split {len(split)} multi-part precincts",
        extra={"event_type": "ingest_step", "step": "split_multipolygons", "split": len(split)},
    )
    return result, split


def _shell(precinct: PrecinctGeometry) -> Polygon:
    return Polygon(precinct.parts[0].exterior) if not precinct.is_multipart else Polygon()


def dissolve_contained(precincts: list[PrecinctGeometry]) -> tuple[list[PrecinctGeometry], list[PrecinctMove]]:
    """
    Remove precincts lying entirely inside another precinct's outer ring.

    Attributes go to the closest surviving precinct of the same district;
    geometry is unioned into the smallest surviving container.

    Raises:
        IngestError: a contained precinct has no surviving precinct in its district
    """
    shells = [_shell(p) for p in precincts]
    tree = STRtree(shells)
    containers: dict[str, list[int]] = defaultdict(list)
    for i, precinct in enumerate(precincts):
        for j in tree.query(precinct.geometry):
            j = int(j)
            if j != i and not shells[j].is_empty and shells[j].contains(precinct.geometry):
                containers[precinct.id].append(j)

    if not containers:
        return list(precincts), []

    survivors = {p.id: p for p in precincts if p.id not in containers}
    moves = []
    for precinct in sorted((p for p in precincts if p.id in containers), key=lambda p: p.id):
        found = nearest(precinct, [p for p in survivors.values() if p.district == precinct.district])
        if found is None:
            raise IngestError(
                f"contained precinct {precinct.id} has no surviving precinct in district {precinct.district}",
                precincts=[precinct.id],
                step="dissolve_contained",
            )
        receiver, distance = found
        surviving_containers = [precincts[j] for j in containers[precinct.id] if precincts[j].id in survivors]
        if surviving_containers:
            host = min(surviving_containers, key=lambda p: (_shell(p).area, p.id))
            survivors[host.id] = survivors[host.id].absorb(precinct, attributes=False)
        survivors[receiver.id] = survivors[receiver.id].absorb(precinct, geometry=False)
        moves.append(PrecinctMove(precinct=precinct.id, receiver=receiver.id, distance=distance))

    result = [survivors[p.id] for p in precincts if p.id in survivors]
    logger.info(
        f"Dissolved {len(moves)} contained precincts",
        extra={"event_type": "ingest_step", "step": "dissolve_contained", "removed": len(moves)},
    )
    return result, moves


@dataclass(frozen=True)
class DistrictTotals:
    population: dict[str, Fraction]
    rep_votes: dict[str, Fraction]
    dem_votes: dict[str, Fraction]

    @property
    def districts(self) -> list[str]:
        return sorted(self.population, key=district_sort_key)

    def efficiency_gap(self) -> Fraction:
        districts = self.districts
        return efficiency_gap_of(
            [self.rep_votes[d] for d in districts],
            [self.dem_votes[d] for d in districts],
        )


def district_sort_key(label: str) -> tuple[int, int, str]:
    """Numeric labels in numeric order, then everything else."""
    return (0, int(label), label) if label.lstrip("-").isdigit() else (1, 0, label)


def district_totals(precincts: list[PrecinctGeometry]) -> DistrictTotals:
    population: dict[str, Fraction] = defaultdict(Fraction)
    rep: dict[str, Fraction] = defaultdict(Fraction)
    dem: dict[str, Fraction] = defaultdict(Fraction)
    for precinct in precincts:
        population[precinct.district] += precinct.population
        rep[precinct.district] += precinct.rep_votes
        dem[precinct.district] += precinct.dem_votes
    return DistrictTotals(dict(population), dict(rep), dict(dem))


def conservation_rows(before: DistrictTotals, after: DistrictTotals) -> list[DistrictConservation]:
    districts = sorted(set(before.population) | set(after.population), key=district_sort_key)
    zero = Fraction(0)
    return [
        DistrictConservation(
            district=d,
            population_before=str(before.population.get(d, zero)),
            population_after=str(after.population.get(d, zero)),
            rep_before=str(before.rep_votes.get(d, zero)),
            rep_after=str(after.rep_votes.get(d, zero)),
            dem_before=str(before.dem_votes.get(d, zero)),
            dem_after=str(after.dem_votes.get(d, zero)),
        )
        for d in districts
    ]


@dataclass(frozen=True)
class PipelineResult:
    precincts: list[PrecinctGeometry]
    report: IngestReport


@performance_logger.performance_timer("run_pipeline")
def run_pipeline(precincts: list[PrecinctGeometry]) -> PipelineResult:
    """
    Apply the three steps and verify conservation.

    Raises:
        IngestError: a step failed
        ConservationError: any district total or the efficiency gap changed
    """
    before = district_totals(precincts)

    merged, island_moves = merge_islands(precincts)
    split, split_counts = split_multipolygons(merged)
    dissolved, dissolve_moves = dissolve_contained(split)

    totals = shared_totals(dissolved) if len(dissolved) > 1 else {}
    isolated = sorted(pid for pid, total in totals.items() if total <= LENGTH_EPSILON)
    if isolated:
        logger.warning(
            f"{len(isolated)} precincts share no boundary after preprocessing",
            extra={"event_type": "ingest_isolated", "precincts": isolated[:20]},
        )

    after = district_totals(dissolved)
    rows = conservation_rows(before, after)
    eg_before = eg_after = None
    if all(before.rep_votes[d] + before.dem_votes[d] > 0 for d in before.population):
        eg_before = str(before.efficiency_gap())
        eg_after = str(after.efficiency_gap())

    report = IngestReport(
        initial_count=len(precincts),
        after_merge_islands=len(merged),
        after_split_multipolygons=len(split),
        after_dissolve_contained=len(dissolved),
        islands_merged=island_moves,
        split_precincts=split_counts,
        dissolved=dissolve_moves,
        isolated_fragments=isolated,
        conservation=rows,
        efficiency_gap_before=eg_before,
        efficiency_gap_after=eg_after,
    )

    if not report.conserved:
        broken = [row.district for row in rows if not row.conserved]
        raise ConservationError(
            "district totals changed during preprocessing"
            + (f" in districts {broken}" if broken else " (efficiency gap differs)"),
            step="conservation",
            details={"districts": broken},
        )
    return PipelineResult(precincts=dissolved, report=report)
