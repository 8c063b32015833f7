"""
Proxy elections and the efficiency gap.

Each district is won by strict two-party majority. Wasted votes are all of
the loser's votes plus the winner's votes above half the district total
(real-valued, no floor). The efficiency gap is

    (sum of Democratic wasted votes - sum of Republican wasted votes) / total votes

so positive values mean Democrats waste more votes and the plan favors
Republicans; a larger label is a "worse" plan.

An exact tie wastes both parties' votes and credits the seat to no one.
"""

import math
from collections.abc import Sequence
from fractions import Fraction
from typing import Literal, TypeVar

from ..core.exceptions import ElectionError, NumericalFaultError
from ..graph.plan import Plan
from ..models.schemas import DistrictTally, ElectionResult

Votes = TypeVar("Votes", float, Fraction)

Winner = Literal["rep", "dem", "tie"]


def _total(values: Sequence[Votes]) -> Votes:
    if values and all(isinstance(v, Fraction) for v in values):
        return sum(values, Fraction(0))  # type: ignore[return-value]
    return math.fsum(values)  # type: ignore[return-value]


def district_winner(rep: Votes, dem: Votes) -> Winner:
    if rep > dem:
        return "rep"
    if dem > rep:
        return "dem"
    return "tie"


def wasted_votes(rep: Votes, dem: Votes) -> tuple[Votes, Votes]:
    """(wasted Republican, wasted Democratic) votes of one district."""
    total = rep + dem
    winner = district_winner(rep, dem)
    if winner == "rep":
        return rep - total / 2, dem
    if winner == "dem":
        return rep, dem - total / 2
    return rep, dem


def efficiency_gap_of(reps: Sequence[Votes], dems: Sequence[Votes]) -> Votes:
    """
    Efficiency gap of per-district tallies.

    Works on floats and on Fractions; Fractions give an exact result.

    Raises:
        ElectionError: a district has no votes
    """
    wasted_rep: list[Votes] = []
    wasted_dem: list[Votes] = []
    totals: list[Votes] = []
    for district, (rep, dem) in enumerate(zip(reps, dems, strict=True)):
        total = rep + dem
        if not total > 0:
            raise ElectionError(f"district {district} has no votes", district=district)
        w_rep, w_dem = wasted_votes(rep, dem)
        wasted_rep.append(w_rep)
        wasted_dem.append(w_dem)
        totals.append(total)

    difference = _total(wasted_dem + [-w for w in wasted_rep])
    return difference / _total(totals)


def efficiency_gap(plan: Plan) -> float:
    """Efficiency gap of a plan from its district caches."""
    value = efficiency_gap_of(plan.rep_votes, plan.dem_votes)
    if not math.isfinite(value):
        raise NumericalFaultError("efficiency gap is not finite", value=value)
    return value


def label(plan: Plan) -> float:
    """The trajectory label of a plan; memoized until the plan next mutates."""
    value = plan.memo.get("label")
    if value is None:
        value = efficiency_gap(plan)
        plan.memo["label"] = value
    return value


def election_result(plan: Plan) -> ElectionResult:
    """Per-district tallies, seats and efficiency gap of a plan."""
    tallies = [
        DistrictTally(district=d, rep=rep, dem=dem, winner=district_winner(rep, dem))
        for d, (rep, dem) in enumerate(zip(plan.rep_votes, plan.dem_votes, strict=True))
    ]
    return ElectionResult(
        tallies=tallies,
        rep_seats=sum(1 for t in tallies if t.winner == "rep"),
        dem_seats=sum(1 for t in tallies if t.winner == "dem"),
        tied_districts=[t.district for t in tallies if t.winner == "tie"],
        efficiency_gap=label(plan),
    )


def seats(result: ElectionResult) -> tuple[int, int]:
    """(Republican seats, Democratic seats); tied districts count for neither."""
    return result.rep_seats, result.dem_seats
