"""Proxy election and efficiency-gap label."""

from .metrics import (
    district_winner,
    efficiency_gap,
    efficiency_gap_of,
    election_result,
    label,
    seats,
    wasted_votes,
)

__all__ = [
    "district_winner",
    "wasted_votes",
    "efficiency_gap_of",
    "efficiency_gap",
    "label",
    "election_result",
    "seats",
]
