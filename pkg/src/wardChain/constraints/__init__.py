"""Validity properties as flip predicates and a global checker."""

from .validity import (
    Flip,
    check_compactness,
    check_contiguity,
    check_county_and_frozen,
    check_population,
    compactness_score,
    compactness_term,
    is_valid_flip,
    plan_violations,
    score_from_stats,
)

__all__ = [
    "Flip",
    "check_population",
    "check_contiguity",
    "check_compactness",
    "check_county_and_frozen",
    "compactness_score",
    "compactness_term",
    "score_from_stats",
    "is_valid_flip",
    "plan_violations",
]
