"""Outlier rank and significance of the seed plan."""

from .outliers import (
    EpsilonAccumulator,
    LabelReservoir,
    finalize,
    label_histogram,
    observe,
    p_value,
)

__all__ = [
    "EpsilonAccumulator",
    "LabelReservoir",
    "observe",
    "p_value",
    "finalize",
    "label_histogram",
]
