"""Reversible single-flip chain and trajectory execution."""

from .engine import StepOutcome, propose, run_trajectory, step, validate_seed
from .random import ALGORITHM, ChainRandom
from .sinks import TRACE_HEADER, CsvTraceSink, MemoryTraceSink, TraceSink

__all__ = [
    "ChainRandom",
    "ALGORITHM",
    "StepOutcome",
    "propose",
    "step",
    "validate_seed",
    "run_trajectory",
    "TraceSink",
    "CsvTraceSink",
    "MemoryTraceSink",
    "TRACE_HEADER",
]
