"""
Outlier rank of the seed plan on its own trajectory.

epsilon is the fraction of trajectory states whose label is at least the
seed's label. The seed state is the first observation and counts itself,
so epsilon >= 1 / total_states. A state drawn from the chain's stationary
distribution is an epsilon-outlier of its trajectory with probability at
most sqrt(2 * epsilon), which gives the p-value.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np

from ..core.config_schema import ChainConfig, ValidityConfig
from ..core.exceptions import ContractViolationError, NumericalFaultError
from ..models.schemas import ElectionResult, EpsilonReport

logger = logging.getLogger(__name__)

_UNIFORM_BLOCK = 4096


class LabelReservoir:
    """Uniform reservoir sample of a label stream (Algorithm R)."""

    def __init__(self, capacity: int, rng: np.random.Generator):
        if capacity < 1:
            raise ContractViolationError("reservoir capacity must be positive", contract="reservoir.capacity")
        self.capacity = capacity
        self.samples: list[float] = []
        self.seen = 0
        self._rng = rng
        self._uniforms: list[float] = []

    def _uniform(self) -> float:
        if not self._uniforms:
            self._uniforms = self._rng.random(_UNIFORM_BLOCK).tolist()
            self._uniforms.reverse()
        return self._uniforms.pop()

    def add(self, value: float) -> None:
        self.seen += 1
        if len(self.samples) < self.capacity:
            self.samples.append(value)
            return
        slot = int(self._uniform() * self.seen)
        if slot < self.capacity:
            self.samples[slot] = value


class EpsilonAccumulator:
    """
    Streaming counter for one trajectory.

    Not mergeable across trajectories; the test is defined per trajectory.
    """

    def __init__(self, seed_label: float, reservoir: LabelReservoir | None = None):
        if not math.isfinite(seed_label):
            raise NumericalFaultError("seed label is not finite", value=seed_label)
        self.seed_label = seed_label
        self.total_states = 0
        self.as_bad_count = 0
        self.label_min = math.inf
        self.label_max = -math.inf
        self.reservoir = reservoir

    def observe(self, label: float) -> None:
        """
        Count one trajectory state.

        Raises:
            NumericalFaultError: label is NaN or infinite
        """
        if not math.isfinite(label):
            raise NumericalFaultError(
                f"non-finite label at state {self.total_states}", value=label
            )
        self.total_states += 1
        if label >= self.seed_label:
            self.as_bad_count += 1
        if label < self.label_min:
            self.label_min = label
        if label > self.label_max:
            self.label_max = label
        if self.reservoir is not None:
            self.reservoir.add(label)

    @property
    def epsilon(self) -> float:
        if self.total_states == 0:
            raise ContractViolationError("no states observed", contract="epsilon.nonempty")
        return self.as_bad_count / self.total_states


def observe(acc: EpsilonAccumulator, label: float) -> None:
    acc.observe(label)


def p_value(epsilon: float) -> float:
    """
    Significance bound min(1, sqrt(2 * epsilon)).

    Raises:
        ContractViolationError: epsilon outside (0, 1]
    """
    if not (math.isfinite(epsilon) and 0 < epsilon <= 1):
        raise ContractViolationError(
            f"epsilon must lie in (0, 1], got {epsilon!r}", contract="p_value.range"
        )
    return min(1.0, math.sqrt(2.0 * epsilon))


def label_histogram(samples: Sequence[float], bins: int) -> list[tuple[float, int]]:
    """(bin_left, count) pairs over the sampled labels."""
    if not samples:
        return []
    counts, edges = np.histogram(np.asarray(samples, dtype=float), bins=bins)
    return [(float(left), int(count)) for left, count in zip(edges[:-1], counts, strict=True)]


def finalize(
    acc: EpsilonAccumulator,
    validity: ValidityConfig,
    chain: ChainConfig,
    *,
    label: str | None = None,
    accepted_steps: int = 0,
    seed_result: ElectionResult | None = None,
    graph_hash: str | None = None,
    rng_algorithm: str | None = None,
    histogram_bins: int | None = None,
) -> EpsilonReport:
    """
    Close the accumulator into a report row.

    Raises:
        ContractViolationError: nothing was observed
    """
    if acc.total_states < 1:
        raise ContractViolationError(
            "cannot finalize an empty accumulator", contract="finalize.nonempty"
        )
    epsilon = acc.as_bad_count / acc.total_states
    steps_taken = acc.total_states - 1

    histogram = None
    if acc.reservoir is not None and histogram_bins:
        histogram = label_histogram(acc.reservoir.samples, histogram_bins)

    report = EpsilonReport(
        seed_label=acc.seed_label,
        total_states=acc.total_states,
        as_bad_count=acc.as_bad_count,
        epsilon=epsilon,
        p_value=p_value(epsilon),
        mode=validity.compactness_mode,
        enforce_counties=validity.enforce_counties,
        enforce_mm=validity.enforce_mm,
        rng_seed=chain.rng_seed,
        steps=chain.steps,
        label=label,
        pop_tolerance_wards=validity.pop_tolerance_wards,
        compactness_budget=validity.compactness_budget,
        lazy=chain.lazy,
        record_every=chain.record_every,
        accepted_steps=accepted_steps,
        acceptance_rate=accepted_steps / steps_taken if steps_taken else 0.0,
        label_min=acc.label_min,
        label_max=acc.label_max,
        seed_result=seed_result,
        graph_hash=graph_hash,
        rng_algorithm=rng_algorithm,
        histogram=histogram,
    )
    logger.debug(
        f"Finalized epsilon={epsilon:.6g} p={report.p_value:.6g}",
        extra={
            "event_type": "epsilon_finalized",
            "total_states": acc.total_states,
            "as_bad_count": acc.as_bad_count,
        },
    )
    return report
