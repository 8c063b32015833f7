"""
The single-ward-flip chain.

Proposals are uniform over the fixed universe of (ward, district) pairs,
so the proposal kernel is symmetric and the stationary distribution is
uniform over valid plans. An invalid proposal leaves the plan unchanged
and the step still counts as a trajectory state.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from ..constraints.validity import compactness_score, is_valid_flip, plan_violations
from ..core.config_schema import ChainConfig, ValidityConfig
from ..core.exceptions import OutputError, SeedPlanError
from ..core.logging import performance_logger
from ..election.metrics import election_result, label
from ..graph.dual_graph import DualGraph
from ..graph.plan import Plan
from ..models.schemas import EpsilonReport, TrajectoryRecord
from ..stats.outliers import EpsilonAccumulator, LabelReservoir, finalize
from .random import ChainRandom
from .sinks import TraceSink

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class StepOutcome:
    """Result of one chain step; label is the plan's label after the step."""
    proposal: tuple[int, int] | None
    accepted: bool
    label: float


def propose(rng: ChainRandom, graph: DualGraph) -> tuple[int, int]:
    """Uniform (ward, to_district) over all wards x all districts."""
    return rng.pair(graph.num_wards, graph.num_districts)


def step(
    plan: Plan,
    graph: DualGraph,
    cfg: ValidityConfig,
    seed_score: float,
    rng: ChainRandom,
    lazy: bool,
) -> StepOutcome:
    """Advance plan by one step; it stays valid whatever is proposed."""
    if lazy and rng.coin():
        return StepOutcome(proposal=None, accepted=False, label=label(plan))

    flip = propose(rng, graph)
    if is_valid_flip(plan, graph, cfg, seed_score, flip):
        plan.apply_flip(*flip)
        return StepOutcome(proposal=flip, accepted=True, label=label(plan))
    return StepOutcome(proposal=flip, accepted=False, label=label(plan))


def validate_seed(plan: Plan, graph: DualGraph, cfg: ValidityConfig) -> float:
    """
    Check the seed plan and return its compactness score.

    Raises:
        SeedPlanError: the seed violates any property it is tested under
    """
    seed_score = compactness_score(plan, cfg.compactness_mode)
    violations = plan_violations(plan, graph, cfg, seed_score)
    if violations:
        raise SeedPlanError(
            f"seed plan is not valid: {violations[0]}"
            + (f" (+{len(violations) - 1} more)" if len(violations) > 1 else ""),
            violations=violations,
        )
    return seed_score


def _emit(sinks: Sequence[TraceSink], record: TrajectoryRecord) -> None:
    for sink in sinks:
        try:
            sink.write(record)
        except OSError as exc:
            raise OutputError(f"Trace sink write failed: {exc}") from exc


@performance_logger.performance_timer("run_trajectory")
def run_trajectory(
    graph: DualGraph,
    seed_plan: Plan,
    vcfg: ValidityConfig,
    ccfg: ChainConfig,
    sinks: Sequence[TraceSink] = (),
    *,
    rng: ChainRandom | None = None,
    reservoir_size: int | None = None,
    histogram_bins: int | None = None,
    run_label: str | None = None,
    graph_hash: str | None = None,
) -> EpsilonReport:
    """
    Run ccfg.steps steps from the seed plan and report its outlier rank.

    The seed plan itself is not mutated; the chain works on a copy. The
    accumulator observes the seed state and then every step, so it sees
    steps + 1 labels. Sinks get the seed record and every record_every-th
    step. The result depends only on the arguments.

    Raises:
        SeedPlanError: invalid seed plan
        OutputError: a sink failed
    """
    seed_score = validate_seed(seed_plan, graph, vcfg)
    plan = seed_plan.copy()
    rng = rng or ChainRandom(ccfg.rng_seed)
    reservoir = LabelReservoir(reservoir_size, rng.reservoir) if reservoir_size else None

    seed_label = label(plan)
    acc = EpsilonAccumulator(seed_label, reservoir)
    acc.observe(seed_label)
    if sinks:
        _emit(sinks, TrajectoryRecord.model_construct(
            step=0, accepted=False, ward=None, to_district=None, label=seed_label
        ))

    logger.info(
        f"Trajectory start: {ccfg.steps} steps, mode={vcfg.compactness_mode.value}, seed={ccfg.rng_seed}",
        extra={
            "event_type": "trajectory_start",
            "run_label": run_label,
            "steps": ccfg.steps,
            "rng_seed": ccfg.rng_seed,
            "wards": graph.num_wards,
            "districts": graph.num_districts,
        },
    )

    record_every = ccfg.record_every
    lazy = ccfg.lazy
    progress_every = max(1, ccfg.steps // 10)
    accepted_steps = 0
    for index in range(1, ccfg.steps + 1):
        outcome = step(plan, graph, vcfg, seed_score, rng, lazy)
        if outcome.accepted:
            accepted_steps += 1
        acc.observe(outcome.label)

        if sinks and index % record_every == 0:
            ward, to_district = outcome.proposal if outcome.proposal is not None else (None, None)
            _emit(sinks, TrajectoryRecord.model_construct(
                step=index,
                accepted=outcome.accepted,
                ward=ward,
                to_district=to_district,
                label=outcome.label,
            ))
        if index % progress_every == 0:
            logger.debug(
                f"Step {index}/{ccfg.steps}: as_bad={acc.as_bad_count}",
                extra={"event_type": "trajectory_progress", "step": index},
            )

    report = finalize(
        acc,
        vcfg,
        ccfg,
        label=run_label,
        accepted_steps=accepted_steps,
        seed_result=election_result(seed_plan),
        graph_hash=graph_hash,
        rng_algorithm=rng.algorithm,
        histogram_bins=histogram_bins if reservoir is not None else None,
    )
    logger.info(
        f"Trajectory complete: epsilon={report.epsilon:.6g}, p={report.p_rendered}",
        extra={
            "event_type": "trajectory_complete",
            "run_label": run_label,
            "epsilon": report.epsilon,
            "p_value": report.p_value,
            "accepted_steps": accepted_steps,
        },
    )
    return report
