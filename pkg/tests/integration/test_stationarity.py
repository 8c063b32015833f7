"""The chain's visit frequencies against the uniform law on its reachable set."""

from collections import Counter

import pytest
from scipy.stats import chisquare

from wardChain.chain.engine import step
from wardChain.chain.random import ChainRandom
from wardChain.constraints.validity import compactness_score, plan_violations
from wardChain.core.config_schema import CompactnessMode, GridSpec, ValidityConfig
from wardChain.core.exceptions import EnumerationLimitError
from wardChain.graph.plan import build_plan
from wardChain.gridkit.generator import generate
from wardChain.gridkit.oracles import enumerate_valid_plans, reachable_plans

ALPHA = 0.001


def sample_states(graph, seed_plan, cfg, *, rng_seed, thin, samples, lazy=False):
    """Plan keys visited every `thin` steps, after one burn-in interval."""
    plan = seed_plan.copy()
    seed_score = compactness_score(seed_plan, cfg.compactness_mode)
    rng = ChainRandom(rng_seed)
    counts: Counter = Counter()
    for _ in range(thin):
        step(plan, graph, cfg, seed_score, rng, lazy)
    for _ in range(samples):
        for _ in range(thin):
            step(plan, graph, cfg, seed_score, rng, lazy)
        counts[plan.key()] += 1
    return counts


def assert_uniform(counts, support):
    observed = [counts.get(key, 0) for key in support]
    assert sum(observed) == sum(counts.values()), "chain left its reachable set"
    _, p = chisquare(observed)
    assert p > ALPHA, f"visit counts {observed} are not uniform (p={p:.2g})"


# Total perimeter of the 6x6 bands is 48: 24 of outer boundary plus twice
# the 12 cut edges. Budget (49 + 2k) / 48 admits up to 12 + k cut edges.
SIX_BY_SIX_BUDGETS = [(49 + 2 * extra) / 48 for extra in range(2, 7)]
MIN_SUPPORT = 50
MAX_SUPPORT = 1_500


def calibrated_support(graph, seed_plan):
    """The loosest perimeter budget whose reachable set stays within MAX_SUPPORT, if it reaches MIN_SUPPORT."""
    chosen = None
    for budget in SIX_BY_SIX_BUDGETS:
        cfg = ValidityConfig(
            pop_tolerance_wards=1.5,
            compactness_mode=CompactnessMode.PERIMETER,
            compactness_budget=budget,
            enforce_counties=False,
            enforce_mm=False,
        )
        try:
            support = reachable_plans(graph, cfg, seed_plan, limit=MAX_SUPPORT)
        except EnumerationLimitError:
            break
        chosen = (cfg, support)
    assert chosen is not None, "even the tightest budget reaches too many plans"
    cfg, support = chosen
    assert len(support) >= MIN_SUPPORT, f"support of {len(support)} plans at budget {cfg.compactness_budget}"
    return cfg, support


@pytest.mark.integration
@pytest.mark.statistical
class TestUniformStationaryLaw:
    """Thinned samples spread evenly over every reachable plan."""

    def test_two_by_two(self, loose_validity):
        """Test the twelve connected labelings of a 2x2 grid."""
        graph, seed = generate(GridSpec(rows=2, cols=2, num_districts=2))
        support = reachable_plans(graph, loose_validity, seed)
        assert len(support) == 12

        counts = sample_states(graph, seed, loose_validity, rng_seed=2024, thin=50, samples=4_000)

        assert_uniform(counts, support)

    def test_lazy_chain(self, loose_validity):
        """Test holding half the time leaves the law unchanged."""
        graph, seed = generate(GridSpec(rows=2, cols=2, num_districts=2))
        support = reachable_plans(graph, loose_validity, seed)

        counts = sample_states(graph, seed, loose_validity, rng_seed=7, thin=100, samples=3_000, lazy=True)

        assert_uniform(counts, support)

    @pytest.mark.slow
    def test_population_and_compactness_bound(self):
        """Test a 2x3 grid where the population window prunes the state space."""
        cfg = ValidityConfig(
            pop_tolerance_wards=1.5,
            compactness_mode=CompactnessMode.PERIMETER,
            compactness_budget=10.0,
            enforce_counties=False,
            enforce_mm=False,
        )
        graph, seed = generate(GridSpec(rows=2, cols=3, num_districts=2))
        support = reachable_plans(graph, cfg, seed)
        assert set(support) <= set(enumerate_valid_plans(graph, cfg, seed))
        assert len(support) > 2

        counts = sample_states(graph, seed, cfg, rng_seed=11, thin=200, samples=150 * len(support))

        assert_uniform(counts, support)

    @pytest.mark.slow
    def test_six_by_six_three_districts(self):
        """Test a 6x6 grid in three bands over a support of fifty to fifteen hundred plans."""
        graph, seed = generate(GridSpec(rows=6, cols=6, num_districts=3))
        assert compactness_score(seed, CompactnessMode.PERIMETER) == 48
        cfg, support = calibrated_support(graph, seed)
        seed_score = compactness_score(seed, cfg.compactness_mode)

        assert set(support) <= set(enumerate_valid_plans(graph, cfg, seed))
        for key in support:
            assert plan_violations(build_plan(graph, key), graph, cfg, seed_score) == []

        counts = sample_states(graph, seed, cfg, rng_seed=36, thin=2_000, samples=8 * len(support))

        assert_uniform(counts, support)
