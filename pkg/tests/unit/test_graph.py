"""Unit tests for the dual graph, plans and graph tables."""

import io

import pandas as pd
import pytest

from wardChain.core.config_schema import GridSpec
from wardChain.core.exceptions import (
    ContractViolationError,
    DisconnectedDistrictError,
    GraphValidationError,
    OutputError,
    PlanError,
)
from wardChain.graph.dual_graph import DualGraph, EdgeRecord, WardNode
from wardChain.graph.io import edges_frame, graph_fingerprint, load_graph, nodes_frame, write_graph
from wardChain.graph.plan import build_plan, compute_boundary_pairs, compute_caches
from wardChain.gridkit.generator import generate


def _ward(i: int, district: int, **overrides) -> WardNode:
    values = dict(
        id=i, population=1.0, rep_votes=1.0, dem_votes=1.0, area=1.0,
        outer_boundary=1.0, county=f"c{i}", initial_district=district,
    )
    values.update(overrides)
    return WardNode(**values)


@pytest.mark.unit
class TestDualGraph:
    """Test construction and validation of the dual graph."""

    def test_path_graph_singleton_counties_are_intact(self, make_path_graph):
        """Test that every singleton county is intact and nothing is locked."""
        graph = make_path_graph([0, 0, 1, 1])

        assert graph.num_wards == 4
        assert graph.intact_counties == {"c0", "c1", "c2", "c3"}
        assert graph.locked_wards == frozenset()

    def test_disconnected_initial_district_rejected(self, make_path_graph):
        """Test that districts {0,2},{1,3} on a path are rejected."""
        with pytest.raises(DisconnectedDistrictError, match="not connected"):
            make_path_graph([0, 1, 0, 1])

    def test_grid_fixture_edge_count(self, half_split):
        """Test the 4x4 grid has 16 nodes and 24 rook edges."""
        graph, _ = half_split

        assert graph.num_wards == 16
        assert len(graph.edges) == 24
        assert all(edge.shared_length == 1.0 for edge in graph.edges)

    def test_neighbors_are_symmetric(self, half_split):
        """Test adjacency lists list each edge from both ends."""
        graph, _ = half_split

        for ward, adjacency in enumerate(graph.neighbors):
            for nbr, length in adjacency:
                assert (ward, length) in graph.neighbors[nbr]

    def test_non_dense_ids_rejected(self):
        """Test ward ids must be 0..n-1 in order."""
        with pytest.raises(GraphValidationError, match="dense"):
            DualGraph([_ward(0, 0), _ward(2, 0)], [EdgeRecord(0, 1, 1.0)], 1)

    def test_nonpositive_area_rejected(self):
        """Test a ward with zero area is rejected."""
        with pytest.raises(GraphValidationError, match="area"):
            DualGraph([_ward(0, 0, area=0.0)], [], 1)

    def test_negative_population_rejected(self):
        """Test negative attributes are rejected."""
        with pytest.raises(GraphValidationError, match="pop"):
            DualGraph([_ward(0, 0, population=-1.0)], [], 1)

    def test_self_loop_rejected(self):
        """Test a self-loop edge is rejected."""
        with pytest.raises(GraphValidationError, match="self-loop"):
            DualGraph([_ward(0, 0), _ward(1, 0)], [EdgeRecord(0, 0, 1.0), EdgeRecord(0, 1, 1.0)], 1)

    def test_duplicate_edge_rejected(self):
        """Test both orientations of a pair count as a duplicate."""
        with pytest.raises(GraphValidationError, match="duplicate"):
            DualGraph([_ward(0, 0), _ward(1, 0)], [EdgeRecord(0, 1, 1.0), EdgeRecord(1, 0, 2.0)], 1)

    def test_unknown_endpoint_rejected(self):
        """Test an edge to a missing ward is rejected."""
        with pytest.raises(GraphValidationError, match="unknown ward"):
            DualGraph([_ward(0, 0)], [EdgeRecord(0, 5, 1.0)], 1)

    def test_empty_district_rejected(self):
        """Test every district must have a ward in the seed."""
        with pytest.raises(GraphValidationError, match="no wards"):
            DualGraph([_ward(0, 0), _ward(1, 0)], [EdgeRecord(0, 1, 1.0)], 2)

    def test_district_out_of_range_rejected(self):
        """Test a seed district outside 0..D-1 is rejected."""
        with pytest.raises(GraphValidationError, match="outside"):
            DualGraph([_ward(0, 3)], [], 1)

    def test_county_structure(self, make_path_graph):
        """Test intact, split and locked county derivation."""
        graph = make_path_graph([0, 0, 1, 1], counties=["a", "a", "b", "c"])
        assert graph.intact_counties == {"a", "b", "c"}
        assert graph.locked_wards == {0, 1}

        split = make_path_graph([0, 0, 1, 1], counties=["a", "b", "b", "c"])
        assert "b" not in split.intact_counties
        assert split.locked_wards == frozenset()

    def test_frozen_district_freezes_all_members(self, make_path_graph):
        """Test one flagged ward freezes its whole seed district."""
        graph = make_path_graph([0, 0, 1, 1], frozen=[False, True, False, False])

        assert graph.frozen_districts == {0}
        assert graph.frozen_wards == {0, 1}

    def test_population_summaries(self, make_path_graph):
        """Test ideal and average ward population."""
        graph = make_path_graph([0, 0, 1, 1], population=[1.0, 2.0, 3.0, 2.0])

        assert graph.total_population == 8.0
        assert graph.ideal_population == 4.0
        assert graph.average_ward_population == 2.0


@pytest.mark.unit
class TestPlan:
    """Test plan caches and the flip/undo contract."""

    def test_half_split_perimeters(self, half_split):
        """Test each half of the 4x4 split has perimeter 12."""
        _, plan = half_split

        assert plan.perimeter == [12.0, 12.0]
        assert plan.population == [8.0, 8.0]
        assert plan.sizes == [8, 8]

    def test_half_split_boundary_pairs(self, half_split):
        """Test the 8 boundary pairs of the half split."""
        _, plan = half_split

        column_1 = {(r * 4 + 1, 1) for r in range(4)}
        column_2 = {(r * 4 + 2, 0) for r in range(4)}
        assert plan.boundary_pairs == column_1 | column_2

    def test_single_district_perimeter_is_outer_boundary(self, make_path_graph):
        """Test a one-district plan's perimeter is the whole outer boundary."""
        graph = make_path_graph([0, 0, 0, 0])
        plan = build_plan(graph)

        assert plan.perimeter == [sum(graph.outer_boundary)]
        assert plan.boundary_pairs == set()

    def test_corner_flip(self, half_split):
        """Test flipping ward (0,1) into district 1 gives pops 7/9 and perimeter 26."""
        graph, plan = half_split

        plan.apply_flip(1, 1)

        assert plan.population == [7.0, 9.0]
        assert sum(plan.perimeter) == 26.0
        fresh = compute_caches(graph, plan.assignment)
        caches = plan.caches()
        assert caches.population == fresh.population
        assert caches.perimeter == fresh.perimeter
        assert caches.area == fresh.area
        assert caches.sizes == fresh.sizes
        # gradient vote shares are fractional; summation order differs
        assert caches.rep_votes == pytest.approx(fresh.rep_votes, rel=1e-9)
        assert caches.dem_votes == pytest.approx(fresh.dem_votes, rel=1e-9)
        assert plan.boundary_pairs == compute_boundary_pairs(graph, plan.assignment)

    def test_corner_flip_exact_on_integer_votes(self):
        """Test every cache matches recomputation exactly when votes are integers."""
        graph, plan = generate(GridSpec(rows=4, cols=4, num_districts=2, rep_share=0.5, population=2.0))

        plan.apply_flip(1, 1)

        assert plan.caches() == compute_caches(graph, plan.assignment)

    def test_revert_restores_bitwise(self, half_split):
        """Test flip then revert restores every cache exactly."""
        _, plan = half_split
        before = plan.caches()
        pairs = set(plan.boundary_pairs)

        delta = plan.apply_flip(1, 1)
        plan.revert_flip(delta)

        assert plan.caches() == before
        assert plan.boundary_pairs == pairs
        assert plan.key() == tuple([0, 0, 1, 1] * 4)

    def test_stale_delta_rejected(self, half_split):
        """Test a delta older than the latest mutation cannot be reverted."""
        _, plan = half_split
        first = plan.apply_flip(1, 1)
        plan.apply_flip(5, 1)

        with pytest.raises(ContractViolationError, match="stale"):
            plan.revert_flip(first)

    def test_revert_twice_rejected(self, half_split):
        """Test the same delta cannot be reverted twice."""
        _, plan = half_split
        delta = plan.apply_flip(1, 1)
        plan.revert_flip(delta)

        with pytest.raises(ContractViolationError):
            plan.revert_flip(delta)

    def test_foreign_delta_rejected(self, half_split):
        """Test a delta from another plan is rejected by an untouched plan."""
        graph, plan = half_split
        other = build_plan(graph)
        delta = other.apply_flip(1, 1)

        with pytest.raises(ContractViolationError, match="different plan"):
            plan.revert_flip(delta)

    def test_copy_is_independent(self, half_split):
        """Test mutating a copy leaves the original untouched."""
        _, plan = half_split
        clone = plan.copy()
        clone.apply_flip(1, 1)

        assert plan.population == [8.0, 8.0]
        assert clone.population == [7.0, 9.0]

    @pytest.mark.parametrize("ward,district", [(1, 0), (99, 1), (1, 7)])
    def test_invalid_flips_raise(self, half_split, ward, district):
        """Test flips to the own district, unknown wards and unknown districts."""
        _, plan = half_split
        with pytest.raises(PlanError):
            plan.apply_flip(ward, district)

    def test_emptying_flip_raises(self, make_path_graph):
        """Test a flip may not empty its source district."""
        plan = build_plan(make_path_graph([0, 0, 0, 1]))
        with pytest.raises(PlanError, match="empty"):
            plan.apply_flip(3, 0)

    def test_build_plan_validation(self, half_split):
        """Test build_plan rejects short, out-of-range and empty assignments."""
        graph, _ = half_split
        with pytest.raises(PlanError):
            build_plan(graph, [0] * 15)
        with pytest.raises(PlanError):
            build_plan(graph, [0] * 15 + [2])
        with pytest.raises(PlanError, match="empty"):
            build_plan(graph, [0] * 16)
        with pytest.raises(PlanError, match="misses"):
            build_plan(graph, {w: 0 for w in range(15)})

    def test_perimeter_identity(self, half_split):
        """Test sum of perimeters = outer boundary + twice the cut length."""
        graph, plan = half_split
        for ward, district in [(1, 1), (6, 0), (9, 1)]:
            plan.apply_flip(ward, district)

        cut = sum(
            e.shared_length for e in graph.edges
            if plan.assignment[e.u] != plan.assignment[e.v]
        )
        assert sum(plan.perimeter) == pytest.approx(sum(graph.outer_boundary) + 2 * cut)


@pytest.mark.unit
class TestGraphTables:
    """Test node/edge table loading and writing."""

    NODES = (
        "id,pop,rep,dem,area,outer_boundary,county,district,frozen\n"
        "0,1,2,1,1,3,a,0,0\n"
        "1,1,1,2,1,3,b,1,false\n"
    )
    EDGES = "u,v,shared_length\n1,0,1.0\n"

    def test_load_graph_from_streams(self):
        """Test a two-ward instance parses from text streams."""
        graph = load_graph(io.StringIO(self.NODES), io.StringIO(self.EDGES), 2)

        assert graph.num_wards == 2
        assert graph.neighbors[0] == ((1, 1.0),)
        assert graph.county_groups == {"a": frozenset({0}), "b": frozenset({1})}

    def test_missing_column_rejected(self):
        """Test a table without the frozen column is rejected."""
        nodes = self.NODES.replace(",frozen", "").replace(",0\n", "\n").replace(",false\n", "\n")
        with pytest.raises(GraphValidationError, match="missing columns"):
            load_graph(io.StringIO(nodes), io.StringIO(self.EDGES), 2)

    def test_non_numeric_value_rejected(self):
        """Test a malformed number names its row."""
        nodes = self.NODES.replace("0,1,2,1", "0,x,2,1")
        with pytest.raises(GraphValidationError, match="row 0"):
            load_graph(io.StringIO(nodes), io.StringIO(self.EDGES), 2)

    def test_missing_file_is_io_error(self, tmp_path):
        """Test a missing file raises OutputError."""
        with pytest.raises(OutputError):
            load_graph(tmp_path / "nodes.csv", tmp_path / "edges.csv", 2)

    def test_write_then_load_preserves_graph(self, half_split, tmp_path):
        """Test written tables reload into an identical instance."""
        graph, _ = half_split
        write_graph(graph, tmp_path / "nodes.csv", tmp_path / "edges.csv")
        reloaded = load_graph(tmp_path / "nodes.csv", tmp_path / "edges.csv", graph.num_districts)

        assert reloaded.nodes == graph.nodes
        assert graph_fingerprint(reloaded) == graph_fingerprint(graph)

    def test_edges_frame_is_canonical(self):
        """Test edge pairs are written (min, max) and sorted."""
        graph = load_graph(io.StringIO(self.NODES), io.StringIO(self.EDGES), 2)
        frame = edges_frame(graph)

        assert frame.to_dict(orient="records") == [{"u": 0, "v": 1, "shared_length": 1.0}]
        assert list(nodes_frame(graph)["frozen"]) == [0, 0]

    def test_fingerprint_depends_on_num_districts(self, half_split):
        """Test the same tables with another district count hash differently."""
        graph, _ = half_split
        nodes, edges = nodes_frame(graph), edges_frame(graph)
        one = load_graph(nodes.assign(district=0), edges, 1)
        two = load_graph(nodes, edges, 2)

        assert graph_fingerprint(one) != graph_fingerprint(two)

    def test_dataframe_source(self, half_split):
        """Test DataFrames are accepted as sources."""
        graph, _ = half_split
        frame = nodes_frame(graph)
        assert isinstance(frame, pd.DataFrame)
        assert load_graph(frame, edges_frame(graph), 2).num_wards == 16
