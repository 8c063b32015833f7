"""Unit tests for report files, tables and the histogram graphic."""

import pytest

from wardChain.core.config_schema import CompactnessMode
from wardChain.core.exceptions import OutputError, ValidationError
from wardChain.models.schemas import EpsilonReport
from wardChain.reporting.plots import write_histogram_svg
from wardChain.reporting.tables import (
    TABLE_COLUMNS,
    format_epsilon,
    mixed_instances,
    read_report,
    render_table,
    table_row,
    write_histogram_table,
    write_report,
)
from wardChain.stats.outliers import p_value


def _report(epsilon=2.7e-8, mode=CompactnessMode.PERIMETER, counties=True, mm=True, **extra):
    values = dict(
        seed_label=0.12,
        total_states=1_000_001,
        as_bad_count=1,
        epsilon=epsilon,
        p_value=p_value(epsilon),
        mode=mode,
        enforce_counties=counties,
        enforce_mm=mm,
        rng_seed=0,
        steps=1_000_000,
    )
    values.update(extra)
    return EpsilonReport(**values)


@pytest.mark.unit
class TestTableRow:
    """Test rendering of one results row."""

    def test_published_row(self):
        """Test a perimeter row with both toggles renders p as .0002."""
        assert table_row(_report()) == {
            "Constraint": "Perimeter constraint",
            "Property 4?": "yes",
            "Property 5?": "yes",
            "ε": "2.7e-08",
            "p": ".0002",
        }

    def test_toggles_off(self):
        """Test an L1 row without the county and frozen properties."""
        row = table_row(_report(3.5e-7, CompactnessMode.L1, counties=False, mm=False))
        assert (row["Constraint"], row["Property 4?"], row["Property 5?"], row["p"]) == (
            "L1 constraint", "no", "no", ".0008"
        )

    def test_epsilon_two_significant_digits(self):
        """Test epsilon keeps two significant digits."""
        assert format_epsilon(0.123456) == "0.12"
        assert format_epsilon(1.0) == "1"


@pytest.mark.unit
class TestRenderTable:
    """Test the aligned text table."""

    def test_rows_in_order(self):
        """Test header and one line per report in input order."""
        reports = [_report(), _report(1.0e-8, CompactnessMode.L2)]
        lines = render_table(reports).splitlines()

        assert len(lines) == 3
        assert all(column in lines[0] for column in TABLE_COLUMNS)
        assert "Perimeter constraint" in lines[1]
        assert "L2 constraint" in lines[2]
        assert ".0001" in lines[2]

    def test_labels_column(self):
        """Test the optional run label column."""
        lines = render_table([_report(label="perimeter-yes-yes")], with_labels=True).splitlines()
        assert lines[0].startswith("Run")
        assert "perimeter-yes-yes" in lines[1]

    def test_mixed_instances(self):
        """Test reports from different graphs are flagged."""
        assert mixed_instances([_report(graph_hash="b"), _report(graph_hash="a")]) == ["a", "b"]
        assert mixed_instances([_report(graph_hash="a"), _report(graph_hash="a"), _report()]) == []


@pytest.mark.unit
class TestReportFiles:
    """Test report persistence."""

    def test_write_then_read(self, tmp_path):
        """Test a report with a histogram reads back equal."""
        report = _report(histogram=[(-0.1, 3), (0.0, 5)], label="run")
        path = tmp_path / "nested" / "run.report.json"
        write_report(report, path)

        assert path.read_text().endswith("}\n")
        assert read_report(path) == report

    def test_stable_rendering(self, tmp_path):
        """Test equal reports render equal bytes."""
        write_report(_report(), tmp_path / "a.json")
        write_report(_report(), tmp_path / "b.json")
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_missing_report(self, tmp_path):
        """Test a missing report is an I/O error."""
        with pytest.raises(OutputError):
            read_report(tmp_path / "absent.json")

    @pytest.mark.parametrize("text", ["{}", "not json", '{"epsilon": 2}'])
    def test_foreign_file(self, tmp_path, text):
        """Test files that are not reports are validation errors."""
        path = tmp_path / "other.json"
        path.write_text(text)
        with pytest.raises(ValidationError, match="not a trajectory report"):
            read_report(path)


@pytest.mark.unit
class TestHistogramOutputs:
    """Test the histogram table and graphic."""

    def test_histogram_table(self, tmp_path):
        """Test the two-column table."""
        path = tmp_path / "hist.csv"
        write_histogram_table([(-0.1, 3), (0.0, 5)], path)
        assert path.read_text() == "bin_left,count\n-0.1,3\n0.0,5\n"

    def test_svg_is_deterministic(self, tmp_path):
        """Test identical input renders identical bytes."""
        histogram = [(-0.2, 1), (-0.1, 4), (0.0, 9), (0.1, 2)]
        for name in ("a.svg", "b.svg"):
            write_histogram_svg(histogram, 0.15, tmp_path / name, title="demo")

        first = (tmp_path / "a.svg").read_bytes()
        assert first.startswith(b"<?xml")
        assert first == (tmp_path / "b.svg").read_bytes()

    def test_single_bin(self, tmp_path):
        """Test a one-bin histogram still renders."""
        write_histogram_svg([(0.0, 10)], 0.0, tmp_path / "one.svg")
        assert (tmp_path / "one.svg").stat().st_size > 0
