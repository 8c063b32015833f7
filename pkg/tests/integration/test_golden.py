"""Byte-for-byte comparison of CLI artifacts against recorded golden files.

Set WARDCHAIN_REGEN_GOLDEN=1 to re-record the run artifacts after an
intended change to the chain, the report schema or the trace format.
"""

import os
import shutil
from pathlib import Path

import pytest

from wardChain.cli import main
from wardChain.core.error_handler import EXIT_OK

GOLDEN = Path(__file__).resolve().parent.parent / "fixtures" / "golden"
SPEC = GOLDEN / "six_by_six.toml"
RUN_ARTIFACTS = ("six_by_six.report.json", "six_by_six.trace.csv")
REGENERATE = os.environ.get("WARDCHAIN_REGEN_GOLDEN") == "1"


@pytest.fixture(autouse=True)
def _logging(restore_root_logger):
    """main() reconfigures the root logger."""
    yield


@pytest.mark.integration
class TestGoldenArtifacts:
    """Test fixed inputs keep producing identical bytes."""

    def test_grid_tables(self, tmp_path, capsys):
        """Test the 6x6 node and edge tables match the recorded ones."""
        assert main(["grid", str(SPEC), "--out-dir", str(tmp_path)]) == EXIT_OK
        capsys.readouterr()

        assert (tmp_path / "nodes.csv").read_bytes() == (GOLDEN / "six_by_six.nodes.csv").read_bytes()
        assert (tmp_path / "edges.csv").read_bytes() == (GOLDEN / "six_by_six.edges.csv").read_bytes()

    def test_run_report_and_trace(self, tmp_path, capsys):
        """Test the report and trace of a fixed-seed run match the recorded ones."""
        assert main(["run", str(SPEC), "--out-dir", str(tmp_path)]) == EXIT_OK
        capsys.readouterr()

        if REGENERATE:
            for name in RUN_ARTIFACTS:
                shutil.copyfile(tmp_path / name, GOLDEN / name)
        missing = [name for name in RUN_ARTIFACTS if not (GOLDEN / name).exists()]
        if missing:
            pytest.skip(f"golden run artifacts {missing} not recorded; rerun with WARDCHAIN_REGEN_GOLDEN=1")

        for name in RUN_ARTIFACTS:
            assert (tmp_path / name).read_bytes() == (GOLDEN / name).read_bytes(), f"{name} differs from golden"
