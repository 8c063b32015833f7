"""
Command-line front door.

    ward-chain ingest GEOMETRY [--out-dir DIR]
    ward-chain run CONFIG [CONFIG ...] [--seed N] [--out-dir DIR] [--workers N]
    ward-chain report REPORT [REPORT ...] [--svg-dir DIR]
    ward-chain grid SPEC [--out-dir DIR]

Exit codes: 0 success, 1 other failure, 2 configuration or usage error,
3 invalid seed plan, 4 I/O failure.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

from .chain.engine import run_trajectory
from .chain.sinks import CsvTraceSink, TraceSink
from .core.config import APP_VERSION, app_config, load_grid_spec, load_run_config
from .core.config_schema import AppConfig, LogLevel, RunConfig
from .core.error_handler import EXIT_CONFIG, EXIT_OK, CliErrorBoundary, ErrorHandler
from .core.exceptions import ConfigurationError, DisconnectedDistrictError, SeedPlanError
from .core.logging import setup_logging
from .graph.dual_graph import DualGraph
from .graph.io import graph_fingerprint, load_graph, write_graph
from .graph.plan import Plan, build_plan
from .gridkit.generator import generate
from .ingest.extract import ingest_file
from .models.schemas import EpsilonReport, IngestReport
from .reporting.plots import write_histogram_svg
from .reporting.tables import (
    mixed_instances,
    read_report,
    render_table,
    write_histogram_table,
    write_report,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunPaths:
    report: Path
    trace: Path | None
    histogram: Path | None
    histogram_svg: Path | None


def _resolve(path: Path | None, base: Path) -> Path | None:
    if path is None:
        return None
    return path if path.is_absolute() else base / path


def resolve_paths(config: RunConfig, out_dir: Path) -> RunPaths:
    """
    Output paths of one run, relative ones anchored at out_dir.

    A run file without an explicit report path writes '<label>.report.json'.
    """
    output = config.output
    report = output.report if "report" in output.model_fields_set else Path(f"{config.label or 'run'}.report.json")
    return RunPaths(
        report=_resolve(report, out_dir) or report,
        trace=_resolve(output.trace, out_dir),
        histogram=_resolve(output.histogram, out_dir),
        histogram_svg=_resolve(output.histogram_svg, out_dir),
    )


@ErrorHandler.handle_errors(convert_exceptions=True)
def build_instance(config: RunConfig) -> tuple[DualGraph, Plan]:
    """
    Chain instance and seed plan of a run configuration.

    Raises:
        SeedPlanError: an initial district of the tables is not connected
    """
    if config.synthetic is not None:
        return generate(config.synthetic)
    assert config.graph is not None
    try:
        graph = load_graph(config.graph.nodes, config.graph.edges, config.graph.num_districts)
    except DisconnectedDistrictError as exc:
        raise SeedPlanError(
            f"seed plan is invalid: {exc.message}",
            violations=[exc.message],
            details=dict(exc.details),
        ) from exc
    return graph, build_plan(graph)


def execute_run(config: RunConfig, paths: RunPaths, settings: AppConfig) -> EpsilonReport:
    """Run one configuration and write its artifacts."""
    graph, seed_plan = build_instance(config)
    wants_histogram = paths.histogram is not None or paths.histogram_svg is not None

    sinks: list[TraceSink] = []
    trace = CsvTraceSink(paths.trace) if paths.trace is not None else None
    if trace is not None:
        sinks.append(trace.open())
    try:
        report = run_trajectory(
            graph,
            seed_plan,
            config.validity,
            config.chain,
            sinks,
            reservoir_size=settings.reservoir_size if wants_histogram else None,
            histogram_bins=settings.histogram_bins if wants_histogram else None,
            run_label=config.label,
            graph_hash=graph_fingerprint(graph),
        )
    finally:
        if trace is not None:
            trace.close()

    write_report(report, paths.report)
    if report.histogram is not None:
        if paths.histogram is not None:
            write_histogram_table(report.histogram, paths.histogram)
        if paths.histogram_svg is not None:
            write_histogram_svg(report.histogram, report.seed_label, paths.histogram_svg, title=config.label)
    return report


def cmd_run(
    config_paths: Sequence[Path],
    *,
    seed: int | None = None,
    out_dir: Path | None = None,
    workers: int | None = None,
    settings: AppConfig = app_config,
    stream: TextIO | None = None,
) -> list[EpsilonReport]:
    """
    Run every configuration, one trajectory each, and print the results table.

    Configurations fan out over a thread pool; each run owns its plan and
    output files, and rows are printed in argument order.

    Raises:
        ConfigurationError: a run file is invalid or two runs share an output path
    """
    base = out_dir or settings.output_dir
    configs = [load_run_config(path, seed_override=seed) for path in config_paths]
    paths = [resolve_paths(config, base) for config in configs]

    claimed: dict[Path, Path] = {}
    for source, run_paths in zip(config_paths, paths, strict=True):
        for target in (run_paths.report, run_paths.trace, run_paths.histogram, run_paths.histogram_svg):
            if target is None:
                continue
            if target in claimed:
                raise ConfigurationError(
                    f"{source} and {claimed[target]} both write {target}",
                    config_key="output",
                )
            claimed[target] = source

    max_workers = max(1, min(workers or settings.workers, len(configs)))
    if max_workers == 1:
        reports = [execute_run(c, p, settings) for c, p in zip(configs, paths, strict=True)]
    else:
        with ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix="trajectory") as pool:
            futures = [pool.submit(execute_run, c, p, settings) for c, p in zip(configs, paths, strict=True)]
            reports = [future.result() for future in futures]

    out = stream or sys.stdout
    out.write(render_table(reports, with_labels=len(reports) > 1) + "\n")
    return reports


def cmd_report(report_paths: Sequence[Path], *, svg_dir: Path | None = None, stream: TextIO | None = None) -> list[EpsilonReport]:
    """Print the results table of saved reports; optionally draw their histograms."""
    if not report_paths:
        raise ConfigurationError("report needs at least one report file", config_key="reports")
    reports = [read_report(path) for path in report_paths]

    hashes = mixed_instances(reports)
    if hashes:
        logger.warning(
            f"Reports come from {len(hashes)} different instances",
            extra={"event_type": "mixed_instances", "graph_hashes": hashes},
        )

    if svg_dir is not None:
        for path, report in zip(report_paths, reports, strict=True):
            if report.histogram is None:
                logger.warning(
                    f"{path} carries no histogram",
                    extra={"event_type": "histogram_missing", "report": str(path)},
                )
                continue
            name = report.label or Path(path).stem
            write_histogram_svg(report.histogram, report.seed_label, svg_dir / f"{name}.svg", title=report.label)

    out = stream or sys.stdout
    out.write(render_table(reports, with_labels=len(reports) > 1) + "\n")
    return reports


def cmd_ingest(geometry_path: Path, out_dir: Path | None = None, *, settings: AppConfig = app_config, stream: TextIO | None = None) -> IngestReport:
    """Preprocess a precinct map into node/edge tables."""
    target = out_dir or settings.output_dir
    report = ingest_file(geometry_path, target)
    out = stream or sys.stdout
    out.write(
        f"precincts {report.initial_count} -> {report.after_merge_islands} -> "
        f"{report.after_split_multipolygons} -> {report.after_dissolve_contained}; "
        f"wards={report.num_wards} edges={report.num_edges} districts={len(report.district_labels)}\n"
    )
    return report


def cmd_grid(spec_path: Path, out_dir: Path | None = None, *, settings: AppConfig = app_config, stream: TextIO | None = None) -> str:
    """Write the node/edge tables of a synthetic grid; returns the graph fingerprint."""
    target = out_dir or settings.output_dir
    graph, _ = generate(load_grid_spec(spec_path))
    write_graph(graph, target / "nodes.csv", target / "edges.csv")
    fingerprint = graph_fingerprint(graph)
    out = stream or sys.stdout
    out.write(f"wards={graph.num_wards} edges={len(graph.edges)} districts={graph.num_districts} graph_hash={fingerprint}\n")
    return fingerprint


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ward-chain",
        description="Outlier test for districting plans with a reversible single-flip chain",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_VERSION}")
    parser.add_argument("--log-level", choices=[level.value for level in LogLevel], help="Override the log level")
    parser.add_argument("--log-json", action="store_true", help="Structured JSON logs on stderr")
    parser.add_argument("--traceback", action="store_true", help="Include tracebacks in error diagnostics")

    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", help="Preprocess a precinct geometry file")
    ingest.add_argument("geometry", type=Path)
    ingest.add_argument("--out-dir", type=Path)

    run = commands.add_parser("run", help="Run one trajectory per configuration file")
    run.add_argument("configs", type=Path, nargs="+")
    run.add_argument("--seed", type=int, help="Override chain.rng_seed of every config")
    run.add_argument("--out-dir", type=Path)
    run.add_argument("--workers", type=int)

    report = commands.add_parser("report", help="Render saved trajectory reports")
    report.add_argument("reports", type=Path, nargs="+")
    report.add_argument("--svg-dir", type=Path, help="Write a histogram graphic per report")

    grid = commands.add_parser("grid", help="Write a synthetic grid's node/edge tables")
    grid.add_argument("spec", type=Path)
    grid.add_argument("--out-dir", type=Path)

    return parser


def _settings_for(args: argparse.Namespace) -> AppConfig:
    updates = {}
    if args.log_level:
        updates["level"] = LogLevel(args.log_level)
    if args.log_json:
        updates["enable_structured_logging"] = True
    if not updates:
        return app_config
    return app_config.model_copy(update={"logging": app_config.logging.model_copy(update=updates)})


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG

    settings = _settings_for(args)
    setup_logging(settings)
    boundary = CliErrorBoundary(include_traceback=args.traceback)

    def command() -> None:
        if args.command == "ingest":
            cmd_ingest(args.geometry, args.out_dir, settings=settings)
        elif args.command == "run":
            cmd_run(args.configs, seed=args.seed, out_dir=args.out_dir, workers=args.workers, settings=settings)
        elif args.command == "report":
            cmd_report(args.reports, svg_dir=args.svg_dir)
        else:
            cmd_grid(args.spec, args.out_dir, settings=settings)

    return boundary.run(command, args.command)


if __name__ == "__main__":
    sys.exit(main())
