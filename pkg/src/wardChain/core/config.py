"""Configuration management for wardChain."""

import logging
import tomllib
from pathlib import Path
from typing import Any

from pydantic import ValidationError as PydanticValidationError

from .config_schema import AppConfig, GridSpec, RunConfig
from .exceptions import ConfigurationError

# App version
APP_VERSION = "1.0.0"

logger = logging.getLogger(__name__)


def _load_app_config() -> AppConfig:
    try:
        return AppConfig()
    except PydanticValidationError as exc:
        # A malformed WARDCHAIN_* variable must not make the package unimportable
        logger.warning(
            f"Ignoring invalid WARDCHAIN_* environment settings: {exc.error_count()} error(s)",
            extra={"event_type": "config_env_invalid"},
        )
        return AppConfig.model_construct(app_version=APP_VERSION)


app_config = _load_app_config()


def _first_error(exc: PydanticValidationError) -> tuple[str, str]:
    error = exc.errors()[0]
    location = ".".join(str(part) for part in error.get("loc", ()))
    return location, error.get("msg", "invalid value")


def parse_run_config(data: dict[str, Any], base_dir: Path | None = None) -> RunConfig:
    """
    Validate a run configuration mapping.

    Args:
        data: Parsed TOML document
        base_dir: Directory that relative [graph] paths are anchored to

    Returns:
        Validated RunConfig

    Raises:
        ConfigurationError: If any field is missing or out of range
    """
    try:
        config = RunConfig.model_validate(data)
    except PydanticValidationError as exc:
        location, message = _first_error(exc)
        raise ConfigurationError(
            f"Invalid run configuration at '{location}': {message}",
            config_key=location,
            details={"errors": exc.error_count()},
            recovery_suggestion="Fix the run file; see README for the accepted keys",
        ) from exc

    if config.graph is not None and base_dir is not None:
        graph = config.graph
        nodes = graph.nodes if graph.nodes.is_absolute() else base_dir / graph.nodes
        edges = graph.edges if graph.edges.is_absolute() else base_dir / graph.edges
        config = config.model_copy(
            update={"graph": graph.model_copy(update={"nodes": nodes, "edges": edges})}
        )
    return config


def load_run_config(path: Path, seed_override: int | None = None) -> RunConfig:
    """
    Load a TOML run file.

    Args:
        path: Run configuration file
        seed_override: Replaces chain.rng_seed when given (CLI --seed)

    Returns:
        Validated RunConfig
    """
    try:
        with open(path, "rb") as handle:
            data = tomllib.load(handle)
    except FileNotFoundError as exc:
        raise ConfigurationError(f"Run configuration not found: {path}", config_key="path") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"Run configuration is not valid TOML: {exc}", config_key="path") from exc

    if seed_override is not None:
        data.setdefault("chain", {})["rng_seed"] = seed_override
    if not data.get("label"):
        data["label"] = Path(path).stem

    config = parse_run_config(data, base_dir=Path(path).parent)
    logger.debug(
        f"Loaded run configuration {path}",
        extra={"event_type": "config_loaded", "config_path": str(path)},
    )
    return config


def load_grid_spec(path: Path) -> GridSpec:
    """
    Read the [synthetic] table of a TOML file.

    Accepts a full run file as well as a file holding only [synthetic].
    """
    try:
        with open(path, "rb") as handle:
            data = tomllib.load(handle)
    except FileNotFoundError as exc:
        raise ConfigurationError(f"Grid specification not found: {path}", config_key="path") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"Grid specification is not valid TOML: {exc}", config_key="path") from exc

    if "synthetic" not in data:
        raise ConfigurationError(f"{path} has no [synthetic] table", config_key="synthetic")
    try:
        return GridSpec.model_validate(data["synthetic"])
    except PydanticValidationError as exc:
        location, message = _first_error(exc)
        raise ConfigurationError(
            f"Invalid grid specification at 'synthetic.{location}': {message}",
            config_key=f"synthetic.{location}",
        ) from exc
