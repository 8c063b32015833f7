"""
Configuration schema and validation for wardChain.

This module provides the structured run configuration (one file per
trajectory, i.e. one row of the results table) and the process-wide
settings read from the environment.
"""

from enum import Enum
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class LogLevel(str, Enum):
    """Supported log levels."""
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class CompactnessMode(str, Enum):
    """Formalizations of the 'geometrically reasonable' property."""
    PERIMETER = "perimeter"
    L1 = "l1"
    L2 = "l2"

    @property
    def table_name(self) -> str:
        return {
            CompactnessMode.PERIMETER: "Perimeter constraint",
            CompactnessMode.L1: "L1 constraint",
            CompactnessMode.L2: "L2 constraint",
        }[self]


class LoggingConfig(BaseModel):
    """Logging configuration."""
    model_config = ConfigDict(extra="forbid")

    level: LogLevel = Field(default=LogLevel.INFO, description="Log level")
    format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Log format string"
    )
    enable_structured_logging: bool = Field(
        default=False,
        description="Enable structured JSON logging"
    )
    log_to_file: bool = Field(default=False, description="Enable file logging")
    log_file_path: Path | None = Field(default=None, description="Log file path")
    max_file_size_mb: int = Field(default=100, ge=1, description="Max log file size in MB")
    backup_count: int = Field(default=5, ge=1, description="Number of backup log files")

    @field_validator("level", mode="before")
    @classmethod
    def normalize_level(cls, v: Any) -> Any:
        return v.upper() if isinstance(v, str) else v

    @field_validator("log_file_path", mode="before")
    @classmethod
    def validate_log_path(cls, v: Any) -> Path | None:
        """Expand the log file path."""
        if v is None:
            return None
        return Path(v).expanduser().resolve()


class ValidityConfig(BaseModel):
    """Machine encoding of the five validity properties."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    pop_tolerance_wards: float = Field(
        default=1.0,
        gt=0,
        description="Max |district pop - ideal| in units of the average ward population",
    )
    compactness_mode: CompactnessMode = Field(
        default=CompactnessMode.PERIMETER,
        description="Which compactness score bounds the plan",
    )
    compactness_budget: float = Field(
        default=1.0,
        gt=0,
        description="Allowed compactness score as a multiple of the seed plan's score",
    )
    enforce_counties: bool = Field(default=True, description="Keep intact counties intact")
    enforce_mm: bool = Field(default=True, description="Freeze majority-minority districts")

    @field_validator("compactness_mode", mode="before")
    @classmethod
    def normalize_mode(cls, v: Any) -> Any:
        return v.lower() if isinstance(v, str) else v


class ChainConfig(BaseModel):
    """Trajectory length, randomness and trace thinning."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    steps: int = Field(..., ge=1, description="Number of chain steps after the seed state")
    rng_seed: int = Field(default=0, ge=0, lt=2**64, description="64-bit generator seed")
    lazy: bool = Field(default=False, description="Hold with probability 1/2 each step")
    record_every: int = Field(default=1, ge=1, description="Trace thinning interval")


class GridSpec(BaseModel):
    """A synthetic unit-square grid instance."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    rows: int = Field(..., ge=1)
    cols: int = Field(..., ge=1)
    num_districts: int = Field(..., ge=1)
    population: float | list[list[float]] = Field(
        default=1.0,
        description="Uniform cell population or a rows x cols table",
    )
    rep_share: float | list[list[float]] | None = Field(
        default=None,
        description="Republican share of each cell's votes; default is a west-east gradient",
    )
    rep: list[list[float]] | None = Field(default=None, description="Explicit Republican votes")
    dem: list[list[float]] | None = Field(default=None, description="Explicit Democratic votes")
    counties: list[list[str]] | None = Field(
        default=None,
        description="County of each cell; default is one county per cell",
    )
    frozen_districts: list[int] = Field(
        default_factory=list,
        description="Seed districts whose wards are majority-minority (frozen)",
    )
    seed: Literal["banded", "explicit"] = Field(default="banded")
    assignment: list[list[int]] | None = Field(
        default=None,
        description="Explicit seed district of each cell (seed = 'explicit')",
    )

    @model_validator(mode="after")
    def validate_shape(self) -> "GridSpec":
        """Check table shapes and seed feasibility."""
        if self.rows * self.cols < self.num_districts:
            raise ValueError(
                f"{self.rows}x{self.cols} grid cannot hold {self.num_districts} districts"
            )
        for name in ("population", "rep_share", "rep", "dem", "counties", "assignment"):
            table = getattr(self, name)
            if isinstance(table, list):
                if len(table) != self.rows or any(len(row) != self.cols for row in table):
                    raise ValueError(f"{name} must be a {self.rows}x{self.cols} table")
        if (self.rep is None) != (self.dem is None):
            raise ValueError("rep and dem tables must be given together")
        if self.seed == "explicit" and self.assignment is None:
            raise ValueError("seed = 'explicit' requires an assignment table")
        for district in self.frozen_districts:
            if not 0 <= district < self.num_districts:
                raise ValueError(f"frozen district {district} out of range")
        return self


class GraphInput(BaseModel):
    """Node and edge tables describing a chain instance."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    nodes: Path
    edges: Path
    num_districts: int = Field(..., ge=1)


class OutputConfig(BaseModel):
    """Artifact paths; relative paths resolve against the output directory."""
    model_config = ConfigDict(extra="forbid")

    report: Path = Field(default=Path("report.json"))
    trace: Path | None = Field(default=None, description="Thinned trajectory trace")
    histogram: Path | None = Field(default=None, description="Label histogram table")
    histogram_svg: Path | None = Field(default=None, description="Label histogram graphic")


class RunConfig(BaseModel):
    """One trajectory: input, validity properties, chain settings and outputs."""
    model_config = ConfigDict(extra="forbid")

    label: str | None = Field(default=None, description="Row label used in tables")
    graph: GraphInput | None = None
    synthetic: GridSpec | None = None
    validity: ValidityConfig = Field(default_factory=ValidityConfig)
    chain: ChainConfig
    output: OutputConfig = Field(default_factory=OutputConfig)

    @model_validator(mode="after")
    def exactly_one_input(self) -> "RunConfig":
        """Exactly one of [graph] and [synthetic] must be present."""
        if (self.graph is None) == (self.synthetic is None):
            raise ValueError("exactly one of [graph] or [synthetic] must be given")
        return self


class AppConfig(BaseSettings):
    """
    Process-wide settings.

    Read from WARDCHAIN_* environment variables; nested sections use '__'
    (for example WARDCHAIN_LOGGING__LEVEL=DEBUG).
    """
    model_config = SettingsConfigDict(
        env_prefix="WARDCHAIN_",
        env_file=".env",
        env_nested_delimiter="__",
        case_sensitive=False,
        extra="ignore",
    )

    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    output_dir: Path = Field(default=Path("."), description="Default output directory")
    enumeration_limit: int = Field(
        default=5_000_000,
        ge=1,
        description="Max assignments explored by exhaustive plan enumeration",
    )
    reservoir_size: int = Field(
        default=100_000,
        ge=1,
        description="Label reservoir used for the optional histogram",
    )
    histogram_bins: int = Field(default=50, ge=1)
    workers: int = Field(default=1, ge=1, description="Threads used to fan out configs")

    app_name: str = Field(default="wardChain")
    app_version: str = Field(default="1.0.0")

    @field_validator("output_dir", mode="before")
    @classmethod
    def expand_output_dir(cls, v: Any) -> Path:
        return Path(v).expanduser()
