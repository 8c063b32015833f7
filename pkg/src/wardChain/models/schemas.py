"""Pydantic schemas for every artifact wardChain writes or reads back."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from ..core.config_schema import CompactnessMode


class DistrictTally(BaseModel):
    """Two-party vote totals of one district."""
    model_config = ConfigDict(frozen=True)

    district: int = Field(..., ge=0, description="District index")
    rep: float = Field(..., ge=0, description="Republican votes")
    dem: float = Field(..., ge=0, description="Democratic votes")
    winner: Literal["rep", "dem", "tie"] = Field(..., description="Strict-majority winner")


class ElectionResult(BaseModel):
    """Hypothetical election of one plan under the ward vote proxy."""
    model_config = ConfigDict(frozen=True)

    tallies: list[DistrictTally] = Field(..., description="Per-district tallies")
    rep_seats: int = Field(..., ge=0)
    dem_seats: int = Field(..., ge=0)
    tied_districts: list[int] = Field(
        default_factory=list,
        description="Districts with an exact tie; credited to neither party",
    )
    efficiency_gap: float = Field(
        ...,
        ge=-0.5,
        le=0.5,
        description="Wasted-vote efficiency gap; positive favors Republicans",
    )


class TrajectoryRecord(BaseModel):
    """One row of the thinned trajectory trace."""
    model_config = ConfigDict(frozen=True)

    step: int = Field(..., ge=0, description="0 is the seed state")
    accepted: bool
    ward: int | None = Field(None, description="Proposed ward, None on a lazy hold")
    to_district: int | None = Field(None, description="Proposed district, None on a lazy hold")
    label: float = Field(..., description="Efficiency gap after the step")


class EpsilonReport(BaseModel):
    """
    Outcome of one trajectory: the seed's outlier rank and its p-value.

    One report is one row of the results table.
    """
    model_config = ConfigDict(frozen=True)

    seed_label: float
    total_states: int = Field(..., ge=1)
    as_bad_count: int = Field(..., ge=1)
    epsilon: float = Field(..., gt=0, le=1)
    p_value: float = Field(..., gt=0, le=1)

    mode: CompactnessMode
    enforce_counties: bool
    enforce_mm: bool
    rng_seed: int
    steps: int

    label: str | None = Field(None, description="Row label")
    pop_tolerance_wards: float | None = None
    compactness_budget: float | None = None
    lazy: bool = False
    record_every: int = 1
    accepted_steps: int = Field(0, ge=0)
    acceptance_rate: float = Field(0.0, ge=0, le=1)
    label_min: float | None = None
    label_max: float | None = None
    seed_result: ElectionResult | None = None
    graph_hash: str | None = Field(None, description="Fingerprint of the chain instance")
    rng_algorithm: str | None = None
    histogram: list[tuple[float, int]] | None = Field(
        None,
        description="Reservoir label histogram as (bin_left, count) pairs",
    )

    @property
    def p_rendered(self) -> str:
        """p at 4 decimal places without the leading zero ('.0002')."""
        return format_probability(self.p_value)


def format_probability(value: float) -> str:
    text = f"{value:.4f}"
    return text[1:] if text.startswith("0.") else text


class PrecinctMove(BaseModel):
    """A precinct removed by an ingest step and the precinct that absorbed it."""
    model_config = ConfigDict(frozen=True)

    precinct: str
    receiver: str
    distance: float = Field(..., ge=0, description="Centroid-to-centroid distance")


class DistrictConservation(BaseModel):
    """Per-district totals before and after preprocessing, as exact fractions."""
    model_config = ConfigDict(frozen=True)

    district: str
    population_before: str
    population_after: str
    rep_before: str
    rep_after: str
    dem_before: str
    dem_after: str

    @property
    def conserved(self) -> bool:
        return (
            self.population_before == self.population_after
            and self.rep_before == self.rep_after
            and self.dem_before == self.dem_after
        )


class IngestReport(BaseModel):
    """Counts, moves and conservation checks of the preprocessing pipeline."""

    initial_count: int = Field(..., ge=0)
    after_merge_islands: int = Field(..., ge=0)
    after_split_multipolygons: int = Field(..., ge=0)
    after_dissolve_contained: int = Field(..., ge=0)

    islands_merged: list[PrecinctMove] = Field(default_factory=list)
    split_precincts: dict[str, int] = Field(
        default_factory=dict,
        description="Original precinct id -> number of parts",
    )
    dissolved: list[PrecinctMove] = Field(default_factory=list)
    isolated_fragments: list[str] = Field(
        default_factory=list,
        description="Precincts sharing no boundary after preprocessing",
    )

    conservation: list[DistrictConservation] = Field(default_factory=list)
    efficiency_gap_before: str | None = None
    efficiency_gap_after: str | None = None

    num_wards: int = Field(0, ge=0)
    num_edges: int = Field(0, ge=0)
    district_labels: dict[str, int] = Field(
        default_factory=dict,
        description="Input district label -> dense district index",
    )

    @property
    def conserved(self) -> bool:
        return (
            all(row.conserved for row in self.conservation)
            and self.efficiency_gap_before == self.efficiency_gap_after
        )
