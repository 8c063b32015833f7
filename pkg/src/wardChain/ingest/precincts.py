"""
Polygonal precincts and their input format.

Input is a GeoJSON-style FeatureCollection: each feature has a Polygon or
MultiPolygon geometry and properties

    id, pop, rep, dem, district, county (optional), frozen (optional)

Attributes are carried as exact fractions so the conservation of district
totals across the pipeline can be checked as equality.
"""

import json
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Any

from shapely.geometry import MultiPolygon, Polygon, shape
from shapely.geometry.base import BaseGeometry
from shapely.ops import unary_union

from ..core.exceptions import IngestError, OutputError

logger = logging.getLogger(__name__)

LENGTH_EPSILON = 1e-9


@dataclass(frozen=True)
class PrecinctGeometry:
    """
    A precinct: one or more polygons plus its attributes.

    islands are precincts merged in whole; their attributes are already
    counted in this precinct's totals.
    """
    id: str
    geometry: Polygon | MultiPolygon
    population: Fraction
    rep_votes: Fraction
    dem_votes: Fraction
    district: str
    county: str
    frozen: bool = False
    islands: tuple["PrecinctGeometry", ...] = ()

    @property
    def parts(self) -> list[Polygon]:
        if isinstance(self.geometry, MultiPolygon):
            return list(self.geometry.geoms)
        return [self.geometry]

    @property
    def is_multipart(self) -> bool:
        return len(self.parts) > 1

    @property
    def total_area(self) -> float:
        """Area of the precinct's own geometry plus its attached islands."""
        return float(self.geometry.area) + sum(island.total_area for island in self.islands)

    @property
    def total_length(self) -> float:
        """Boundary length of the own geometry plus its attached islands."""
        return float(self.geometry.length) + sum(island.total_length for island in self.islands)

    def attach(self, island: "PrecinctGeometry") -> "PrecinctGeometry":
        """
        This precinct with an island attached whole.

        The island's attributes are added; its geometry stays a separate
        piece outside this precinct's own polygons.
        """
        absorbed = self.absorb(island, geometry=False)
        return replace(absorbed, islands=absorbed.islands + (island,))

    def absorb(self, other: "PrecinctGeometry", *, geometry: bool = True, attributes: bool = True) -> "PrecinctGeometry":
        """
        This precinct with another's geometry and/or attributes added.

        Attached islands travel with the attributes.
        """
        merged = self
        if geometry:
            union = unary_union([self.geometry, other.geometry])
            if not isinstance(union, Polygon | MultiPolygon):
                raise IngestError(
                    f"union of {self.id} and {other.id} is not polygonal",
                    precincts=[self.id, other.id],
                )
            merged = replace(merged, geometry=union)
        if attributes:
            merged = replace(
                merged,
                population=merged.population + other.population,
                rep_votes=merged.rep_votes + other.rep_votes,
                dem_votes=merged.dem_votes + other.dem_votes,
                frozen=merged.frozen or other.frozen,
                islands=merged.islands + other.islands,
            )
        return merged


def _fraction(value: Any, name: str, precinct: str) -> Fraction:
    if isinstance(value, bool) or value is None:
        raise IngestError(f"precinct {precinct}: {name} must be a number", precincts=[precinct])
    try:
        number = Fraction(str(value)) if isinstance(value, float) else Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise IngestError(f"precinct {precinct}: {name}={value!r} is not a number", precincts=[precinct]) from exc
    if number < 0:
        raise IngestError(f"precinct {precinct}: {name} is negative", precincts=[precinct])
    return number


def _flag(value: Any) -> bool:
    if isinstance(value, str):
        return value.strip().lower() in {"1", "true", "yes", "t", "y"}
    return bool(value)


def precinct_from_feature(feature: dict[str, Any], index: int) -> PrecinctGeometry:
    """Build and validate one precinct from a feature mapping."""
    properties = feature.get("properties") or {}
    raw_id = properties.get("id", feature.get("id"))
    if raw_id is None:
        raise IngestError(f"feature {index} has no id")
    precinct = str(raw_id)

    try:
        geometry: BaseGeometry = shape(feature["geometry"])
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise IngestError(f"precinct {precinct} has no readable geometry", precincts=[precinct]) from exc
    if not isinstance(geometry, Polygon | MultiPolygon):
        raise IngestError(
            f"precinct {precinct} geometry is {geometry.geom_type}, expected Polygon or MultiPolygon",
            precincts=[precinct],
        )
    if not geometry.is_valid:
        raise IngestError(f"precinct {precinct} geometry is not a valid polygon", precincts=[precinct])
    if not (math.isfinite(geometry.area) and geometry.area > 0):
        raise IngestError(f"precinct {precinct} has nonpositive area", precincts=[precinct])

    if "district" not in properties:
        raise IngestError(f"precinct {precinct} has no district", precincts=[precinct])

    return PrecinctGeometry(
        id=precinct,
        geometry=geometry,
        population=_fraction(properties.get("pop"), "pop", precinct),
        rep_votes=_fraction(properties.get("rep"), "rep", precinct),
        dem_votes=_fraction(properties.get("dem"), "dem", precinct),
        district=str(properties["district"]),
        county=str(properties.get("county", precinct)),
        frozen=_flag(properties.get("frozen", False)),
    )


def parse_precincts(document: Any) -> list[PrecinctGeometry]:
    """
    Precincts of a FeatureCollection mapping.

    Raises:
        IngestError: not a FeatureCollection, duplicate ids or bad features
    """
    if not isinstance(document, dict) or document.get("type") != "FeatureCollection":
        raise IngestError(
            "geometry input must be a FeatureCollection document",
            recovery_suggestion="Pass the precinct geometry file, not node/edge tables",
        )
    features = document.get("features")
    if not isinstance(features, list) or not features:
        raise IngestError("FeatureCollection has no features")

    precincts = [precinct_from_feature(feature, i) for i, feature in enumerate(features)]
    seen: set[str] = set()
    for precinct in precincts:
        if precinct.id in seen:
            raise IngestError(f"duplicate precinct id {precinct.id}", precincts=[precinct.id])
        seen.add(precinct.id)
    return precincts


def load_precincts(path: Path) -> list[PrecinctGeometry]:
    """Read a geometry document from disk."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise OutputError(f"geometry file not found: {path}", path=str(path)) from exc
    except OSError as exc:
        raise OutputError(f"cannot read geometry file: {exc}", path=str(path)) from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IngestError(
            f"{path} is not a JSON geometry document",
            recovery_suggestion="Node/edge tables are already a graph; pass them to 'run' instead",
        ) from exc

    precincts = parse_precincts(document)
    logger.info(
        f"Loaded {len(precincts)} precincts from {path}",
        extra={"event_type": "precincts_loaded", "precincts": len(precincts)},
    )
    return precincts


def shared_length(a: BaseGeometry, b: BaseGeometry) -> float:
    """Length of boundary two polygons have in common; point contacts count 0."""
    return float(a.boundary.intersection(b.boundary).length)


def centroid_distance(a: PrecinctGeometry, b: PrecinctGeometry) -> float:
    return float(a.geometry.centroid.distance(b.geometry.centroid))


def nearest(
    target: PrecinctGeometry,
    candidates: list[PrecinctGeometry],
) -> tuple[PrecinctGeometry, float] | None:
    """Closest candidate by centroid distance; ties go to the lowest id."""
    best: tuple[float, str, PrecinctGeometry] | None = None
    for candidate in candidates:
        key = (centroid_distance(target, candidate), candidate.id)
        if best is None or key < best[:2]:
            best = (key[0], key[1], candidate)
    if best is None:
        return None
    return best[2], best[0]
