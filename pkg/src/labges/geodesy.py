"""Great-circle distances, per-mode route corrections and flight haul classes.

Distances are computed on a sphere; the sub-percent error against an
ellipsoid is negligible next to emission-factor uncertainty. Real routes
are longer than the great circle, so each travel mode carries a
multiplier/additive correction that is applied before any factor lookup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

EARTH_RADIUS_KM = 6371.0


@dataclass(frozen=True)
class GeoPoint:
    """A geographic point in decimal degrees.

    Valid latitudes lie in [-90, 90] and longitudes in (-180, 180].
    Construction does not validate; `is_valid` and inventory validation do.
    """

    lat_deg: float
    lon_deg: float

    def is_valid(self) -> bool:
        return -90.0 <= self.lat_deg <= 90.0 and -180.0 < self.lon_deg <= 180.0


class HaulClass(str, Enum):
    """Flight distance band selecting the applicable aviation factor."""

    SHORT = "short"
    MEDIUM = "medium"
    LONG = "long"


@dataclass(frozen=True)
class ModeCorrection:
    """Route correction for one travel mode: multiplier >= 1, additive >= 0 km."""

    multiplier: float = 1.0
    additive_km: float = 0.0


# Road detours and rail windiness follow common carbon-accounting practice;
# the +95 km flight additive stands in for taxiing, holding and indirect routing.
_DEFAULT_MODES: dict[str, ModeCorrection] = {
    "plane": ModeCorrection(1.0, 95.0),
    "train": ModeCorrection(1.2, 0.0),
    "rer": ModeCorrection(1.2, 0.0),
    "streetcar": ModeCorrection(1.2, 0.0),
    "metro": ModeCorrection(1.2, 0.0),
    "car": ModeCorrection(1.3, 0.0),
    "taxi": ModeCorrection(1.3, 0.0),
    "bus": ModeCorrection(1.3, 0.0),
    "ferry": ModeCorrection(1.0, 0.0),
}


@dataclass(frozen=True)
class RouteCorrection:
    """Per-mode distance corrections plus the haul-class thresholds.

    Thresholds follow the short/medium/long segmentation used by per-haul
    aviation factors: 0 < short_max_km < medium_max_km.
    """

    modes: Mapping[str, ModeCorrection] = field(default_factory=lambda: dict(_DEFAULT_MODES))
    short_max_km: float = 1000.0
    medium_max_km: float = 3500.0

    def __post_init__(self) -> None:
        if not (0.0 < self.short_max_km < self.medium_max_km):
            raise ValueError(
                f"haul thresholds must satisfy 0 < short ({self.short_max_km}) "
                f"< medium ({self.medium_max_km})"
            )

    def for_mode(self, mode: object) -> ModeCorrection:
        key = getattr(mode, "value", mode)
        return self.modes.get(str(key), ModeCorrection())

    def to_dict(self) -> dict:
        return {
            "modes": {
                name: {"multiplier": mc.multiplier, "additive_km": mc.additive_km}
                for name, mc in sorted(self.modes.items())
            },
            "haul_thresholds": {
                "short_max_km": self.short_max_km,
                "medium_max_km": self.medium_max_km,
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "RouteCorrection":
        modes = dict(_DEFAULT_MODES)
        for name, mc in data.get("modes", {}).items():
            modes[str(name)] = ModeCorrection(
                multiplier=float(mc.get("multiplier", 1.0)),
                additive_km=float(mc.get("additive_km", 0.0)),
            )
        thresholds = data.get("haul_thresholds", {})
        return cls(
            modes=modes,
            short_max_km=float(thresholds.get("short_max_km", 1000.0)),
            medium_max_km=float(thresholds.get("medium_max_km", 3500.0)),
        )


DEFAULT_ROUTE_CORRECTION = RouteCorrection()


def great_circle_km(a: GeoPoint, b: GeoPoint) -> float:
    """Haversine distance in km on a sphere of radius 6371.0 km.

    Symmetric in its arguments and exactly zero for identical points.
    """
    lat1 = math.radians(a.lat_deg)
    lat2 = math.radians(b.lat_deg)
    dlat = math.radians(b.lat_deg - a.lat_deg)
    dlon = math.radians(b.lon_deg - a.lon_deg)
    h = math.sin(dlat / 2.0) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def corrected_distance(
    mode: object, gc_km: float, correction: RouteCorrection | None = None
) -> float:
    """Apply the mode's route correction: gc_km * multiplier + additive_km."""
    if gc_km < 0:
        raise ValueError(f"great-circle distance must be >= 0, got {gc_km}")
    mc = (correction or DEFAULT_ROUTE_CORRECTION).for_mode(mode)
    return gc_km * mc.multiplier + mc.additive_km


def classify_haul(corrected_km: float, correction: RouteCorrection | None = None) -> HaulClass:
    """Classify a corrected one-way distance; boundary values go to the lower class."""
    cfg = correction or DEFAULT_ROUTE_CORRECTION
    if corrected_km <= cfg.short_max_km:
        return HaulClass.SHORT
    if corrected_km <= cfg.medium_max_km:
        return HaulClass.MEDIUM
    return HaulClass.LONG
