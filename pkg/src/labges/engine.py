"""Footprint engine: activity data -> emission records -> aggregated views.

Every conversion produces atomic EmissionRecords attributed to one of the
23 regulatory categories (scope 1: 1-5, scope 2: 6-7, scope 3: 8-23).
Aggregations use compensated (Neumaier) summation over a stable record
order so the regulatory total, the synthetic total and the plain record
sum agree exactly. Per-record uncertainties combine in quadrature under
an independence assumption.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from . import factors as factors_mod
from .factors import EmissionFactor, FactorCategory, FactorSet, FactorUnit, MissingFactor
from .geodesy import HaulClass, RouteCorrection, classify_haul
from .inventory import (
    Building,
    CommuteResponse,
    Finding,
    Inventory,
    LabInfo,
    LabVehicle,
    MemberStatus,
    TravelMode,
    TravelPurpose,
    Trip,
    VehicleFuel,
    validate_inventory,
)

RESULT_SCHEMA_VERSION = 1


class EngineError(Exception):
    """Base class for computation failures."""


class InvalidInventory(EngineError):
    """The inventory failed validation; `findings` lists the problems."""

    def __init__(self, findings: Sequence[Finding]):
        self.findings = list(findings)
        super().__init__("; ".join(str(f) for f in findings) or "invalid inventory")


class NoResponses(EngineError):
    """Commute extrapolation is impossible: members > 0 but no survey responses."""


def stable_sum(values: Iterable[float]) -> float:
    """Neumaier compensated sum; deterministic for a fixed input order."""
    total = 0.0
    compensation = 0.0
    for x in values:
        t = total + x
        if abs(total) >= abs(x):
            compensation += (total - t) + x
        else:
            compensation += (x - t) + total
        total = t
    return total + compensation


class Scope(int, Enum):
    DIRECT = 1
    PURCHASED_ENERGY = 2
    OTHER_INDIRECT = 3


class RegulatoryCategory(int, Enum):
    """The 23 regulatory emission categories of the French GHG statement."""

    STATIONARY_COMBUSTION = 1
    MOBILE_COMBUSTION = 2
    NON_ENERGY_PROCESSES = 3
    FUGITIVE_EMISSIONS = 4
    BIOMASS = 5
    PURCHASED_ELECTRICITY = 6
    PURCHASED_STEAM_HEAT_COOLING = 7
    UPSTREAM_ENERGY = 8
    PURCHASED_GOODS_SERVICES = 9
    FIXED_ASSETS = 10
    WASTE = 11
    UPSTREAM_FREIGHT = 12
    BUSINESS_TRAVEL = 13
    UPSTREAM_LEASED_ASSETS = 14
    INVESTMENTS = 15
    VISITOR_CUSTOMER_TRAVEL = 16
    DOWNSTREAM_FREIGHT = 17
    USE_OF_SOLD_PRODUCTS = 18
    END_OF_LIFE_SOLD_PRODUCTS = 19
    DOWNSTREAM_FRANCHISES = 20
    DOWNSTREAM_LEASED_ASSETS = 21
    EMPLOYEE_COMMUTING = 22
    OTHER_INDIRECT = 23

    @property
    def scope(self) -> Scope:
        if self.value <= 5:
            return Scope.DIRECT
        if self.value <= 7:
            return Scope.PURCHASED_ENERGY
        return Scope.OTHER_INDIRECT


CATEGORY_LABELS_EN: dict[RegulatoryCategory, str] = {
    RegulatoryCategory.STATIONARY_COMBUSTION: "Direct emissions from stationary combustion sources",
    RegulatoryCategory.MOBILE_COMBUSTION: "Direct emissions from mobile combustion sources",
    RegulatoryCategory.NON_ENERGY_PROCESSES: "Direct emissions from non-energy processes",
    RegulatoryCategory.FUGITIVE_EMISSIONS: "Direct fugitive emissions",
    RegulatoryCategory.BIOMASS: "Emissions from biomass (soils, forests)",
    RegulatoryCategory.PURCHASED_ELECTRICITY: "Indirect emissions from purchased electricity",
    RegulatoryCategory.PURCHASED_STEAM_HEAT_COOLING: "Indirect emissions from steam, heating or cooling",
    RegulatoryCategory.UPSTREAM_ENERGY: (
        "Emissions linked to energy not included in the direct and indirect energy categories"
    ),
    RegulatoryCategory.PURCHASED_GOODS_SERVICES: "Purchased goods and services",
    RegulatoryCategory.FIXED_ASSETS: "Fixed assets",
    RegulatoryCategory.WASTE: "Waste",
    RegulatoryCategory.UPSTREAM_FREIGHT: "Transportation of goods upstream",
    RegulatoryCategory.BUSINESS_TRAVEL: "Employee business travel",
    RegulatoryCategory.UPSTREAM_LEASED_ASSETS: "Leased assets upstream",
    RegulatoryCategory.INVESTMENTS: "Investments",
    RegulatoryCategory.VISITOR_CUSTOMER_TRAVEL: "Customer and visitor travel",
    RegulatoryCategory.DOWNSTREAM_FREIGHT: "Transportation of goods downstream",
    RegulatoryCategory.USE_OF_SOLD_PRODUCTS: "Use of sold products",
    RegulatoryCategory.END_OF_LIFE_SOLD_PRODUCTS: "End of life of sold products",
    RegulatoryCategory.DOWNSTREAM_FRANCHISES: "Franchises downstream",
    RegulatoryCategory.DOWNSTREAM_LEASED_ASSETS: "Leased assets downstream",
    RegulatoryCategory.EMPLOYEE_COMMUTING: "Employee commuting",
    RegulatoryCategory.OTHER_INDIRECT: "Other indirect emissions",
}

CATEGORY_LABELS_FR: dict[RegulatoryCategory, str] = {
    RegulatoryCategory.STATIONARY_COMBUSTION: "Émissions directes des sources fixes de combustion",
    RegulatoryCategory.MOBILE_COMBUSTION: "Émissions directes des sources mobiles à moteur thermique",
    RegulatoryCategory.NON_ENERGY_PROCESSES: "Émissions directes des procédés hors énergie",
    RegulatoryCategory.FUGITIVE_EMISSIONS: "Émissions directes fugitives",
    RegulatoryCategory.BIOMASS: "Émissions issues de la biomasse (sols et forêts)",
    RegulatoryCategory.PURCHASED_ELECTRICITY: "Émissions indirectes liées à la consommation d'électricité",
    RegulatoryCategory.PURCHASED_STEAM_HEAT_COOLING: (
        "Émissions indirectes liées à la consommation de vapeur, chaleur ou froid"
    ),
    RegulatoryCategory.UPSTREAM_ENERGY: (
        "Émissions liées à l'énergie non incluse dans les catégories précédentes"
    ),
    RegulatoryCategory.PURCHASED_GOODS_SERVICES: "Achats de produits ou services",
    RegulatoryCategory.FIXED_ASSETS: "Immobilisation des biens",
    RegulatoryCategory.WASTE: "Déchets",
    RegulatoryCategory.UPSTREAM_FREIGHT: "Transport de marchandises amont",
    RegulatoryCategory.BUSINESS_TRAVEL: "Déplacements professionnels",
    RegulatoryCategory.UPSTREAM_LEASED_ASSETS: "Actifs en leasing amont",
    RegulatoryCategory.INVESTMENTS: "Investissements",
    RegulatoryCategory.VISITOR_CUSTOMER_TRAVEL: "Transports de visiteurs et de clients",
    RegulatoryCategory.DOWNSTREAM_FREIGHT: "Transport de marchandise aval",
    RegulatoryCategory.USE_OF_SOLD_PRODUCTS: "Utilisation de produits vendus",
    RegulatoryCategory.END_OF_LIFE_SOLD_PRODUCTS: "Fin de vie des produits vendus",
    RegulatoryCategory.DOWNSTREAM_FRANCHISES: "Franchise aval",
    RegulatoryCategory.DOWNSTREAM_LEASED_ASSETS: "Leasing aval",
    RegulatoryCategory.EMPLOYEE_COMMUTING: "Déplacements domicile travail",
    RegulatoryCategory.OTHER_INDIRECT: "Autres émissions indirectes",
}


class EmissionSource(str, Enum):
    """The five activity families; also the stable record ordering."""

    BUILDING_ENERGY = "building_energy"
    REFRIGERANTS = "refrigerants"
    LAB_VEHICLES = "lab_vehicles"
    COMMUTES = "commutes"
    PROFESSIONAL_TRAVEL = "professional_travel"


_SOURCE_ORDER = {source: i for i, source in enumerate(EmissionSource)}


@dataclass(frozen=True)
class Dimensions:
    """Optional analysis axes carried by travel and commute records."""

    purpose: TravelPurpose | None = None
    status: MemberStatus | None = None
    mode: str | None = None
    haul: HaulClass | None = None


@dataclass(frozen=True)
class EmissionRecord:
    """Atomic result: one activity slice converted to kg CO2e."""

    source: EmissionSource
    category: RegulatoryCategory
    co2e_kg: float
    uncertainty_kg: float
    label: str = ""
    dimensions: Dimensions | None = None

    def to_dict(self) -> dict:
        data: dict = {
            "source": self.source.value,
            "category": self.category.value,
            "co2e_kg": self.co2e_kg,
            "uncertainty_kg": self.uncertainty_kg,
        }
        if self.label:
            data["label"] = self.label
        if self.dimensions is not None:
            d = self.dimensions
            if d.purpose is not None:
                data["purpose"] = d.purpose.value
            if d.status is not None:
                data["status"] = d.status.value
            if d.mode is not None:
                data["mode"] = d.mode
            if d.haul is not None:
                data["haul"] = d.haul.value
        return data


def _record(
    source: EmissionSource,
    category: RegulatoryCategory,
    quantity: float,
    factor: EmissionFactor,
    value: float | None = None,
    label: str = "",
    dimensions: Dimensions | None = None,
) -> EmissionRecord:
    per_unit = factor.total_value if value is None else value
    co2e = quantity * per_unit
    return EmissionRecord(
        source=source,
        category=category,
        co2e_kg=co2e,
        uncertainty_kg=co2e * factor.relative_uncertainty,
        label=label,
        dimensions=dimensions,
    )


@dataclass(frozen=True)
class EngineConfig:
    """Knobs the engine reads besides the factor set itself."""

    route_correction: RouteCorrection = field(default_factory=RouteCorrection)
    grid_zone: str = "france"
    heat_zone: str = "france"


DEFAULT_ENGINE_CONFIG = EngineConfig()


def _expect_unit(factor: EmissionFactor, unit: FactorUnit | str) -> EmissionFactor:
    wanted = unit.value if isinstance(unit, FactorUnit) else str(unit)
    if factor.unit.value != wanted:
        raise MissingFactor(
            factor.category.value,
            factor.selector,
            f"factor {factor.id!r} is per {factor.unit.value}, activity is per {wanted}",
        )
    return factor


# ---------------------------------------------------------------------------
# Per-source conversions
# ---------------------------------------------------------------------------


def compute_building_emissions(
    building: Building, factor_set: FactorSet, config: EngineConfig | None = None
) -> list[EmissionRecord]:
    """Convert one building's consumptions, prorated by the occupied share.

    Purchased electricity goes to category 6 (self-generated kWh are not
    purchased and stay out), heat-network energy to category 7, on-site
    fuel combustion to category 1 and each refrigerant leak to category 4
    at kg x GWP.
    """
    config = config or DEFAULT_ENGINE_CONFIG
    share = building.occupied_share
    records: list[EmissionRecord] = []

    electricity = building.electricity_kwh * share
    if electricity > 0:
        factor = _expect_unit(
            factors_mod.lookup(factor_set, FactorCategory.ELECTRICITY, {"zone": config.grid_zone}),
            FactorUnit.KWH,
        )
        records.append(
            _record(
                EmissionSource.BUILDING_ENERGY,
                RegulatoryCategory.PURCHASED_ELECTRICITY,
                electricity,
                factor,
                label=f"{building.name}: purchased electricity",
            )
        )

    heat = building.heat_network_kwh_pci * share
    if heat > 0:
        factor = _expect_unit(
            factors_mod.lookup(factor_set, FactorCategory.HEAT_NETWORK, {"zone": config.heat_zone}),
            FactorUnit.KWH,
        )
        records.append(
            _record(
                EmissionSource.BUILDING_ENERGY,
                RegulatoryCategory.PURCHASED_STEAM_HEAT_COOLING,
                heat,
                factor,
                label=f"{building.name}: heat network",
            )
        )

    for fuel_use in building.fuel_combustion:
        quantity = fuel_use.quantity * share
        if quantity <= 0:
            continue
        factor = _expect_unit(
            factors_mod.lookup(factor_set, FactorCategory.STATIONARY_COMBUSTION, {"fuel": fuel_use.fuel}),
            fuel_use.unit,
        )
        records.append(
            _record(
                EmissionSource.BUILDING_ENERGY,
                RegulatoryCategory.STATIONARY_COMBUSTION,
                quantity,
                factor,
                label=f"{building.name}: {fuel_use.fuel} combustion",
            )
        )

    for leak in building.refrigerant_leaks:
        kg = leak.kg * share
        if kg <= 0:
            continue
        factor = _expect_unit(
            factors_mod.lookup(factor_set, FactorCategory.REFRIGERANT_GWP, {"gas": leak.gas}),
            FactorUnit.KG,
        )
        records.append(
            _record(
                EmissionSource.REFRIGERANTS,
                RegulatoryCategory.FUGITIVE_EMISSIONS,
                kg,
                factor,
                value=factor.use_phase_value,
                label=f"{building.name}: {leak.gas} leak",
            )
        )
    return records


def compute_vehicle_emissions(
    vehicle: LabVehicle, factor_set: FactorSet, config: EngineConfig | None = None
) -> list[EmissionRecord]:
    """Convert one lab vehicle's annual usage.

    Use-phase emissions of thermal engines land in category 2; electric
    charging is assumed billed through the buildings' electricity and is
    not added here. The manufacturing component always lands in
    category 10 (fixed assets).
    """
    kind = vehicle.kind.value
    fuel = vehicle.fuel.value
    if vehicle.annual_distance_km is not None:
        quantity = vehicle.annual_distance_km
        factor = factors_mod.lookup(factor_set, FactorCategory.VEHICLE, {"kind": kind, "fuel": fuel})
        _expect_unit(factor, FactorUnit.KM)
    elif vehicle.annual_fuel is not None:
        quantity = vehicle.annual_fuel.quantity
        factor = factors_mod.lookup(
            factor_set, FactorCategory.VEHICLE, {"fuel": vehicle.annual_fuel.fuel, "basis": "fuel"}
        )
        _expect_unit(factor, vehicle.annual_fuel.unit)
    elif vehicle.hours_of_operation is not None:
        quantity = vehicle.hours_of_operation
        factor = factors_mod.lookup(
            factor_set, FactorCategory.VEHICLE, {"kind": kind, "fuel": fuel, "basis": "hour"}
        )
        _expect_unit(factor, FactorUnit.HOUR)
    else:
        raise InvalidInventory([Finding("vehicles", "no usage basis set")])

    if quantity <= 0:
        return []
    records = []
    if vehicle.fuel is not VehicleFuel.ELECTRIC and factor.use_phase_value > 0:
        records.append(
            _record(
                EmissionSource.LAB_VEHICLES,
                RegulatoryCategory.MOBILE_COMBUSTION,
                quantity,
                factor,
                value=factor.use_phase_value,
                label=f"{kind} ({fuel}): use phase",
            )
        )
    if factor.manufacturing_value > 0:
        records.append(
            _record(
                EmissionSource.LAB_VEHICLES,
                RegulatoryCategory.FIXED_ASSETS,
                quantity,
                factor,
                value=factor.manufacturing_value,
                label=f"{kind} ({fuel}): manufacturing",
            )
        )
    return records


#: Selector template per transport mode; plane adds haul, walk has no factor.
_TRANSPORT_SELECTORS: dict[str, dict[str, str]] = {
    "train": {"mode": "train", "zone": "france"},
    "rer": {"mode": "rer"},
    "metro": {"mode": "metro"},
    "streetcar": {"mode": "streetcar"},
    "bus": {"mode": "bus"},
    "car": {"mode": "car"},
    "taxi": {"mode": "taxi"},
    "ferry": {"mode": "ferry"},
}


def _transport_factor(
    factor_set: FactorSet, mode_value: str, one_way_km: float, config: EngineConfig
) -> tuple[EmissionFactor, HaulClass | None]:
    if mode_value == "plane":
        haul = classify_haul(one_way_km, config.route_correction)
        factor = factors_mod.lookup(
            factor_set, FactorCategory.TRANSPORT_MODE, {"mode": "plane", "haul": haul.value}
        )
        return factor, haul
    selector = _TRANSPORT_SELECTORS.get(mode_value)
    if selector is None:
        raise MissingFactor(FactorCategory.TRANSPORT_MODE.value, {"mode": mode_value})
    return factors_mod.lookup(factor_set, FactorCategory.TRANSPORT_MODE, selector), None


def compute_commute_emissions(
    responses: Sequence[CommuteResponse],
    lab: LabInfo,
    factor_set: FactorSet,
    config: EngineConfig | None = None,
) -> list[EmissionRecord]:
    """Convert survey responses and extrapolate to the whole lab.

    Each leg contributes 2 x one_way_km x days x weeks x factor; the
    total is scaled by members / respondents so non-respondents are
    represented by the average respondent. Walking legs emit nothing but
    their respondent still counts.
    """
    config = config or DEFAULT_ENGINE_CONFIG
    if not responses:
        raise NoResponses(
            f"no commute survey responses for {lab.total_members} members; "
            "cannot extrapolate commuting emissions"
        )
    scale = lab.total_members / len(responses)
    records: list[EmissionRecord] = []
    for response in responses:
        annual_trips = 2.0 * response.days_per_week * response.weeks_per_year
        for leg in response.legs:
            if leg.mode.value == "walk":
                continue
            km = leg.one_way_km * annual_trips
            if km <= 0:
                continue
            factor, haul = _transport_factor(factor_set, leg.mode.value, leg.one_way_km, config)
            records.append(
                _record(
                    EmissionSource.COMMUTES,
                    RegulatoryCategory.EMPLOYEE_COMMUTING,
                    km * scale,
                    factor,
                    label=f"commute by {leg.mode.value}",
                    dimensions=Dimensions(status=response.status, mode=leg.mode.value, haul=haul),
                )
            )
    return records


def compute_travel_emissions(
    trips: Sequence[Trip], factor_set: FactorSet, config: EngineConfig | None = None
) -> list[EmissionRecord]:
    """Convert normalized professional trips into category-13 records.

    Round trips double the leg distance. Plane legs pick the per-haul
    factor from the one-way corrected distance. Car and taxi legs divide
    the vehicle-kilometre emissions by the occupant count.
    """
    config = config or DEFAULT_ENGINE_CONFIG
    records: list[EmissionRecord] = []
    for trip in trips:
        for leg in trip.legs:
            distance = leg.corrected_km * (2.0 if leg.round_trip else 1.0)
            if distance <= 0:
                continue
            factor, haul = _transport_factor(factor_set, leg.mode.value, leg.corrected_km, config)
            co2e = distance * factor.total_value
            if leg.mode in (TravelMode.CAR, TravelMode.TAXI):
                co2e /= leg.car_occupancy if leg.car_occupancy else 1
            records.append(
                EmissionRecord(
                    source=EmissionSource.PROFESSIONAL_TRAVEL,
                    category=RegulatoryCategory.BUSINESS_TRAVEL,
                    co2e_kg=co2e,
                    uncertainty_kg=co2e * factor.relative_uncertainty,
                    label=f"trip {trip.trip_number}: {leg.mode.value}",
                    dimensions=Dimensions(
                        purpose=trip.purpose, status=trip.status, mode=leg.mode.value, haul=haul
                    ),
                )
            )
    return records


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CategoryRow:
    category: RegulatoryCategory
    co2e_kg: float
    uncertainty_kg: float


@dataclass(frozen=True)
class RegulatoryTable:
    """All 23 categories (zero-filled), per-scope subtotals and the total."""

    rows: tuple[CategoryRow, ...]
    scope_subtotals: Mapping[int, float]
    scope_uncertainties: Mapping[int, float]
    total_kg: float
    total_uncertainty_kg: float

    def row(self, category: RegulatoryCategory) -> CategoryRow:
        return self.rows[category.value - 1]

    def to_dict(self) -> dict:
        return {
            "rows": [
                {"category": r.category.value, "co2e_kg": r.co2e_kg, "uncertainty_kg": r.uncertainty_kg}
                for r in self.rows
            ],
            "scope_subtotals": {str(s): v for s, v in sorted(self.scope_subtotals.items())},
            "scope_uncertainties": {str(s): v for s, v in sorted(self.scope_uncertainties.items())},
            "total_kg": self.total_kg,
            "total_uncertainty_kg": self.total_uncertainty_kg,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "RegulatoryTable":
        return cls(
            rows=tuple(
                CategoryRow(RegulatoryCategory(r["category"]), float(r["co2e_kg"]), float(r["uncertainty_kg"]))
                for r in data["rows"]
            ),
            scope_subtotals={int(k): float(v) for k, v in data["scope_subtotals"].items()},
            scope_uncertainties={int(k): float(v) for k, v in data["scope_uncertainties"].items()},
            total_kg=float(data["total_kg"]),
            total_uncertainty_kg=float(data["total_uncertainty_kg"]),
        )


def _quadrature(values: Iterable[float]) -> float:
    return math.sqrt(stable_sum(v * v for v in values))


def aggregate_regulatory(records: Sequence[EmissionRecord]) -> RegulatoryTable:
    """Sum records per category; all 23 rows are always present."""
    rows = []
    for category in RegulatoryCategory:
        in_cat = [r for r in records if r.category is category]
        rows.append(
            CategoryRow(
                category=category,
                co2e_kg=stable_sum(r.co2e_kg for r in in_cat),
                uncertainty_kg=_quadrature(r.uncertainty_kg for r in in_cat),
            )
        )
    subtotals = {}
    uncertainties = {}
    for scope in Scope:
        in_scope = [r for r in records if r.category.scope is scope]
        subtotals[scope.value] = stable_sum(r.co2e_kg for r in in_scope)
        uncertainties[scope.value] = _quadrature(r.uncertainty_kg for r in in_scope)
    return RegulatoryTable(
        rows=tuple(rows),
        scope_subtotals=subtotals,
        scope_uncertainties=uncertainties,
        total_kg=stable_sum(r.co2e_kg for r in records),
        total_uncertainty_kg=_quadrature(r.uncertainty_kg for r in records),
    )


#: Synthetic leaves in display order (the operational re-aggregation).
SYNTHETIC_LEAVES = (
    "buildings_heating",
    "buildings_electricity",
    "buildings_refrigerants",
    "travel_commutes",
    "travel_vehicles",
    "travel_professional",
)


def _synthetic_leaf(record: EmissionRecord) -> str:
    if record.source is EmissionSource.BUILDING_ENERGY:
        if record.category is RegulatoryCategory.PURCHASED_ELECTRICITY:
            return "buildings_electricity"
        return "buildings_heating"
    if record.source is EmissionSource.REFRIGERANTS:
        return "buildings_refrigerants"
    if record.source is EmissionSource.LAB_VEHICLES:
        return "travel_vehicles"
    if record.source is EmissionSource.COMMUTES:
        return "travel_commutes"
    return "travel_professional"


@dataclass(frozen=True)
class SyntheticFootprint:
    """Operational view: buildings vs travel, with per-leaf share of total."""

    leaves: Mapping[str, float]
    total_kg: float

    @property
    def buildings_total(self) -> float:
        return stable_sum(self.leaves[name] for name in SYNTHETIC_LEAVES[:3])

    @property
    def travel_total(self) -> float:
        return stable_sum(self.leaves[name] for name in SYNTHETIC_LEAVES[3:])

    def share(self, leaf: str) -> float:
        if self.total_kg <= 0:
            return 0.0
        return self.leaves[leaf] / self.total_kg

    def to_dict(self) -> dict:
        return {
            "buildings": {
                "heating": self.leaves["buildings_heating"],
                "electricity": self.leaves["buildings_electricity"],
                "refrigerants": self.leaves["buildings_refrigerants"],
            },
            "travel": {
                "commutes": self.leaves["travel_commutes"],
                "vehicles": self.leaves["travel_vehicles"],
                "professional_travel": self.leaves["travel_professional"],
            },
            "shares": {name: self.share(name) for name in SYNTHETIC_LEAVES},
            "total_kg": self.total_kg,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "SyntheticFootprint":
        buildings = data["buildings"]
        travel = data["travel"]
        leaves = {
            "buildings_heating": float(buildings["heating"]),
            "buildings_electricity": float(buildings["electricity"]),
            "buildings_refrigerants": float(buildings["refrigerants"]),
            "travel_commutes": float(travel["commutes"]),
            "travel_vehicles": float(travel["vehicles"]),
            "travel_professional": float(travel["professional_travel"]),
        }
        return cls(leaves=leaves, total_kg=float(data["total_kg"]))


def aggregate_synthetic(records: Sequence[EmissionRecord]) -> SyntheticFootprint:
    """Re-aggregate records into the buildings/travel decision view.

    Every record lands in exactly one leaf, and the total is computed
    over the same record order as the regulatory table, so the two views
    conserve mass exactly.
    """
    leaves = {
        name: stable_sum(r.co2e_kg for r in records if _synthetic_leaf(r) == name)
        for name in SYNTHETIC_LEAVES
    }
    return SyntheticFootprint(leaves=leaves, total_kg=stable_sum(r.co2e_kg for r in records))


@dataclass(frozen=True)
class BreakdownRow:
    value: str
    co2e_kg: float
    share: float


_BREAKDOWN_ORDERS: dict[str, list[str]] = {
    "purpose": [p.value for p in TravelPurpose],
    "status": [s.value for s in MemberStatus] + ["unknown"],
    "mode": [m.value for m in TravelMode],
    "haul": [h.value for h in HaulClass] + ["unknown"],
}


def breakdown_travel(records: Sequence[EmissionRecord], axis: str) -> tuple[BreakdownRow, ...]:
    """Break professional-travel emissions down along one analysis axis.

    Records lacking the axis value fall into the "unknown" bucket; shares
    are taken over the filtered records and sum to 1 when any exist.
    """
    if axis not in _BREAKDOWN_ORDERS:
        raise ValueError(f"unknown breakdown axis {axis!r}; expected one of {sorted(_BREAKDOWN_ORDERS)}")
    travel = [r for r in records if r.source is EmissionSource.PROFESSIONAL_TRAVEL]
    if not travel:
        return ()

    def axis_value(record: EmissionRecord) -> str:
        d = record.dimensions
        value = getattr(d, axis, None) if d is not None else None
        if value is None:
            return "unknown"
        return getattr(value, "value", value)

    total = stable_sum(r.co2e_kg for r in travel)
    rows = []
    for value in _BREAKDOWN_ORDERS[axis]:
        matched = [r for r in travel if axis_value(r) == value]
        if not matched:
            continue
        kg = stable_sum(r.co2e_kg for r in matched)
        rows.append(BreakdownRow(value=value, co2e_kg=kg, share=kg / total if total > 0 else 0.0))
    return tuple(rows)


def propagate_uncertainty(records: Sequence[EmissionRecord]) -> tuple[float, float]:
    """Total emissions with quadrature-combined uncertainty (independence)."""
    return (
        stable_sum(r.co2e_kg for r in records),
        _quadrature(r.uncertainty_kg for r in records),
    )


# ---------------------------------------------------------------------------
# Whole-inventory computation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FootprintResult:
    """Everything downstream consumers need, serializable to canonical JSON."""

    lab_name: str
    year: int
    records: tuple[EmissionRecord, ...]
    regulatory: RegulatoryTable
    synthetic: SyntheticFootprint
    breakdowns: Mapping[str, tuple[BreakdownRow, ...]]
    total_kg: float
    uncertainty_kg: float
    methodology: Mapping[str, object]

    def to_dict(self) -> dict:
        return {
            "schema_version": RESULT_SCHEMA_VERSION,
            "lab": {"name": self.lab_name, "year": self.year},
            "records": [r.to_dict() for r in self.records],
            "regulatory": self.regulatory.to_dict(),
            "synthetic": self.synthetic.to_dict(),
            "breakdowns": {
                axis: [{"value": row.value, "co2e_kg": row.co2e_kg, "share": row.share} for row in rows]
                for axis, rows in self.breakdowns.items()
            },
            "total_kg": self.total_kg,
            "uncertainty_kg": self.uncertainty_kg,
            "methodology": dict(self.methodology),
        }


def result_to_json(result: FootprintResult) -> bytes:
    """Canonical bytes: sorted keys, tight separators, repr floats.

    Identical results serialize to identical bytes, which the CLI, the
    service cache and the determinism tests all rely on.
    """
    return json.dumps(result.to_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode(
        "utf-8"
    )


def result_from_dict(data: Mapping) -> FootprintResult:
    """Rebuild a result from its JSON form (reporting needs the tables)."""
    breakdowns = {
        axis: tuple(
            BreakdownRow(value=row["value"], co2e_kg=float(row["co2e_kg"]), share=float(row["share"]))
            for row in rows
        )
        for axis, rows in data.get("breakdowns", {}).items()
    }
    records = []
    for raw in data.get("records", []):
        dims = None
        if any(k in raw for k in ("purpose", "status", "mode", "haul")):
            dims = Dimensions(
                purpose=TravelPurpose(raw["purpose"]) if "purpose" in raw else None,
                status=MemberStatus(raw["status"]) if "status" in raw else None,
                mode=raw.get("mode"),
                haul=HaulClass(raw["haul"]) if "haul" in raw else None,
            )
        records.append(
            EmissionRecord(
                source=EmissionSource(raw["source"]),
                category=RegulatoryCategory(raw["category"]),
                co2e_kg=float(raw["co2e_kg"]),
                uncertainty_kg=float(raw["uncertainty_kg"]),
                label=raw.get("label", ""),
                dimensions=dims,
            )
        )
    return FootprintResult(
        lab_name=data["lab"]["name"],
        year=int(data["lab"]["year"]),
        records=tuple(records),
        regulatory=RegulatoryTable.from_dict(data["regulatory"]),
        synthetic=SyntheticFootprint.from_dict(data["synthetic"]),
        breakdowns=breakdowns,
        total_kg=float(data["total_kg"]),
        uncertainty_kg=float(data["uncertainty_kg"]),
        methodology=dict(data.get("methodology", {})),
    )


def _tagged(source: EmissionSource, exc: MissingFactor) -> MissingFactor:
    tagged = MissingFactor(exc.category, exc.selector, f"while computing {source.value}")
    tagged.source = source.value
    return tagged


def compute_inventory(
    inv: Inventory,
    factor_set: FactorSet,
    config: EngineConfig | None = None,
    electricity_use_phase_override: float | None = None,
) -> FootprintResult:
    """Run every conversion and aggregation for one inventory.

    Deterministic: records are ordered by source family then input order.
    Missing commute responses degrade to a warning with a zero commute
    leaf (labs without a survey still get a footprint); missing factors
    abort with the offending selector, tagged with the source family.

    `electricity_use_phase_override` substitutes the grid factor's
    use-phase value (what-if support); the override is echoed in the
    methodology block.
    """
    config = config or DEFAULT_ENGINE_CONFIG
    findings = validate_inventory(inv)
    if findings:
        raise InvalidInventory(findings)

    if electricity_use_phase_override is not None:
        if electricity_use_phase_override < 0:
            raise EngineError("electricity factor override must be >= 0")
        factor_set = _override_electricity(factor_set, config, electricity_use_phase_override)

    warnings: list[str] = []
    if inv.factor_set_version and inv.factor_set_version != factor_set.version:
        warnings.append(
            f"inventory was authored against factor set {inv.factor_set_version!r}; "
            f"computing with {factor_set.version!r}"
        )

    by_source: dict[EmissionSource, list[EmissionRecord]] = {source: [] for source in EmissionSource}
    try:
        for building in inv.buildings:
            for record in compute_building_emissions(building, factor_set, config):
                by_source[record.source].append(record)
    except MissingFactor as exc:
        source = (
            EmissionSource.REFRIGERANTS
            if exc.category == FactorCategory.REFRIGERANT_GWP.value
            else EmissionSource.BUILDING_ENERGY
        )
        raise _tagged(source, exc) from exc
    try:
        for vehicle in inv.vehicles:
            for record in compute_vehicle_emissions(vehicle, factor_set, config):
                by_source[record.source].append(record)
    except MissingFactor as exc:
        raise _tagged(EmissionSource.LAB_VEHICLES, exc) from exc
    if inv.commute_responses:
        try:
            by_source[EmissionSource.COMMUTES].extend(
                compute_commute_emissions(inv.commute_responses, inv.lab, factor_set, config)
            )
        except MissingFactor as exc:
            raise _tagged(EmissionSource.COMMUTES, exc) from exc
    elif inv.lab.total_members > 0:
        warnings.append("no commute survey responses; commuting emissions reported as zero")
    if inv.trips:
        try:
            by_source[EmissionSource.PROFESSIONAL_TRAVEL].extend(
                compute_travel_emissions(inv.trips, factor_set, config)
            )
        except MissingFactor as exc:
            raise _tagged(EmissionSource.PROFESSIONAL_TRAVEL, exc) from exc

    records = tuple(
        record for source in EmissionSource for record in by_source[source]
    )
    total, uncertainty = propagate_uncertainty(records)
    methodology: dict[str, object] = {
        "factor_set_version": factor_set.version,
        "route_correction": config.route_correction.to_dict(),
        "grid_zone": config.grid_zone,
        "heat_zone": config.heat_zone,
        "commute_extrapolation": "respondent totals scaled by members/respondents",
        "warnings": warnings,
    }
    if electricity_use_phase_override is not None:
        methodology["electricity_use_phase_override"] = electricity_use_phase_override
    return FootprintResult(
        lab_name=inv.lab.name,
        year=inv.lab.year,
        records=records,
        regulatory=aggregate_regulatory(records),
        synthetic=aggregate_synthetic(records),
        breakdowns={axis: breakdown_travel(records, axis) for axis in ("purpose", "status", "mode", "haul")},
        total_kg=total,
        uncertainty_kg=uncertainty,
        methodology=methodology,
    )


def _override_electricity(factor_set: FactorSet, config: EngineConfig, use_phase: float) -> FactorSet:
    from dataclasses import replace as _replace

    target_key = {"zone": config.grid_zone}
    new_factors = []
    for factor in factor_set.factors:
        if factor.category is FactorCategory.ELECTRICITY and dict(factor.selector) == target_key:
            factor = _replace(factor, use_phase_value=use_phase)
        new_factors.append(factor)
    rebuilt = {
        (f.category.value, tuple(sorted(f.selector.items()))): f for f in new_factors
    }
    return FactorSet(
        version=factor_set.version,
        factors=tuple(new_factors),
        gwp=factor_set.gwp,
        _index=rebuilt,
    )
