"""Domain types for one lab-year of activity data, validation and JSON I/O.

The inventory document (UTF-8 JSON, schema-versioned) is the interchange
format shared by the CLI, the HTTP service and the web UI. All types are
frozen; mutation helpers return new values.
"""

from __future__ import annotations

import datetime as _dt
import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .geodesy import GeoPoint

INVENTORY_SCHEMA_VERSION = 1


class MemberStatus(str, Enum):
    """Agent statuses, the vocabulary used by travel files and surveys."""

    RESEARCHER = "researcher"
    TECHNICIAN_ADMIN = "technician_admin"
    PHD_POSTDOC = "phd_postdoc"
    GUEST = "guest"


#: French survey/travel-file labels for each status.
MEMBER_STATUS_FR = {
    MemberStatus.RESEARCHER: "Chercheur.e-EC",
    MemberStatus.TECHNICIAN_ADMIN: "ITA",
    MemberStatus.PHD_POSTDOC: "Doc-Post doc",
    MemberStatus.GUEST: "Personne invitée",
}


class TravelMode(str, Enum):
    """Closed list of professional-travel modes."""

    PLANE = "plane"
    TRAIN = "train"
    CAR = "car"
    TAXI = "taxi"
    BUS = "bus"
    STREETCAR = "streetcar"
    RER = "rer"
    METRO = "metro"
    FERRY = "ferry"


TRAVEL_MODE_FR = {
    TravelMode.PLANE: "Avion",
    TravelMode.TRAIN: "Train",
    TravelMode.CAR: "Voiture",
    TravelMode.TAXI: "Taxi",
    TravelMode.BUS: "Bus",
    TravelMode.STREETCAR: "Tramway",
    TravelMode.RER: "RER",
    TravelMode.METRO: "Métro",
    TravelMode.FERRY: "Ferry",
}


class CommuteMode(str, Enum):
    """Commute modes: every travel mode plus walking."""

    PLANE = "plane"
    TRAIN = "train"
    CAR = "car"
    TAXI = "taxi"
    BUS = "bus"
    STREETCAR = "streetcar"
    RER = "rer"
    METRO = "metro"
    FERRY = "ferry"
    WALK = "walk"


class TravelPurpose(str, Enum):
    FIELD_STUDY = "field_study"
    CONFERENCE = "conference"
    SEMINAR = "seminar"
    TEACHING = "teaching"
    COLLABORATION = "collaboration"
    VISIT = "visit"
    RESEARCH_ADMIN = "research_admin"
    OTHER = "other"
    UNKNOWN = "unknown"


TRAVEL_PURPOSE_FR = {
    TravelPurpose.FIELD_STUDY: "Etude terrain",
    TravelPurpose.CONFERENCE: "Colloque-Congrès",
    TravelPurpose.SEMINAR: "Séminaire",
    TravelPurpose.TEACHING: "Enseignement",
    TravelPurpose.COLLABORATION: "Collaboration",
    TravelPurpose.VISIT: "Visite",
    TravelPurpose.RESEARCH_ADMIN: "Administration de la recherche",
    TravelPurpose.OTHER: "Autre",
}


class VehicleKind(str, Enum):
    CAR = "car"
    MOTORBIKE = "motorbike"
    BIKE = "bike"
    E_BIKE = "e-bike"
    SCOOTER = "scooter"
    E_SCOOTER = "e-scooter"
    BUS = "bus"
    COACH = "coach"
    TRAIN = "train"
    STREETCAR = "streetcar"
    SUBWAY = "subway"
    AIRCRAFT = "aircraft"
    BOAT = "boat"


class VehicleFuel(str, Enum):
    GASOLINE = "gasoline"
    DIESEL = "diesel"
    ELECTRIC = "electric"
    HYBRID = "hybrid"
    NONE = "none"


@dataclass(frozen=True)
class LabInfo:
    name: str
    year: int
    members: Mapping[MemberStatus, int]

    @property
    def total_members(self) -> int:
        return sum(self.members.values())


@dataclass(frozen=True)
class FuelUse:
    """A combusted fuel quantity; unit must match a factor unit (kg or kWh)."""

    fuel: str
    quantity: float
    unit: str


@dataclass(frozen=True)
class RefrigerantLeak:
    gas: str
    kg: float


@dataclass(frozen=True)
class Building:
    """One building, with consumptions for the whole building.

    `occupied_share` is the lab's share of the floor space; every
    consumption is prorated by it before conversion to emissions.
    """

    name: str
    floor_area_m2: float
    occupied_share: float
    electricity_kwh: float = 0.0
    self_generated_kwh: float = 0.0
    heat_network_kwh_pci: float = 0.0
    fuel_combustion: tuple[FuelUse, ...] = ()
    refrigerant_leaks: tuple[RefrigerantLeak, ...] = ()


@dataclass(frozen=True)
class LabVehicle:
    """A vehicle operated by the lab; exactly one usage basis must be set."""

    kind: VehicleKind
    fuel: VehicleFuel
    annual_distance_km: float | None = None
    annual_fuel: FuelUse | None = None
    hours_of_operation: float | None = None

    def bases_set(self) -> int:
        return sum(
            1
            for basis in (self.annual_distance_km, self.annual_fuel, self.hours_of_operation)
            if basis is not None
        )


@dataclass(frozen=True)
class CommuteLeg:
    mode: CommuteMode
    one_way_km: float


@dataclass(frozen=True)
class CommuteResponse:
    status: MemberStatus
    legs: tuple[CommuteLeg, ...]
    days_per_week: float
    weeks_per_year: float


@dataclass(frozen=True)
class TravelLeg:
    """One leg of a professional trip with resolved geography."""

    mode: TravelMode
    origin: GeoPoint
    destination: GeoPoint
    great_circle_km: float
    corrected_km: float
    round_trip: bool
    car_occupancy: int | None = None


@dataclass(frozen=True)
class Trip:
    trip_number: int
    legs: tuple[TravelLeg, ...]
    purpose: TravelPurpose = TravelPurpose.UNKNOWN
    status: MemberStatus | None = None


@dataclass(frozen=True)
class Inventory:
    """One lab-year of activity data, the engine's input universe."""

    lab: LabInfo
    buildings: tuple[Building, ...] = ()
    vehicles: tuple[LabVehicle, ...] = ()
    commute_responses: tuple[CommuteResponse, ...] = ()
    trips: tuple[Trip, ...] = ()
    factor_set_version: str = ""
    schema_version: int = INVENTORY_SCHEMA_VERSION


@dataclass(frozen=True)
class Finding:
    """A validation problem, pointing at the offending field."""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


def _check_enum(value: object, enum_cls: type[Enum], path: str, findings: list[Finding]) -> None:
    if not isinstance(value, enum_cls):
        findings.append(Finding(path, f"expected one of {[e.value for e in enum_cls]}, got {value!r}"))


def validate_inventory(inv: Inventory, now_year: int | None = None) -> list[Finding]:
    """Check every type invariant; an empty list means the inventory is valid.

    Pure and order-independent across the list fields: findings are
    reported in document order and carry the offending path.
    """
    findings: list[Finding] = []
    now_year = now_year if now_year is not None else _dt.date.today().year

    lab = inv.lab
    if not lab.name.strip():
        findings.append(Finding("lab.name", "lab name must not be empty"))
    if not (1990 <= lab.year <= now_year):
        findings.append(Finding("lab.year", f"year must be within [1990, {now_year}]"))
    for status, count in lab.members.items():
        _check_enum(status, MemberStatus, "lab.members", findings)
        if not isinstance(count, int) or count < 0:
            findings.append(Finding("lab.members", f"count for {getattr(status, 'value', status)} must be an integer >= 0"))
    if lab.total_members <= 0:
        findings.append(Finding("lab.members", "total member count must be > 0"))

    for i, b in enumerate(inv.buildings):
        path = f"buildings[{i}]"
        if b.floor_area_m2 <= 0:
            findings.append(Finding(f"{path}.floor_area_m2", "floor area must be > 0"))
        if not (0.0 < b.occupied_share <= 1.0):
            findings.append(Finding(f"{path}.occupied_share", "occupied share must be in (0, 1]"))
        if b.electricity_kwh < 0:
            findings.append(Finding(f"{path}.electricity_kwh", "must be >= 0"))
        if b.self_generated_kwh < 0:
            findings.append(Finding(f"{path}.self_generated_kwh", "must be >= 0"))
        if b.heat_network_kwh_pci < 0:
            findings.append(Finding(f"{path}.heat_network_kwh_pci", "must be >= 0"))
        for j, fu in enumerate(b.fuel_combustion):
            if not fu.fuel.strip():
                findings.append(Finding(f"{path}.fuel_combustion[{j}].fuel", "fuel name must not be empty"))
            if fu.quantity < 0:
                findings.append(Finding(f"{path}.fuel_combustion[{j}].quantity", "must be >= 0"))
            if fu.unit not in ("kWh", "kg"):
                findings.append(Finding(f"{path}.fuel_combustion[{j}].unit", "unit must be kWh or kg"))
        for j, leak in enumerate(b.refrigerant_leaks):
            if not leak.gas.strip():
                findings.append(Finding(f"{path}.refrigerant_leaks[{j}].gas", "gas name must not be empty"))
            if leak.kg < 0:
                findings.append(Finding(f"{path}.refrigerant_leaks[{j}].kg", "must be >= 0"))

    for i, v in enumerate(inv.vehicles):
        path = f"vehicles[{i}]"
        _check_enum(v.kind, VehicleKind, f"{path}.kind", findings)
        _check_enum(v.fuel, VehicleFuel, f"{path}.fuel", findings)
        if v.bases_set() != 1:
            findings.append(
                Finding(path, "exactly one usage basis (annual_distance_km, annual_fuel, hours_of_operation) must be set")
            )
        if v.annual_distance_km is not None and v.annual_distance_km < 0:
            findings.append(Finding(f"{path}.annual_distance_km", "must be >= 0"))
        if v.annual_fuel is not None and v.annual_fuel.quantity < 0:
            findings.append(Finding(f"{path}.annual_fuel.quantity", "must be >= 0"))
        if v.hours_of_operation is not None and v.hours_of_operation < 0:
            findings.append(Finding(f"{path}.hours_of_operation", "must be >= 0"))

    for i, r in enumerate(inv.commute_responses):
        path = f"commute_responses[{i}]"
        _check_enum(r.status, MemberStatus, f"{path}.status", findings)
        if not r.legs:
            findings.append(Finding(f"{path}.legs", "at least one leg is required"))
        for j, leg in enumerate(r.legs):
            _check_enum(leg.mode, CommuteMode, f"{path}.legs[{j}].mode", findings)
            if leg.one_way_km <= 0:
                findings.append(Finding(f"{path}.legs[{j}].one_way_km", "must be > 0"))
        if not (0 <= r.days_per_week <= 7):
            findings.append(Finding(f"{path}.days_per_week", "must be in [0, 7]"))
        if not (0 <= r.weeks_per_year <= 52):
            findings.append(Finding(f"{path}.weeks_per_year", "must be in [0, 52]"))

    for i, t in enumerate(inv.trips):
        path = f"trips[{i}]"
        if not t.legs:
            findings.append(Finding(f"{path}.legs", "a trip needs at least one leg"))
        _check_enum(t.purpose, TravelPurpose, f"{path}.purpose", findings)
        if t.status is not None:
            _check_enum(t.status, MemberStatus, f"{path}.status", findings)
        for j, leg in enumerate(t.legs):
            lpath = f"{path}.legs[{j}]"
            _check_enum(leg.mode, TravelMode, f"{lpath}.mode", findings)
            if not leg.origin.is_valid() or not leg.destination.is_valid():
                findings.append(Finding(lpath, "leg endpoints must be valid lat/lon coordinates"))
            if leg.great_circle_km < 0:
                findings.append(Finding(f"{lpath}.great_circle_km", "must be >= 0"))
            if leg.corrected_km < 0:
                findings.append(Finding(f"{lpath}.corrected_km", "must be >= 0"))
            if leg.mode in (TravelMode.CAR, TravelMode.TAXI):
                if leg.car_occupancy is None or leg.car_occupancy < 1:
                    findings.append(Finding(lpath, "car and taxi legs need car_occupancy >= 1"))
            elif leg.car_occupancy is not None:
                findings.append(Finding(lpath, "car_occupancy only applies to car and taxi legs"))

    if inv.schema_version != INVENTORY_SCHEMA_VERSION:
        findings.append(
            Finding("schema_version", f"unsupported schema version {inv.schema_version}; expected {INVENTORY_SCHEMA_VERSION}")
        )
    return findings


# ---------------------------------------------------------------------------
# JSON serialization (documented in docs/inventory.md)
# ---------------------------------------------------------------------------


class InventoryFormatError(ValueError):
    """The inventory document cannot be decoded into the domain types."""


def inventory_to_dict(inv: Inventory) -> dict:
    return {
        "schema_version": inv.schema_version,
        "lab": {
            "name": inv.lab.name,
            "year": inv.lab.year,
            "members": {status.value: count for status, count in inv.lab.members.items()},
        },
        "buildings": [
            {
                "name": b.name,
                "floor_area_m2": b.floor_area_m2,
                "occupied_share": b.occupied_share,
                "electricity_kwh": b.electricity_kwh,
                "self_generated_kwh": b.self_generated_kwh,
                "heat_network_kwh_pci": b.heat_network_kwh_pci,
                "fuel_combustion": [
                    {"fuel": fu.fuel, "quantity": fu.quantity, "unit": fu.unit} for fu in b.fuel_combustion
                ],
                "refrigerant_leaks": [{"gas": leak.gas, "kg": leak.kg} for leak in b.refrigerant_leaks],
            }
            for b in inv.buildings
        ],
        "vehicles": [
            {
                "kind": v.kind.value,
                "fuel": v.fuel.value,
                "annual_distance_km": v.annual_distance_km,
                "annual_fuel": (
                    {"fuel": v.annual_fuel.fuel, "quantity": v.annual_fuel.quantity, "unit": v.annual_fuel.unit}
                    if v.annual_fuel
                    else None
                ),
                "hours_of_operation": v.hours_of_operation,
            }
            for v in inv.vehicles
        ],
        "commute_responses": [
            {
                "status": r.status.value,
                "legs": [{"mode": leg.mode.value, "one_way_km": leg.one_way_km} for leg in r.legs],
                "days_per_week": r.days_per_week,
                "weeks_per_year": r.weeks_per_year,
            }
            for r in inv.commute_responses
        ],
        "trips": [
            {
                "trip_number": t.trip_number,
                "purpose": t.purpose.value,
                "status": t.status.value if t.status else None,
                "legs": [
                    {
                        "mode": leg.mode.value,
                        "from": {"lat": leg.origin.lat_deg, "lon": leg.origin.lon_deg},
                        "to": {"lat": leg.destination.lat_deg, "lon": leg.destination.lon_deg},
                        "great_circle_km": leg.great_circle_km,
                        "corrected_km": leg.corrected_km,
                        "round_trip": leg.round_trip,
                        "car_occupancy": leg.car_occupancy,
                    }
                    for leg in t.legs
                ],
            }
            for t in inv.trips
        ],
        "factor_set_version": inv.factor_set_version,
    }


def _enum_from(value: object, enum_cls: type[Enum], path: str) -> Enum:
    try:
        return enum_cls(value)
    except ValueError:
        raise InventoryFormatError(
            f"{path}: {value!r} is not one of {[e.value for e in enum_cls]}"
        ) from None


def _num(value: object, path: str, optional: bool = False) -> float | None:
    if value is None and optional:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InventoryFormatError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _fuel_use(data: Mapping, path: str) -> FuelUse:
    return FuelUse(
        fuel=str(data.get("fuel", "")),
        quantity=_num(data.get("quantity"), f"{path}.quantity") or 0.0,
        unit=str(data.get("unit", "")),
    )


def inventory_from_dict(data: Mapping) -> Inventory:
    """Decode an inventory document; raises InventoryFormatError on bad shape.

    Shape errors (wrong types, unknown enum values) raise; value-range
    problems are left to `validate_inventory` so they surface as findings.
    """
    if not isinstance(data, Mapping):
        raise InventoryFormatError("inventory document must be a JSON object")
    lab_raw = data.get("lab")
    if not isinstance(lab_raw, Mapping):
        raise InventoryFormatError("lab: missing or not an object")
    members_raw = lab_raw.get("members", {})
    if not isinstance(members_raw, Mapping):
        raise InventoryFormatError("lab.members: must be an object")
    members: dict[MemberStatus, int] = {}
    for key, count in members_raw.items():
        status = _enum_from(key, MemberStatus, "lab.members")
        if isinstance(count, bool) or not isinstance(count, int):
            raise InventoryFormatError(f"lab.members[{key}]: expected an integer")
        members[status] = count
    year = lab_raw.get("year")
    if isinstance(year, bool) or not isinstance(year, int):
        raise InventoryFormatError("lab.year: expected an integer")
    lab = LabInfo(name=str(lab_raw.get("name", "")), year=year, members=members)

    buildings = []
    for i, braw in enumerate(data.get("buildings", [])):
        path = f"buildings[{i}]"
        buildings.append(
            Building(
                name=str(braw.get("name", "")),
                floor_area_m2=_num(braw.get("floor_area_m2"), f"{path}.floor_area_m2") or 0.0,
                occupied_share=_num(braw.get("occupied_share"), f"{path}.occupied_share") or 0.0,
                electricity_kwh=_num(braw.get("electricity_kwh", 0.0), f"{path}.electricity_kwh") or 0.0,
                self_generated_kwh=_num(braw.get("self_generated_kwh", 0.0), f"{path}.self_generated_kwh") or 0.0,
                heat_network_kwh_pci=_num(braw.get("heat_network_kwh_pci", 0.0), f"{path}.heat_network_kwh_pci") or 0.0,
                fuel_combustion=tuple(
                    _fuel_use(fu, f"{path}.fuel_combustion[{j}]")
                    for j, fu in enumerate(braw.get("fuel_combustion", []))
                ),
                refrigerant_leaks=tuple(
                    RefrigerantLeak(gas=str(lk.get("gas", "")), kg=_num(lk.get("kg"), f"{path}.refrigerant_leaks[{j}].kg") or 0.0)
                    for j, lk in enumerate(braw.get("refrigerant_leaks", []))
                ),
            )
        )

    vehicles = []
    for i, vraw in enumerate(data.get("vehicles", [])):
        path = f"vehicles[{i}]"
        fuel_raw = vraw.get("annual_fuel")
        vehicles.append(
            LabVehicle(
                kind=_enum_from(vraw.get("kind"), VehicleKind, f"{path}.kind"),
                fuel=_enum_from(vraw.get("fuel"), VehicleFuel, f"{path}.fuel"),
                annual_distance_km=_num(vraw.get("annual_distance_km"), f"{path}.annual_distance_km", optional=True),
                annual_fuel=_fuel_use(fuel_raw, f"{path}.annual_fuel") if fuel_raw is not None else None,
                hours_of_operation=_num(vraw.get("hours_of_operation"), f"{path}.hours_of_operation", optional=True),
            )
        )

    responses = []
    for i, rraw in enumerate(data.get("commute_responses", [])):
        path = f"commute_responses[{i}]"
        responses.append(
            CommuteResponse(
                status=_enum_from(rraw.get("status"), MemberStatus, f"{path}.status"),
                legs=tuple(
                    CommuteLeg(
                        mode=_enum_from(lraw.get("mode"), CommuteMode, f"{path}.legs[{j}].mode"),
                        one_way_km=_num(lraw.get("one_way_km"), f"{path}.legs[{j}].one_way_km") or 0.0,
                    )
                    for j, lraw in enumerate(rraw.get("legs", []))
                ),
                days_per_week=_num(rraw.get("days_per_week"), f"{path}.days_per_week") or 0.0,
                weeks_per_year=_num(rraw.get("weeks_per_year"), f"{path}.weeks_per_year") or 0.0,
            )
        )

    trips = []
    for i, traw in enumerate(data.get("trips", [])):
        path = f"trips[{i}]"
        trip_number = traw.get("trip_number")
        if isinstance(trip_number, bool) or not isinstance(trip_number, int):
            raise InventoryFormatError(f"{path}.trip_number: expected an integer")
        legs = []
        for j, lraw in enumerate(traw.get("legs", [])):
            lpath = f"{path}.legs[{j}]"
            origin = lraw.get("from", {})
            dest = lraw.get("to", {})
            occupancy = lraw.get("car_occupancy")
            if occupancy is not None and (isinstance(occupancy, bool) or not isinstance(occupancy, int)):
                raise InventoryFormatError(f"{lpath}.car_occupancy: expected an integer")
            legs.append(
                TravelLeg(
                    mode=_enum_from(lraw.get("mode"), TravelMode, f"{lpath}.mode"),
                    origin=GeoPoint(
                        _num(origin.get("lat"), f"{lpath}.from.lat") or 0.0,
                        _num(origin.get("lon"), f"{lpath}.from.lon") or 0.0,
                    ),
                    destination=GeoPoint(
                        _num(dest.get("lat"), f"{lpath}.to.lat") or 0.0,
                        _num(dest.get("lon"), f"{lpath}.to.lon") or 0.0,
                    ),
                    great_circle_km=_num(lraw.get("great_circle_km"), f"{lpath}.great_circle_km") or 0.0,
                    corrected_km=_num(lraw.get("corrected_km"), f"{lpath}.corrected_km") or 0.0,
                    round_trip=bool(lraw.get("round_trip", False)),
                    car_occupancy=occupancy,
                )
            )
        purpose_raw = traw.get("purpose")
        status_raw = traw.get("status")
        trips.append(
            Trip(
                trip_number=trip_number,
                legs=tuple(legs),
                purpose=(
                    _enum_from(purpose_raw, TravelPurpose, f"{path}.purpose")
                    if purpose_raw is not None
                    else TravelPurpose.UNKNOWN
                ),
                status=_enum_from(status_raw, MemberStatus, f"{path}.status") if status_raw is not None else None,
            )
        )

    schema_version = data.get("schema_version", INVENTORY_SCHEMA_VERSION)
    if isinstance(schema_version, bool) or not isinstance(schema_version, int):
        raise InventoryFormatError("schema_version: expected an integer")
    return Inventory(
        lab=lab,
        buildings=tuple(buildings),
        vehicles=tuple(vehicles),
        commute_responses=tuple(responses),
        trips=tuple(trips),
        factor_set_version=str(data.get("factor_set_version", "")),
        schema_version=schema_version,
    )


def inventory_to_json(inv: Inventory) -> bytes:
    """Stable, human-editable rendering of the inventory document."""
    return (json.dumps(inventory_to_dict(inv), ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def inventory_from_json(document: bytes | str) -> Inventory:
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InventoryFormatError(f"inventory document is not valid UTF-8: {exc}") from None
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise InventoryFormatError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return inventory_from_dict(data)


def merge_trips(inv: Inventory, new_trips: Sequence[Trip]) -> Inventory:
    """Append imported trips, renumbering them after the existing ones."""
    offset = max((t.trip_number for t in inv.trips), default=0)
    renumbered = tuple(replace(t, trip_number=offset + i + 1) for i, t in enumerate(new_trips))
    return replace(inv, trips=inv.trips + renumbered)


def merge_commute_responses(inv: Inventory, responses: Iterable[CommuteResponse]) -> Inventory:
    return replace(inv, commute_responses=inv.commute_responses + tuple(responses))
