"""Shared fixtures: bundled data, a toy factor set, random inventory generator."""

from __future__ import annotations

import json
import random
from importlib import resources
from pathlib import Path

import pytest

from labges import geodesy
from labges.factors import FactorSet, load_bundled_factor_set, load_factor_set
from labges.gazetteer import Gazetteer, load_bundled_gazetteer
from labges.inventory import (
    Building,
    CommuteLeg,
    CommuteMode,
    CommuteResponse,
    FuelUse,
    Inventory,
    LabInfo,
    LabVehicle,
    MemberStatus,
    RefrigerantLeak,
    TravelLeg,
    TravelMode,
    TravelPurpose,
    Trip,
    VehicleFuel,
    VehicleKind,
)

DEMO_DIR = resources.files("labges.data").joinpath("demo")


@pytest.fixture(scope="session")
def bundled_factors() -> FactorSet:
    return load_bundled_factor_set()


@pytest.fixture(scope="session")
def bundled_gazetteer() -> Gazetteer:
    return load_bundled_gazetteer()


@pytest.fixture()
def demo_inventory_path(tmp_path: Path) -> Path:
    target = tmp_path / "cogitamus_2019.json"
    target.write_bytes(DEMO_DIR.joinpath("cogitamus_2019.json").read_bytes())
    return target


@pytest.fixture(scope="session")
def demo_travel_bytes() -> bytes:
    return DEMO_DIR.joinpath("cogitamus_travel_2019.tsv").read_bytes()


@pytest.fixture(scope="session")
def demo_commutes_bytes() -> bytes:
    return DEMO_DIR.joinpath("cogitamus_commutes_2019.csv").read_bytes()


# A small factor set with round numbers, used where tests assert exact
# hand arithmetic rather than bundled values.
TOY_FACTOR_DOC = {
    "version": "toy-1",
    "gwp": {"CO2": 1.0, "CH4": 25.0, "N2O": 298.0, "SF6": 22800.0, "R32": 675.0},
    "factors": [
        {"id": "elec", "category": "electricity", "selector": {"zone": "france"}, "unit": "kWh",
         "use_phase_value": 0.06, "manufacturing_value": 0.0, "relative_uncertainty": 0.1, "source_note": ""},
        {"id": "heat", "category": "heat_network", "selector": {"zone": "france"}, "unit": "kWh",
         "use_phase_value": 0.1, "manufacturing_value": 0.0, "relative_uncertainty": 0.3, "source_note": ""},
        {"id": "gas", "category": "stationary_combustion", "selector": {"fuel": "natural_gas"}, "unit": "kWh",
         "use_phase_value": 0.2, "manufacturing_value": 0.0, "relative_uncertainty": 0.05, "source_note": ""},
        {"id": "r32", "category": "refrigerant_gwp", "selector": {"gas": "R32"}, "unit": "kg",
         "use_phase_value": 675.0, "manufacturing_value": 0.0, "relative_uncertainty": 0.3, "source_note": ""},
        {"id": "car-diesel", "category": "vehicle", "selector": {"kind": "car", "fuel": "diesel"}, "unit": "km",
         "use_phase_value": 0.2, "manufacturing_value": 0.05, "relative_uncertainty": 0.2, "source_note": ""},
        {"id": "car-gasoline", "category": "vehicle", "selector": {"kind": "car", "fuel": "gasoline"}, "unit": "km",
         "use_phase_value": 0.22, "manufacturing_value": 0.05, "relative_uncertainty": 0.2, "source_note": ""},
        {"id": "bike", "category": "vehicle", "selector": {"kind": "bike", "fuel": "none"}, "unit": "km",
         "use_phase_value": 0.005, "manufacturing_value": 0.0, "relative_uncertainty": 0.5, "source_note": ""},
        {"id": "tm-car", "category": "transport_mode", "selector": {"mode": "car"}, "unit": "vehicle_km",
         "use_phase_value": 0.2, "manufacturing_value": 0.0, "relative_uncertainty": 0.3, "source_note": ""},
        {"id": "tm-taxi", "category": "transport_mode", "selector": {"mode": "taxi"}, "unit": "vehicle_km",
         "use_phase_value": 0.2, "manufacturing_value": 0.0, "relative_uncertainty": 0.3, "source_note": ""},
        {"id": "tm-train", "category": "transport_mode", "selector": {"mode": "train", "zone": "france"}, "unit": "passenger_km",
         "use_phase_value": 0.01, "manufacturing_value": 0.0, "relative_uncertainty": 0.2, "source_note": ""},
        {"id": "tm-rer", "category": "transport_mode", "selector": {"mode": "rer"}, "unit": "passenger_km",
         "use_phase_value": 0.01, "manufacturing_value": 0.0, "relative_uncertainty": 0.4, "source_note": ""},
        {"id": "tm-metro", "category": "transport_mode", "selector": {"mode": "metro"}, "unit": "passenger_km",
         "use_phase_value": 0.005, "manufacturing_value": 0.0, "relative_uncertainty": 0.4, "source_note": ""},
        {"id": "tm-streetcar", "category": "transport_mode", "selector": {"mode": "streetcar"}, "unit": "passenger_km",
         "use_phase_value": 0.004, "manufacturing_value": 0.0, "relative_uncertainty": 0.4, "source_note": ""},
        {"id": "tm-bus", "category": "transport_mode", "selector": {"mode": "bus"}, "unit": "passenger_km",
         "use_phase_value": 0.1, "manufacturing_value": 0.0, "relative_uncertainty": 0.4, "source_note": ""},
        {"id": "tm-ferry", "category": "transport_mode", "selector": {"mode": "ferry"}, "unit": "passenger_km",
         "use_phase_value": 0.26, "manufacturing_value": 0.0, "relative_uncertainty": 0.5, "source_note": ""},
        {"id": "tm-plane-short", "category": "transport_mode", "selector": {"mode": "plane", "haul": "short"}, "unit": "passenger_km",
         "use_phase_value": 0.26, "manufacturing_value": 0.0, "relative_uncertainty": 0.7, "source_note": ""},
        {"id": "tm-plane-medium", "category": "transport_mode", "selector": {"mode": "plane", "haul": "medium"}, "unit": "passenger_km",
         "use_phase_value": 0.19, "manufacturing_value": 0.0, "relative_uncertainty": 0.7, "source_note": ""},
        {"id": "tm-plane-long", "category": "transport_mode", "selector": {"mode": "plane", "haul": "long"}, "unit": "passenger_km",
         "use_phase_value": 0.15, "manufacturing_value": 0.0, "relative_uncertainty": 0.7, "source_note": ""},
    ],
}


@pytest.fixture(scope="session")
def toy_factors() -> FactorSet:
    return load_factor_set(json.dumps(TOY_FACTOR_DOC).encode("utf-8"))


# ---------------------------------------------------------------------------
# Random inventory generation (plain random.Random for speed and stable seeds)
# ---------------------------------------------------------------------------

_COMMUTE_MODES = [
    CommuteMode.CAR,
    CommuteMode.BUS,
    CommuteMode.METRO,
    CommuteMode.RER,
    CommuteMode.TRAIN,
    CommuteMode.STREETCAR,
    CommuteMode.WALK,
    CommuteMode.FERRY,
]

_GROUND_MODES = [
    TravelMode.TRAIN,
    TravelMode.CAR,
    TravelMode.TAXI,
    TravelMode.BUS,
    TravelMode.RER,
    TravelMode.METRO,
    TravelMode.STREETCAR,
    TravelMode.FERRY,
]

_VEHICLE_CHOICES = [
    (VehicleKind.CAR, VehicleFuel.DIESEL),
    (VehicleKind.CAR, VehicleFuel.GASOLINE),
    (VehicleKind.CAR, VehicleFuel.ELECTRIC),
    (VehicleKind.CAR, VehicleFuel.HYBRID),
    (VehicleKind.BIKE, VehicleFuel.NONE),
    (VehicleKind.E_BIKE, VehicleFuel.ELECTRIC),
    (VehicleKind.BUS, VehicleFuel.DIESEL),
    (VehicleKind.COACH, VehicleFuel.DIESEL),
]


def _random_point(rng: random.Random) -> geodesy.GeoPoint:
    return geodesy.GeoPoint(rng.uniform(-85.0, 85.0), rng.uniform(-179.9, 180.0))


def _random_trip(rng: random.Random, number: int, band_safe: bool) -> Trip:
    legs = []
    for _ in range(rng.randint(1, 3)):
        if rng.random() < 0.4:
            mode = TravelMode.PLANE
            # Band-safe distances keep the haul class stable under x0.5..x2
            # activity scaling (linearity tests must not cross a threshold).
            if band_safe:
                gc = rng.uniform(150.0, 400.0) if rng.random() < 0.5 else rng.uniform(7000.0, 9000.0)
            else:
                gc = rng.uniform(50.0, 12000.0)
        else:
            mode = rng.choice(_GROUND_MODES)
            gc = rng.uniform(1.0, 900.0)
        occupancy = rng.randint(1, 4) if mode in (TravelMode.CAR, TravelMode.TAXI) else None
        legs.append(
            TravelLeg(
                mode=mode,
                origin=_random_point(rng),
                destination=_random_point(rng),
                great_circle_km=gc,
                corrected_km=geodesy.corrected_distance(mode, gc),
                round_trip=rng.random() < 0.5,
                car_occupancy=occupancy,
            )
        )
    purpose = rng.choice(list(TravelPurpose))
    status = rng.choice(list(MemberStatus) + [None])
    return Trip(trip_number=number, legs=tuple(legs), purpose=purpose, status=status)


def make_random_inventory(rng: random.Random, band_safe_planes: bool = False) -> Inventory:
    """A small, always-valid inventory exercising every source family."""
    members = {
        MemberStatus.RESEARCHER: rng.randint(1, 40),
        MemberStatus.TECHNICIAN_ADMIN: rng.randint(0, 20),
        MemberStatus.PHD_POSTDOC: rng.randint(0, 30),
        MemberStatus.GUEST: rng.randint(0, 5),
    }
    buildings = []
    for b in range(rng.randint(0, 2)):
        fuels = []
        if rng.random() < 0.4:
            fuels.append(FuelUse("natural_gas", rng.uniform(0, 60000), "kWh"))
        leaks = []
        if rng.random() < 0.4:
            leaks.append(RefrigerantLeak("R32", rng.uniform(0, 2.0)))
        buildings.append(
            Building(
                name=f"B{b}",
                floor_area_m2=rng.uniform(100, 5000),
                occupied_share=rng.uniform(0.1, 1.0),
                electricity_kwh=rng.uniform(0, 200000),
                self_generated_kwh=rng.uniform(0, 5000),
                heat_network_kwh_pci=rng.uniform(0, 150000),
                fuel_combustion=tuple(fuels),
                refrigerant_leaks=tuple(leaks),
            )
        )
    vehicles = []
    for _ in range(rng.randint(0, 2)):
        kind, fuel = rng.choice(_VEHICLE_CHOICES)
        vehicles.append(LabVehicle(kind=kind, fuel=fuel, annual_distance_km=rng.uniform(0, 30000)))
    responses = []
    for _ in range(rng.randint(0, 5)):
        legs = tuple(
            CommuteLeg(mode=rng.choice(_COMMUTE_MODES), one_way_km=rng.uniform(0.5, 60.0))
            for _ in range(rng.randint(1, 3))
        )
        responses.append(
            CommuteResponse(
                status=rng.choice(list(MemberStatus)),
                legs=legs,
                days_per_week=rng.uniform(0, 7),
                weeks_per_year=rng.uniform(0, 52),
            )
        )
    trips = tuple(_random_trip(rng, i + 1, band_safe_planes) for i in range(rng.randint(0, 4)))
    return Inventory(
        lab=LabInfo(name=f"Lab-{rng.randint(0, 999)}", year=rng.randint(1990, 2024), members=members),
        buildings=tuple(buildings),
        vehicles=tuple(vehicles),
        commute_responses=tuple(responses),
        trips=trips,
        factor_set_version="sample-1",
    )


def scale_inventory(inv: Inventory, k: float) -> Inventory:
    """Scale every activity quantity (kWh, kg, km, hours) by k."""
    from dataclasses import replace

    buildings = tuple(
        replace(
            b,
            electricity_kwh=b.electricity_kwh * k,
            self_generated_kwh=b.self_generated_kwh * k,
            heat_network_kwh_pci=b.heat_network_kwh_pci * k,
            fuel_combustion=tuple(replace(f, quantity=f.quantity * k) for f in b.fuel_combustion),
            refrigerant_leaks=tuple(replace(l, kg=l.kg * k) for l in b.refrigerant_leaks),
        )
        for b in inv.buildings
    )
    vehicles = tuple(
        replace(
            v,
            annual_distance_km=None if v.annual_distance_km is None else v.annual_distance_km * k,
            annual_fuel=None if v.annual_fuel is None else replace(v.annual_fuel, quantity=v.annual_fuel.quantity * k),
            hours_of_operation=None if v.hours_of_operation is None else v.hours_of_operation * k,
        )
        for v in inv.vehicles
    )
    responses = tuple(
        replace(r, legs=tuple(replace(leg, one_way_km=leg.one_way_km * k) for leg in r.legs))
        for r in inv.commute_responses
    )
    trips = tuple(
        replace(
            t,
            legs=tuple(
                replace(leg, great_circle_km=leg.great_circle_km * k, corrected_km=leg.corrected_km * k)
                for leg in t.legs
            ),
        )
        for t in inv.trips
    )
    return replace(inv, buildings=buildings, vehicles=vehicles, commute_responses=responses, trips=trips)
