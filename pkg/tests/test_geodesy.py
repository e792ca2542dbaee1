"""Great-circle distance, route corrections and haul classification."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, strategies as st

from labges.geodesy import (
    EARTH_RADIUS_KM,
    GeoPoint,
    HaulClass,
    ModeCorrection,
    RouteCorrection,
    classify_haul,
    corrected_distance,
    great_circle_km,
)

PARIS = GeoPoint(48.8566, 2.3522)
TOULOUSE = GeoPoint(43.6045, 1.4440)


def oracle_haversine(a: GeoPoint, b: GeoPoint) -> float:
    """Independent formulation (atan2 instead of asin) used as the oracle."""
    phi1, phi2 = math.radians(a.lat_deg), math.radians(b.lat_deg)
    dphi = phi2 - phi1
    dlmb = math.radians(b.lon_deg - a.lon_deg)
    h = math.sin(dphi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.atan2(math.sqrt(h), math.sqrt(1 - h))


class TestGreatCircle:
    def test_paris_toulouse(self):
        # computed with the oracle above; the conventional value is ~588.6
        assert great_circle_km(PARIS, TOULOUSE) == pytest.approx(588.6, rel=0.005)
        assert great_circle_km(PARIS, TOULOUSE) == pytest.approx(oracle_haversine(PARIS, TOULOUSE), rel=1e-12)

    def test_identical_points_zero(self):
        assert great_circle_km(PARIS, PARIS) == 0.0

    def test_equatorial_antipodes(self):
        assert great_circle_km(GeoPoint(0, 0), GeoPoint(0, 180)) == pytest.approx(
            math.pi * EARTH_RADIUS_KM, rel=1e-12
        )

    def test_symmetry_random(self):
        rng = random.Random(7)
        for _ in range(200):
            a = GeoPoint(rng.uniform(-90, 90), rng.uniform(-179.9, 180))
            b = GeoPoint(rng.uniform(-90, 90), rng.uniform(-179.9, 180))
            assert great_circle_km(a, b) == great_circle_km(b, a)

    def test_triangle_inequality_random(self):
        rng = random.Random(11)
        for _ in range(300):
            pts = [GeoPoint(rng.uniform(-90, 90), rng.uniform(-179.9, 180)) for _ in range(3)]
            ab = great_circle_km(pts[0], pts[1])
            bc = great_circle_km(pts[1], pts[2])
            ac = great_circle_km(pts[0], pts[2])
            assert ac <= ab + bc + 1e-6 * max(1.0, ac)

    def test_never_negative_and_bounded(self):
        rng = random.Random(3)
        half_circumference = math.pi * EARTH_RADIUS_KM
        for _ in range(200):
            a = GeoPoint(rng.uniform(-90, 90), rng.uniform(-179.9, 180))
            b = GeoPoint(rng.uniform(-90, 90), rng.uniform(-179.9, 180))
            d = great_circle_km(a, b)
            assert 0.0 <= d <= half_circumference + 1e-9


class TestCorrectedDistance:
    def test_plane_additive(self):
        assert corrected_distance("plane", 500.0) == pytest.approx(595.0)

    def test_train_multiplier(self):
        assert corrected_distance("train", 100.0) == pytest.approx(120.0)

    def test_ferry_zero(self):
        assert corrected_distance("ferry", 0.0) == 0.0

    def test_unknown_mode_identity(self):
        assert corrected_distance("walk", 42.0) == 42.0

    def test_negative_distance_rejected(self):
        with pytest.raises(ValueError):
            corrected_distance("train", -1.0)

    @given(st.floats(min_value=0, max_value=50000), st.floats(min_value=0, max_value=50000))
    def test_monotone_in_distance(self, d1, d2):
        lo, hi = sorted((d1, d2))
        for mode in ("plane", "train", "car", "ferry", "bus", "metro"):
            assert corrected_distance(mode, lo) <= corrected_distance(mode, hi)

    def test_enum_mode_accepted(self):
        from labges.inventory import TravelMode

        assert corrected_distance(TravelMode.PLANE, 500.0) == pytest.approx(595.0)


class TestHaulClass:
    def test_defaults(self):
        assert classify_haul(999.0) is HaulClass.SHORT
        assert classify_haul(1000.0) is HaulClass.SHORT  # boundary to lower class
        assert classify_haul(1000.5) is HaulClass.MEDIUM
        assert classify_haul(3500.0) is HaulClass.MEDIUM
        assert classify_haul(6000.0) is HaulClass.LONG

    @given(st.floats(min_value=0, max_value=100000, allow_nan=False))
    def test_total_partition(self, km):
        # exactly one class for every distance, no gaps or overlaps
        assert classify_haul(km) in (HaulClass.SHORT, HaulClass.MEDIUM, HaulClass.LONG)

    def test_custom_thresholds(self):
        cfg = RouteCorrection(short_max_km=500, medium_max_km=2000)
        assert classify_haul(600, cfg) is HaulClass.MEDIUM
        assert classify_haul(2500, cfg) is HaulClass.LONG

    def test_bad_thresholds_rejected(self):
        with pytest.raises(ValueError):
            RouteCorrection(short_max_km=3500, medium_max_km=1000)


class TestRouteCorrectionConfig:
    def test_round_trip_through_dict(self):
        cfg = RouteCorrection(
            modes={"plane": ModeCorrection(1.1, 50.0), "train": ModeCorrection(1.25, 0.0)},
            short_max_km=800,
            medium_max_km=4000,
        )
        rebuilt = RouteCorrection.from_dict(cfg.to_dict())
        assert rebuilt.short_max_km == 800
        assert rebuilt.for_mode("plane") == ModeCorrection(1.1, 50.0)
        assert rebuilt.for_mode("train") == ModeCorrection(1.25, 0.0)

    def test_partial_override_keeps_defaults(self):
        cfg = RouteCorrection.from_dict({"modes": {"car": {"multiplier": 1.5}}})
        assert cfg.for_mode("car") == ModeCorrection(1.5, 0.0)
        assert cfg.for_mode("plane") == ModeCorrection(1.0, 95.0)
