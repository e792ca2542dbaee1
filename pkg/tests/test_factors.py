"""Factor registry: loading, invariants, lookup, GWPs, vehicle splits."""

from __future__ import annotations

import json

import pytest

from labges.factors import (
    FactorCategory,
    FactorConflictError,
    FactorParseError,
    FactorValidationError,
    MissingFactor,
    VEHICLE_KINDS,
    effective_vehicle_factor,
    gwp,
    load_bundled_factor_set,
    load_factor_set,
    lookup,
)


def _doc(**overrides) -> bytes:
    base = {
        "version": "t1",
        "gwp": {"CO2": 1.0},
        "factors": [
            {
                "id": "f1",
                "category": "vehicle",
                "selector": {"kind": "car", "fuel": "diesel"},
                "unit": "km",
                "use_phase_value": 0.2,
                "manufacturing_value": 0.05,
                "relative_uncertainty": 0.2,
                "source_note": "",
            }
        ],
    }
    base.update(overrides)
    return json.dumps(base).encode("utf-8")


class TestLoad:
    def test_bundled_set_loads(self, bundled_factors):
        assert bundled_factors.version == "sample-1"
        assert len(bundled_factors) == 40

    def test_duplicate_selector_conflict(self):
        entry = {
            "id": "dup",
            "category": "vehicle",
            "selector": {"fuel": "diesel", "kind": "car"},  # same key, different order
            "unit": "km",
            "use_phase_value": 0.1,
            "manufacturing_value": 0.0,
            "relative_uncertainty": 0.1,
        }
        doc = json.loads(_doc())
        doc["factors"].append(entry)
        with pytest.raises(FactorConflictError):
            load_factor_set(json.dumps(doc).encode())

    def test_empty_document_missing_co2(self):
        with pytest.raises(FactorValidationError):
            load_factor_set(b"{}")

    def test_bad_json_reports_line(self):
        with pytest.raises(FactorParseError, match="line"):
            load_factor_set(b'{"version": "x",\n  !bad\n}')

    def test_missing_field_reports_position(self):
        doc = json.loads(_doc())
        del doc["factors"][0]["unit"]
        with pytest.raises(FactorParseError, match="factors\\[0\\].*unit"):
            load_factor_set(json.dumps(doc).encode())

    def test_co2_gwp_must_be_one(self):
        with pytest.raises(FactorValidationError):
            load_factor_set(_doc(gwp={"CO2": 2.0}))

    def test_zero_total_value_rejected(self):
        doc = json.loads(_doc())
        doc["factors"][0]["use_phase_value"] = 0.0
        doc["factors"][0]["manufacturing_value"] = 0.0
        with pytest.raises(FactorValidationError):
            load_factor_set(json.dumps(doc).encode())

    def test_uncertainty_out_of_range_rejected(self):
        doc = json.loads(_doc())
        doc["factors"][0]["relative_uncertainty"] = 1.5
        with pytest.raises(FactorValidationError):
            load_factor_set(json.dumps(doc).encode())

    def test_not_utf8(self):
        with pytest.raises(FactorParseError, match="UTF-8"):
            load_factor_set(b"\xff\xfe{}")

    def test_load_is_deterministic(self):
        from labges.factors import bundled_factor_bytes

        doc = bundled_factor_bytes()
        a = load_factor_set(doc)
        b = load_factor_set(doc)
        assert a.version == b.version
        assert a.factors == b.factors
        assert lookup(a, "transport_mode", {"mode": "train", "zone": "france"}) == lookup(
            b, "transport_mode", {"mode": "train", "zone": "france"}
        )


class TestLookup:
    def test_bundled_train(self, bundled_factors):
        factor = lookup(bundled_factors, FactorCategory.TRANSPORT_MODE, {"mode": "train", "zone": "france"})
        assert factor.id == "tm-train-fr"
        assert factor.unit.value == "passenger_km"

    def test_selector_order_irrelevant(self, bundled_factors):
        a = lookup(bundled_factors, "vehicle", {"kind": "car", "fuel": "diesel"})
        b = lookup(bundled_factors, "vehicle", {"fuel": "diesel", "kind": "car"})
        assert a is b

    def test_missing_factor_names_selector(self, bundled_factors):
        with pytest.raises(MissingFactor, match="fuel=hydrogen"):
            lookup(bundled_factors, "vehicle", {"fuel": "hydrogen"})

    def test_no_fuzzy_fallback(self, bundled_factors):
        # a subset of a real selector must not match
        with pytest.raises(MissingFactor):
            lookup(bundled_factors, "vehicle", {"kind": "car"})

    def test_refrigerant_matches_gwp_table(self, bundled_factors):
        factor = lookup(bundled_factors, "refrigerant_gwp", {"gas": "R32"})
        assert factor.use_phase_value == gwp(bundled_factors, "R32") == 675.0


class TestGwp:
    def test_co2_is_one(self, bundled_factors):
        assert gwp(bundled_factors, "CO2") == 1.0

    def test_r32_bundled_value(self, bundled_factors):
        assert gwp(bundled_factors, "R32") == 675.0

    def test_unknown_gas(self, bundled_factors):
        with pytest.raises(MissingFactor):
            gwp(bundled_factors, "Xenon")

    def test_kyoto_families_present(self, bundled_factors):
        # CO2, CH4, N2O, an HFC (R32), a PFC (CF4), SF6
        for gas in ("CO2", "CH4", "N2O", "R32", "CF4", "SF6"):
            assert gwp(bundled_factors, gas) > 0


class TestEffectiveVehicleFactor:
    def test_gasoline_car_has_manufacturing(self, bundled_factors):
        use, manufacturing = effective_vehicle_factor(bundled_factors, "car", "gasoline")
        assert use > 0
        assert manufacturing > 0

    def test_plain_bike_no_manufacturing(self, bundled_factors):
        use, manufacturing = effective_vehicle_factor(bundled_factors, "bike", "none")
        assert manufacturing == 0.0
        assert 0 <= use < 0.05

    def test_ebike_present(self, bundled_factors):
        use, manufacturing = effective_vehicle_factor(bundled_factors, "e-bike", "electric")
        assert use + manufacturing > 0

    def test_mass_transit_kinds_have_manufacturing(self, bundled_factors):
        fuels = {"car": "diesel", "bus": "diesel", "coach": "diesel",
                 "train": "electric", "streetcar": "electric", "subway": "electric"}
        for kind, fuel in fuels.items():
            _, manufacturing = effective_vehicle_factor(bundled_factors, kind, fuel)
            assert manufacturing > 0, kind

    def test_unknown_kind_rejected(self, bundled_factors):
        with pytest.raises(ValueError):
            effective_vehicle_factor(bundled_factors, "hovercraft", "diesel")

    def test_missing_combination(self, bundled_factors):
        with pytest.raises(MissingFactor):
            effective_vehicle_factor(bundled_factors, "boat", "gasoline")

    def test_kind_list_is_closed(self):
        assert "car" in VEHICLE_KINDS and len(VEHICLE_KINDS) == 13
