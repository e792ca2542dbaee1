"""Emission factors: loading, versioning, lookup and vehicle corrections.

A factor converts one unit of activity (kWh, km, kg of leaked gas, ...)
into kg CO2e. Factors are split into a use-phase component and a
manufacturing component so that fixed-asset emissions can be attributed
separately from combustion; most display paths use their sum.

A FactorSet is immutable after load and safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Iterator, Mapping


class FactorError(Exception):
    """Base class for factor-file problems."""


class FactorParseError(FactorError):
    """The document is not well-formed (bad JSON, missing or mistyped field)."""


class FactorConflictError(FactorError):
    """Two factors share the same (category, selector) key."""


class FactorValidationError(FactorError):
    """A structural invariant is violated (e.g. no CO2 GWP entry)."""


class MissingFactor(FactorError):
    """No factor matches the requested category and selector, or unknown gas."""

    def __init__(self, category: str, selector: Mapping[str, str] | None = None, detail: str = ""):
        self.category = category
        self.selector = dict(selector or {})
        sel = ", ".join(f"{k}={v}" for k, v in sorted(self.selector.items()))
        msg = f"no emission factor for category={category}" + (f" [{sel}]" if sel else "")
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class FactorCategory(str, Enum):
    ELECTRICITY = "electricity"
    HEAT_NETWORK = "heat_network"
    STATIONARY_COMBUSTION = "stationary_combustion"
    REFRIGERANT_GWP = "refrigerant_gwp"
    VEHICLE = "vehicle"
    TRANSPORT_MODE = "transport_mode"


class FactorUnit(str, Enum):
    KWH = "kWh"
    KG = "kg"
    KM = "km"
    PASSENGER_KM = "passenger_km"
    VEHICLE_KM = "vehicle_km"
    HOUR = "hour"


#: Vehicle kinds accepted by `effective_vehicle_factor`.
VEHICLE_KINDS = frozenset(
    {
        "car",
        "motorbike",
        "bike",
        "e-bike",
        "scooter",
        "e-scooter",
        "bus",
        "coach",
        "train",
        "streetcar",
        "subway",
        "aircraft",
        "boat",
    }
)


@dataclass(frozen=True)
class EmissionFactor:
    """One conversion coefficient, in kg CO2e per `unit` of activity."""

    id: str
    category: FactorCategory
    selector: Mapping[str, str]
    unit: FactorUnit
    use_phase_value: float
    manufacturing_value: float
    relative_uncertainty: float
    source_note: str = ""

    @property
    def total_value(self) -> float:
        """Use-phase plus manufacturing, the value most conversions apply."""
        return self.use_phase_value + self.manufacturing_value


def _selector_key(selector: Mapping[str, str]) -> tuple[tuple[str, str], ...]:
    return tuple(sorted((str(k), str(v)) for k, v in selector.items()))


@dataclass(frozen=True)
class FactorSet:
    """A versioned, immutable collection of factors plus a GWP table."""

    version: str
    factors: tuple[EmissionFactor, ...]
    gwp: Mapping[str, float]
    _index: Mapping[tuple[str, tuple[tuple[str, str], ...]], EmissionFactor] = field(
        repr=False, compare=False, default_factory=dict
    )

    def __iter__(self) -> Iterator[EmissionFactor]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)


def _parse_factor(entry: object, position: int) -> EmissionFactor:
    if not isinstance(entry, dict):
        raise FactorParseError(f"factors[{position}]: expected an object")

    def need(name: str) -> object:
        if name not in entry:
            raise FactorParseError(f"factors[{position}]: missing field '{name}'")
        return entry[name]

    fid = str(need("id"))
    where = f"factors[{position}] (id={fid})"
    try:
        category = FactorCategory(str(need("category")))
    except ValueError:
        raise FactorParseError(
            f"{where}: unknown category {entry.get('category')!r}; "
            f"expected one of {[c.value for c in FactorCategory]}"
        ) from None
    try:
        unit = FactorUnit(str(need("unit")))
    except ValueError:
        raise FactorParseError(
            f"{where}: unknown unit {entry.get('unit')!r}; "
            f"expected one of {[u.value for u in FactorUnit]}"
        ) from None
    selector = need("selector")
    if not isinstance(selector, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in selector.items()
    ):
        raise FactorParseError(f"{where}: selector must be a string-to-string map")
    try:
        use_phase = float(need("use_phase_value"))
        manufacturing = float(need("manufacturing_value"))
        uncertainty = float(need("relative_uncertainty"))
    except (TypeError, ValueError):
        raise FactorParseError(f"{where}: numeric field is not a number") from None
    if use_phase < 0 or manufacturing < 0:
        raise FactorValidationError(f"{where}: factor values must be >= 0")
    if use_phase + manufacturing <= 0:
        raise FactorValidationError(f"{where}: use_phase + manufacturing must be > 0")
    if not (0.0 <= uncertainty <= 1.0):
        raise FactorValidationError(f"{where}: relative_uncertainty must be in [0, 1]")
    return EmissionFactor(
        id=fid,
        category=category,
        selector=dict(selector),
        unit=unit,
        use_phase_value=use_phase,
        manufacturing_value=manufacturing,
        relative_uncertainty=uncertainty,
        source_note=str(entry.get("source_note", "")),
    )


def load_factor_set(document: bytes) -> FactorSet:
    """Parse and validate a factor file (UTF-8 JSON).

    Raises FactorParseError on malformed input (with line/field context),
    FactorConflictError on duplicate (category, selector) keys and
    FactorValidationError when the GWP table lacks CO2 -> 1.
    """
    try:
        text = document.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FactorParseError(f"factor file is not valid UTF-8: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FactorParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise FactorParseError("top level must be an object")

    gwp_raw = data.get("gwp")
    if not isinstance(gwp_raw, dict):
        raise FactorValidationError("missing 'gwp' table (must map gas name to GWP, incl. CO2 -> 1)")
    gwp: dict[str, float] = {}
    for gas, value in gwp_raw.items():
        try:
            gwp[str(gas)] = float(value)
        except (TypeError, ValueError):
            raise FactorParseError(f"gwp[{gas!r}]: not a number") from None
    if gwp.get("CO2") != 1.0:
        raise FactorValidationError("gwp table must contain CO2 -> 1")

    version = str(data.get("version", "")).strip()
    if not version:
        raise FactorParseError("missing or empty 'version'")

    entries = data.get("factors", [])
    if not isinstance(entries, list):
        raise FactorParseError("'factors' must be an array")
    factors: list[EmissionFactor] = []
    index: dict[tuple[str, tuple[tuple[str, str], ...]], EmissionFactor] = {}
    for position, entry in enumerate(entries):
        factor = _parse_factor(entry, position)
        key = (factor.category.value, _selector_key(factor.selector))
        if key in index:
            raise FactorConflictError(
                f"duplicate factor for category={factor.category.value} "
                f"selector={dict(factor.selector)} (ids {index[key].id!r} and {factor.id!r})"
            )
        index[key] = factor
        factors.append(factor)

    return FactorSet(version=version, factors=tuple(factors), gwp=gwp, _index=index)


def lookup(factor_set: FactorSet, category: FactorCategory | str, selector: Mapping[str, str]) -> EmissionFactor:
    """Exact-match lookup on category and the full selector map.

    There is no fuzzy fallback: a miss raises MissingFactor so callers can
    surface the gap instead of silently computing with zero.
    """
    cat = category.value if isinstance(category, FactorCategory) else str(category)
    factor = factor_set._index.get((cat, _selector_key(selector)))
    if factor is None:
        raise MissingFactor(cat, selector)
    return factor


def gwp(factor_set: FactorSet, gas: str) -> float:
    """100-year global-warming potential of `gas` as published in the set."""
    try:
        return factor_set.gwp[gas]
    except KeyError:
        raise MissingFactor("gwp", {"gas": gas}, "unknown gas") from None


def effective_vehicle_factor(
    factor_set: FactorSet, kind: str, fuel: str
) -> tuple[float, float]:
    """Per-km (use_phase, manufacturing) pair for a lab vehicle.

    Manufacturing may legitimately be zero (a plain bike); for the vehicle
    families where embodied emissions are significant the bundled set keeps
    it strictly positive, including gasoline cars.
    """
    kind = getattr(kind, "value", kind)
    fuel = getattr(fuel, "value", fuel)
    if kind not in VEHICLE_KINDS:
        raise ValueError(f"unknown vehicle kind {kind!r}; expected one of {sorted(VEHICLE_KINDS)}")
    factor = lookup(factor_set, FactorCategory.VEHICLE, {"kind": kind, "fuel": fuel})
    return factor.use_phase_value, factor.manufacturing_value


def bundled_factor_bytes() -> bytes:
    """Raw bytes of the sample factor file shipped with the package."""
    return resources.files("labges.data").joinpath("factors_sample.json").read_bytes()


def load_bundled_factor_set() -> FactorSet:
    return load_factor_set(bundled_factor_bytes())
