"""labges: greenhouse-gas inventory and carbon-footprint engine for research labs.

The package converts a lab-year of activity data (buildings, vehicles,
commutes, professional travel) into CO2-equivalent emission records,
attributes them to the 23 regulatory categories across GHG-Protocol
scopes 1-3, and renders regulatory and synthetic reports. The same engine
backs the `ges` command line and the HTTP service.
"""

__version__ = "0.1.0"

from .engine import (
    EngineConfig,
    EmissionRecord,
    EmissionSource,
    FootprintResult,
    InvalidInventory,
    NoResponses,
    RegulatoryCategory,
    RegulatoryTable,
    SyntheticFootprint,
    aggregate_regulatory,
    aggregate_synthetic,
    breakdown_travel,
    compute_building_emissions,
    compute_commute_emissions,
    compute_inventory,
    compute_travel_emissions,
    compute_vehicle_emissions,
    propagate_uncertainty,
    result_from_dict,
    result_to_json,
)
from .factors import (
    EmissionFactor,
    FactorCategory,
    FactorSet,
    MissingFactor,
    effective_vehicle_factor,
    gwp,
    load_bundled_factor_set,
    load_factor_set,
    lookup,
)
from .gazetteer import Gazetteer, load_bundled_gazetteer, load_gazetteer, resolve_place
from .geodesy import (
    GeoPoint,
    HaulClass,
    RouteCorrection,
    classify_haul,
    corrected_distance,
    great_circle_km,
)
from .ingestion import parse_commute_csv, parse_travel_tsv, normalize_trips
from .inventory import (
    Building,
    CommuteResponse,
    Inventory,
    LabInfo,
    LabVehicle,
    MemberStatus,
    TravelMode,
    TravelPurpose,
    Trip,
    inventory_from_json,
    inventory_to_json,
    validate_inventory,
)
from .reporting import (
    ReportBundle,
    build_report_bundle,
    render_bar_svg,
    render_pie_svg,
    render_regulatory_csv,
    render_synthetic,
)

__all__ = [name for name in dir() if not name.startswith("_")]
