// Shared types mirroring the service's documented JSON schemas
// (docs/inventory.md and docs/api.md in the repository root).

export type MemberStatus = "researcher" | "technician_admin" | "phd_postdoc" | "guest";

export type TravelMode =
  | "plane"
  | "train"
  | "car"
  | "taxi"
  | "bus"
  | "streetcar"
  | "rer"
  | "metro"
  | "ferry";

export type CommuteMode = TravelMode | "walk";

export type TravelPurpose =
  | "field_study"
  | "conference"
  | "seminar"
  | "teaching"
  | "collaboration"
  | "visit"
  | "research_admin"
  | "other"
  | "unknown";

export type VehicleKind =
  | "car"
  | "motorbike"
  | "bike"
  | "e-bike"
  | "scooter"
  | "e-scooter"
  | "bus"
  | "coach"
  | "train"
  | "streetcar"
  | "subway"
  | "aircraft"
  | "boat";

export type VehicleFuel = "gasoline" | "diesel" | "electric" | "hybrid" | "none";

export interface FuelUse {
  fuel: string;
  quantity: number;
  unit: "kWh" | "kg";
}

export interface RefrigerantLeak {
  gas: string;
  kg: number;
}

export interface Building {
  name: string;
  floor_area_m2: number;
  occupied_share: number;
  electricity_kwh: number;
  self_generated_kwh: number;
  heat_network_kwh_pci: number;
  fuel_combustion: FuelUse[];
  refrigerant_leaks: RefrigerantLeak[];
}

export interface LabVehicle {
  kind: VehicleKind;
  fuel: VehicleFuel;
  annual_distance_km: number | null;
  annual_fuel: FuelUse | null;
  hours_of_operation: number | null;
}

export interface CommuteLeg {
  mode: CommuteMode;
  one_way_km: number;
}

export interface CommuteResponse {
  status: MemberStatus;
  legs: CommuteLeg[];
  days_per_week: number;
  weeks_per_year: number;
}

export interface GeoPointJson {
  lat: number;
  lon: number;
}

export interface TravelLeg {
  mode: TravelMode;
  from: GeoPointJson;
  to: GeoPointJson;
  great_circle_km: number;
  corrected_km: number;
  round_trip: boolean;
  car_occupancy: number | null;
}

export interface Trip {
  trip_number: number;
  purpose: TravelPurpose;
  status: MemberStatus | null;
  legs: TravelLeg[];
}

export interface Inventory {
  schema_version: number;
  lab: {
    name: string;
    year: number;
    members: Record<MemberStatus, number>;
  };
  buildings: Building[];
  vehicles: LabVehicle[];
  commute_responses: CommuteResponse[];
  trips: Trip[];
  factor_set_version: string;
}

export interface Finding {
  path: string;
  message: string;
}

export interface RowIssue {
  line: number;
  message: string;
  severity: "error" | "warning";
}

export interface UploadOutcome {
  imported: number;
  errors: RowIssue[];
}

export interface ModeCorrection {
  multiplier: number;
  additive_km: number;
}

export interface RouteCorrection {
  modes: Record<string, ModeCorrection>;
  haul_thresholds: { short_max_km: number; medium_max_km: number };
}

export interface EmissionRecordJson {
  source: string;
  category: number;
  co2e_kg: number;
  uncertainty_kg: number;
  label?: string;
  purpose?: string;
  status?: string;
  mode?: string;
  haul?: string;
}

export interface FootprintResult {
  schema_version: number;
  lab: { name: string; year: number };
  records: EmissionRecordJson[];
  regulatory: {
    rows: { category: number; co2e_kg: number; uncertainty_kg: number }[];
    scope_subtotals: Record<string, number>;
    scope_uncertainties: Record<string, number>;
    total_kg: number;
    total_uncertainty_kg: number;
  };
  synthetic: {
    buildings: { heating: number; electricity: number; refrigerants: number };
    travel: { commutes: number; vehicles: number; professional_travel: number };
    shares: Record<string, number>;
    total_kg: number;
  };
  breakdowns: Record<string, { value: string; co2e_kg: number; share: number }[]>;
  total_kg: number;
  uncertainty_kg: number;
  methodology: {
    factor_set_version: string;
    route_correction: RouteCorrection;
    warnings: string[];
    [key: string]: unknown;
  };
}

export interface InventoryListing {
  labs: {
    lab: string;
    inventories: {
      id: string;
      year: number;
      created_at: string;
      updated_at: string;
      computed: boolean;
    }[];
  }[];
}
