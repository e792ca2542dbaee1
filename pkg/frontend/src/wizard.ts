// Inventory form wizard: general info -> buildings -> vehicles -> uploads.
// The wizard owns a draft state and assembles the exact inventory document
// the service expects; building the JSON is pure so it can be tested
// against the bundled fixture byte for byte (as parsed JSON).

import type { Building, Finding, Inventory, LabVehicle, MemberStatus, VehicleFuel, VehicleKind } from "./types";
import { validateBuilding, validateLab, validateVehicle } from "./validation";

export const WIZARD_STEPS = ["general", "buildings", "vehicles", "uploads"] as const;
export type WizardStep = (typeof WIZARD_STEPS)[number];

export interface GeneralInfo {
  name: string;
  year: number;
  members: Record<MemberStatus, number>;
}

export interface WizardState {
  step: WizardStep;
  general: GeneralInfo;
  buildings: Building[];
  vehicles: LabVehicle[];
  factorSetVersion: string;
}

export function emptyBuilding(): Building {
  return {
    name: "",
    floor_area_m2: 0,
    occupied_share: 1,
    electricity_kwh: 0,
    self_generated_kwh: 0,
    heat_network_kwh_pci: 0,
    fuel_combustion: [],
    refrigerant_leaks: [],
  };
}

export function emptyVehicle(kind: VehicleKind = "car", fuel: VehicleFuel = "diesel"): LabVehicle {
  return { kind, fuel, annual_distance_km: null, annual_fuel: null, hours_of_operation: null };
}

export function initialWizardState(factorSetVersion = ""): WizardState {
  return {
    step: "general",
    general: {
      name: "",
      year: new Date().getFullYear() - 1,
      members: { researcher: 0, technician_admin: 0, phd_postdoc: 0, guest: 0 },
    },
    buildings: [],
    vehicles: [],
    factorSetVersion,
  };
}

/** Findings blocking the current step; empty means the step may advance. */
export function stepFindings(state: WizardState): Finding[] {
  switch (state.step) {
    case "general":
      return validateLab({ ...state.general });
    case "buildings":
      return state.buildings.flatMap((building, i) => validateBuilding(building, i));
    case "vehicles":
      return state.vehicles.flatMap((vehicle, i) => validateVehicle(vehicle, i));
    case "uploads":
      return [];
  }
}

export function nextStep(state: WizardState): WizardState {
  if (stepFindings(state).length > 0) {
    return state;
  }
  const index = WIZARD_STEPS.indexOf(state.step);
  if (index === WIZARD_STEPS.length - 1) {
    return state;
  }
  return { ...state, step: WIZARD_STEPS[index + 1] };
}

export function previousStep(state: WizardState): WizardState {
  const index = WIZARD_STEPS.indexOf(state.step);
  return index === 0 ? state : { ...state, step: WIZARD_STEPS[index - 1] };
}

/**
 * Assemble the inventory document from the wizard draft. Imported files
 * (travel, commutes) are uploaded separately after creation, so those
 * sections start empty — exactly like a fresh inventory file.
 */
export function buildInventory(state: WizardState): Inventory {
  return {
    schema_version: 1,
    lab: {
      name: state.general.name,
      year: state.general.year,
      members: { ...state.general.members },
    },
    buildings: state.buildings.map((building) => ({
      ...building,
      fuel_combustion: building.fuel_combustion.map((fu) => ({ ...fu })),
      refrigerant_leaks: building.refrigerant_leaks.map((leak) => ({ ...leak })),
    })),
    vehicles: state.vehicles.map((vehicle) => ({
      ...vehicle,
      annual_fuel: vehicle.annual_fuel ? { ...vehicle.annual_fuel } : null,
    })),
    commute_responses: [],
    trips: [],
    factor_set_version: state.factorSetVersion,
  };
}
