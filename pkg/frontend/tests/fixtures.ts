// Bundled demo fixtures, read straight from the package data they ship in.

import { readFileSync } from "node:fs";
import { resolve } from "node:path";
import type { Inventory } from "../src/types";
import type { GeneralInfo, WizardState } from "../src/wizard";

const DEMO_DIR = resolve(__dirname, "../../src/labges/data/demo");

export function fixtureInventory(): Inventory {
  return JSON.parse(readFileSync(resolve(DEMO_DIR, "cogitamus_2019.json"), "utf-8"));
}

export function fixtureTravelTsv(): string {
  return readFileSync(resolve(DEMO_DIR, "cogitamus_travel_2019.tsv"), "utf-8");
}

export function fixtureCommutesCsv(): string {
  return readFileSync(resolve(DEMO_DIR, "cogitamus_commutes_2019.csv"), "utf-8");
}

/** The wizard state an operator reaches by typing the demo lab into the forms. */
export function fixtureWizardState(): WizardState {
  const general: GeneralInfo = {
    name: "Cogitamus",
    year: 2019,
    members: { researcher: 38, technician_admin: 17, phd_postdoc: 25, guest: 0 },
  };
  return {
    step: "uploads",
    general,
    buildings: [
      {
        name: "Main building",
        floor_area_m2: 3300.0,
        occupied_share: 0.6,
        electricity_kwh: 120000.0,
        self_generated_kwh: 0.0,
        heat_network_kwh_pci: 200000.0,
        fuel_combustion: [],
        refrigerant_leaks: [{ gas: "R32", kg: 0.3 }],
      },
    ],
    vehicles: [
      {
        kind: "car",
        fuel: "diesel",
        annual_distance_km: 12000.0,
        annual_fuel: null,
        hours_of_operation: null,
      },
    ],
    factorSetVersion: "sample-1",
  };
}
