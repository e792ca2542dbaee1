// Client-side validation mirroring the server's findings, so the wizard
// can flag problems inline before anything is submitted. Paths match the
// server's (e.g. "buildings[0].occupied_share"): a 400 response from the
// service maps onto the same form fields.

import type { Building, CommuteResponse, Finding, Inventory, LabVehicle } from "./types";

export const MEMBER_STATUSES = ["researcher", "technician_admin", "phd_postdoc", "guest"] as const;

export const STATUS_LABELS: Record<string, string> = {
  researcher: "Chercheur.e-EC",
  technician_admin: "ITA",
  phd_postdoc: "Doc-Post doc",
  guest: "Personne invitée",
};

export function validateLab(lab: Inventory["lab"], nowYear = new Date().getFullYear()): Finding[] {
  const findings: Finding[] = [];
  if (!lab.name.trim()) {
    findings.push({ path: "lab.name", message: "lab name must not be empty" });
  }
  if (!Number.isInteger(lab.year) || lab.year < 1990 || lab.year > nowYear) {
    findings.push({ path: "lab.year", message: `year must be within [1990, ${nowYear}]` });
  }
  let total = 0;
  for (const status of MEMBER_STATUSES) {
    const count = lab.members[status] ?? 0;
    if (!Number.isInteger(count) || count < 0) {
      findings.push({ path: "lab.members", message: `count for ${status} must be an integer >= 0` });
    } else {
      total += count;
    }
  }
  if (total <= 0) {
    findings.push({ path: "lab.members", message: "total member count must be > 0" });
  }
  return findings;
}

export function validateBuilding(building: Building, index: number): Finding[] {
  const findings: Finding[] = [];
  const path = `buildings[${index}]`;
  if (!(building.floor_area_m2 > 0)) {
    findings.push({ path: `${path}.floor_area_m2`, message: "floor area must be > 0" });
  }
  if (!(building.occupied_share > 0 && building.occupied_share <= 1)) {
    findings.push({ path: `${path}.occupied_share`, message: "occupied share must be in (0, 1]" });
  }
  for (const field of ["electricity_kwh", "self_generated_kwh", "heat_network_kwh_pci"] as const) {
    if (building[field] < 0 || Number.isNaN(building[field])) {
      findings.push({ path: `${path}.${field}`, message: "must be >= 0" });
    }
  }
  building.fuel_combustion.forEach((fuelUse, j) => {
    if (!fuelUse.fuel.trim()) {
      findings.push({ path: `${path}.fuel_combustion[${j}].fuel`, message: "fuel name must not be empty" });
    }
    if (fuelUse.quantity < 0) {
      findings.push({ path: `${path}.fuel_combustion[${j}].quantity`, message: "must be >= 0" });
    }
  });
  building.refrigerant_leaks.forEach((leak, j) => {
    if (!leak.gas.trim()) {
      findings.push({ path: `${path}.refrigerant_leaks[${j}].gas`, message: "gas name must not be empty" });
    }
    if (leak.kg < 0) {
      findings.push({ path: `${path}.refrigerant_leaks[${j}].kg`, message: "must be >= 0" });
    }
  });
  return findings;
}

export function validateVehicle(vehicle: LabVehicle, index: number): Finding[] {
  const findings: Finding[] = [];
  const path = `vehicles[${index}]`;
  const bases = [vehicle.annual_distance_km, vehicle.annual_fuel, vehicle.hours_of_operation].filter(
    (basis) => basis !== null,
  );
  if (bases.length !== 1) {
    findings.push({
      path,
      message: "exactly one usage basis (annual_distance_km, annual_fuel, hours_of_operation) must be set",
    });
  }
  if (vehicle.annual_distance_km !== null && vehicle.annual_distance_km < 0) {
    findings.push({ path: `${path}.annual_distance_km`, message: "must be >= 0" });
  }
  if (vehicle.annual_fuel !== null && vehicle.annual_fuel.quantity < 0) {
    findings.push({ path: `${path}.annual_fuel.quantity`, message: "must be >= 0" });
  }
  if (vehicle.hours_of_operation !== null && vehicle.hours_of_operation < 0) {
    findings.push({ path: `${path}.hours_of_operation`, message: "must be >= 0" });
  }
  return findings;
}

export function validateCommuteResponse(response: CommuteResponse, index: number): Finding[] {
  const findings: Finding[] = [];
  const path = `commute_responses[${index}]`;
  if (response.legs.length === 0) {
    findings.push({ path: `${path}.legs`, message: "at least one leg is required" });
  }
  response.legs.forEach((leg, j) => {
    if (!(leg.one_way_km > 0)) {
      findings.push({ path: `${path}.legs[${j}].one_way_km`, message: "must be > 0" });
    }
  });
  if (response.days_per_week < 0 || response.days_per_week > 7) {
    findings.push({ path: `${path}.days_per_week`, message: "must be in [0, 7]" });
  }
  if (response.weeks_per_year < 0 || response.weeks_per_year > 52) {
    findings.push({ path: `${path}.weeks_per_year`, message: "must be in [0, 52]" });
  }
  return findings;
}

export function validateInventory(inventory: Inventory, nowYear?: number): Finding[] {
  const findings = validateLab(inventory.lab, nowYear);
  inventory.buildings.forEach((building, i) => findings.push(...validateBuilding(building, i)));
  inventory.vehicles.forEach((vehicle, i) => findings.push(...validateVehicle(vehicle, i)));
  inventory.commute_responses.forEach((response, i) =>
    findings.push(...validateCommuteResponse(response, i)),
  );
  inventory.trips.forEach((trip, i) => {
    trip.legs.forEach((leg, j) => {
      const needsOccupancy = leg.mode === "car" || leg.mode === "taxi";
      if (needsOccupancy && (leg.car_occupancy === null || leg.car_occupancy < 1)) {
        findings.push({
          path: `trips[${i}].legs[${j}]`,
          message: "car and taxi legs need car_occupancy >= 1",
        });
      }
    });
  });
  return findings;
}
