// Mapping from the FootprintResult payload to display rows. Strictly a
// relabeling layer: every number shown is taken verbatim from the payload
// (shares included), never recomputed client-side.

import type { FootprintResult } from "./types";

export type Locale = "fr" | "en";

export const CATEGORY_LABELS: Record<Locale, Record<number, string>> = {
  en: {
    1: "Direct emissions from stationary combustion sources",
    2: "Direct emissions from mobile combustion sources",
    3: "Direct emissions from non-energy processes",
    4: "Direct fugitive emissions",
    5: "Emissions from biomass (soils, forests)",
    6: "Indirect emissions from purchased electricity",
    7: "Indirect emissions from steam, heating or cooling",
    8: "Emissions linked to energy not included in the direct and indirect energy categories",
    9: "Purchased goods and services",
    10: "Fixed assets",
    11: "Waste",
    12: "Transportation of goods upstream",
    13: "Employee business travel",
    14: "Leased assets upstream",
    15: "Investments",
    16: "Customer and visitor travel",
    17: "Transportation of goods downstream",
    18: "Use of sold products",
    19: "End of life of sold products",
    20: "Franchises downstream",
    21: "Leased assets downstream",
    22: "Employee commuting",
    23: "Other indirect emissions",
  },
  fr: {
    1: "Émissions directes des sources fixes de combustion",
    2: "Émissions directes des sources mobiles à moteur thermique",
    3: "Émissions directes des procédés hors énergie",
    4: "Émissions directes fugitives",
    5: "Émissions issues de la biomasse (sols et forêts)",
    6: "Émissions indirectes liées à la consommation d'électricité",
    7: "Émissions indirectes liées à la consommation de vapeur, chaleur ou froid",
    8: "Émissions liées à l'énergie non incluse dans les catégories précédentes",
    9: "Achats de produits ou services",
    10: "Immobilisation des biens",
    11: "Déchets",
    12: "Transport de marchandises amont",
    13: "Déplacements professionnels",
    14: "Actifs en leasing amont",
    15: "Investissements",
    16: "Transports de visiteurs et de clients",
    17: "Transport de marchandise aval",
    18: "Utilisation de produits vendus",
    19: "Fin de vie des produits vendus",
    20: "Franchise aval",
    21: "Leasing aval",
    22: "Déplacements domicile travail",
    23: "Autres émissions indirectes",
  },
};

export const LEAF_LABELS: Record<Locale, Record<string, string>> = {
  en: {
    buildings_heating: "Heating",
    buildings_electricity: "Electricity",
    buildings_refrigerants: "Refrigerant gases",
    travel_commutes: "Commutes",
    travel_vehicles: "Vehicles",
    travel_professional: "Professional travel",
  },
  fr: {
    buildings_heating: "Chauffage",
    buildings_electricity: "Électricité",
    buildings_refrigerants: "Gaz réfrigérants",
    travel_commutes: "Trajets domicile-travail",
    travel_vehicles: "Véhicules",
    travel_professional: "Déplacements professionnels",
  },
};

export interface RegulatoryDisplayRow {
  category: number;
  scope: 1 | 2 | 3;
  label: string;
  co2eKg: number;
  uncertaintyKg: number;
}

export function regulatoryRows(result: FootprintResult, locale: Locale): RegulatoryDisplayRow[] {
  return result.regulatory.rows.map((row) => ({
    category: row.category,
    scope: row.category <= 5 ? 1 : row.category <= 7 ? 2 : 3,
    label: CATEGORY_LABELS[locale][row.category] ?? String(row.category),
    co2eKg: row.co2e_kg,
    uncertaintyKg: row.uncertainty_kg,
  }));
}

export interface SyntheticDisplayRow {
  key: string;
  label: string;
  co2eKg: number;
  /** Share of total straight from the payload, or null when total is 0. */
  share: number | null;
  group: "buildings" | "travel";
}

const LEAF_VALUES: Record<string, (r: FootprintResult) => number> = {
  buildings_heating: (r) => r.synthetic.buildings.heating,
  buildings_electricity: (r) => r.synthetic.buildings.electricity,
  buildings_refrigerants: (r) => r.synthetic.buildings.refrigerants,
  travel_commutes: (r) => r.synthetic.travel.commutes,
  travel_vehicles: (r) => r.synthetic.travel.vehicles,
  travel_professional: (r) => r.synthetic.travel.professional_travel,
};

export function syntheticRows(result: FootprintResult, locale: Locale): SyntheticDisplayRow[] {
  const hasTotal = result.synthetic.total_kg > 0;
  return Object.keys(LEAF_VALUES).map((key) => ({
    key,
    label: LEAF_LABELS[locale][key],
    co2eKg: LEAF_VALUES[key](result),
    share: hasTotal ? result.synthetic.shares[key] : null,
    group: key.startsWith("buildings") ? "buildings" : "travel",
  }));
}

export interface PieSlice {
  key: string;
  label: string;
  co2eKg: number;
  share: number;
}

/** One slice per non-zero leaf; angles derive from payload shares only. */
export function pieSlices(result: FootprintResult, locale: Locale): PieSlice[] {
  return syntheticRows(result, locale)
    .filter((row) => row.co2eKg > 0 && row.share !== null)
    .map((row) => ({ key: row.key, label: row.label, co2eKg: row.co2eKg, share: row.share as number }));
}

export interface ComparisonRow {
  year: number;
  totalKg: number;
  uncertaintyKg: number;
}

/** Side-by-side totals for the year selector, payload values verbatim. */
export function yearComparison(results: FootprintResult[]): ComparisonRow[] {
  return [...results]
    .sort((a, b) => a.lab.year - b.lab.year)
    .map((result) => ({
      year: result.lab.year,
      totalKg: result.total_kg,
      uncertaintyKg: result.uncertainty_kg,
    }));
}

export function formatKg(value: number): string {
  return `${Math.round(value).toLocaleString("en-US").replace(/,/g, " ")} kg`;
}

export function formatShare(share: number | null): string {
  return share === null ? "–" : `${Math.round(share * 100)}%`;
}
