// What-if levers. A scenario only ever transforms ACTIVITY DATA (a copy
// of the inventory document); the engine recomputes server-side, so the
// UI and the engine cannot disagree about emissions. The one lever that
// is not an activity transform — overriding the grid factor — is passed
// through to the compute endpoint instead.

import type { CommuteMode, Inventory, RouteCorrection, TravelMode, TravelPurpose, Trip } from "./types";

export interface ScenarioAdjustment {
  shift_plane_to_train: { max_km: number; fraction: number } | null;
  reduce_travel_by_purpose: { purpose: TravelPurpose; fraction: number } | null;
  commute_mode_shift: { from: CommuteMode; to: CommuteMode; fraction: number } | null;
  electricity_factor_override: number | null;
}

export function zeroAdjustment(): ScenarioAdjustment {
  return {
    shift_plane_to_train: null,
    reduce_travel_by_purpose: null,
    commute_mode_shift: null,
    electricity_factor_override: null,
  };
}

function assertFraction(fraction: number, lever: string): void {
  if (!(fraction >= 0 && fraction <= 1)) {
    throw new Error(`${lever}: fraction must be within [0, 1], got ${fraction}`);
  }
}

function correctedDistance(mode: TravelMode, greatCircleKm: number, correction: RouteCorrection): number {
  const mc = correction.modes[mode] ?? { multiplier: 1, additive_km: 0 };
  return greatCircleKm * mc.multiplier + mc.additive_km;
}

/**
 * Relabel `fraction` of the plane-kilometres of every flight leg shorter
 * than `max_km` (one-way corrected) as rail travel. The shifted share
 * becomes a new train leg whose distance is re-corrected with the rail
 * parameters; the flight additive (taxiing/detour) stays with the
 * remaining flight share and disappears when the whole leg shifts.
 */
export function applyPlaneToTrain(
  trips: Trip[],
  maxKm: number,
  fraction: number,
  correction: RouteCorrection,
): Trip[] {
  assertFraction(fraction, "shift_plane_to_train");
  if (fraction === 0) {
    return trips;
  }
  return trips.map((trip) => {
    const legs = trip.legs.flatMap((leg) => {
      if (leg.mode !== "plane" || leg.corrected_km >= maxKm) {
        return [leg];
      }
      const shiftedGc = leg.great_circle_km * fraction;
      const trainLeg = {
        ...leg,
        mode: "train" as TravelMode,
        great_circle_km: shiftedGc,
        corrected_km: correctedDistance("train", shiftedGc, correction),
      };
      if (fraction === 1) {
        return [trainLeg];
      }
      const remainingGc = leg.great_circle_km * (1 - fraction);
      const planeLeg = {
        ...leg,
        great_circle_km: remainingGc,
        corrected_km: correctedDistance("plane", remainingGc, correction),
      };
      return [planeLeg, trainLeg];
    });
    return { ...trip, legs };
  });
}

/** Scale down the distances of every trip with the given purpose. */
export function applyReduceByPurpose(trips: Trip[], purpose: TravelPurpose, fraction: number): Trip[] {
  assertFraction(fraction, "reduce_travel_by_purpose");
  if (fraction === 0) {
    return trips;
  }
  const keep = 1 - fraction;
  return trips.map((trip) => {
    if (trip.purpose !== purpose) {
      return trip;
    }
    return {
      ...trip,
      legs: trip.legs.map((leg) => ({
        ...leg,
        great_circle_km: leg.great_circle_km * keep,
        corrected_km: leg.corrected_km * keep,
      })),
    };
  });
}

/** Move `fraction` of the kilometres of matching commute legs to another mode. */
export function applyCommuteModeShift(
  responses: Inventory["commute_responses"],
  from: CommuteMode,
  to: CommuteMode,
  fraction: number,
): Inventory["commute_responses"] {
  assertFraction(fraction, "commute_mode_shift");
  if (fraction === 0) {
    return responses;
  }
  return responses.map((response) => {
    const legs = response.legs.flatMap((leg) => {
      if (leg.mode !== from) {
        return [leg];
      }
      const shifted = { mode: to, one_way_km: leg.one_way_km * fraction };
      if (fraction === 1) {
        return [shifted];
      }
      return [{ ...leg, one_way_km: leg.one_way_km * (1 - fraction) }, shifted];
    });
    return { ...response, legs };
  });
}

export interface ScenarioPlan {
  inventory: Inventory;
  computeOverride: number | undefined;
}

/**
 * Apply every active lever to a copy of the inventory. With all levers
 * zero/off the returned document is structurally identical to the input
 * (the baseline), which the scenario panel relies on.
 */
export function applyScenario(
  inventory: Inventory,
  adjustment: ScenarioAdjustment,
  correction: RouteCorrection,
): ScenarioPlan {
  let trips = inventory.trips;
  let responses = inventory.commute_responses;
  if (adjustment.shift_plane_to_train) {
    const { max_km, fraction } = adjustment.shift_plane_to_train;
    trips = applyPlaneToTrain(trips, max_km, fraction, correction);
  }
  if (adjustment.reduce_travel_by_purpose) {
    const { purpose, fraction } = adjustment.reduce_travel_by_purpose;
    trips = applyReduceByPurpose(trips, purpose, fraction);
  }
  if (adjustment.commute_mode_shift) {
    const { from, to, fraction } = adjustment.commute_mode_shift;
    responses = applyCommuteModeShift(responses, from, to, fraction);
  }
  return {
    inventory: { ...inventory, trips: [...trips], commute_responses: [...responses] },
    computeOverride: adjustment.electricity_factor_override ?? undefined,
  };
}
