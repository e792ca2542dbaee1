"""What-if scenario: take every short-haul flight by rail instead.

Mitigation planning works on activity data, never on emissions: the
scenario transforms a copy of the inventory (plane legs under a distance
threshold become train legs, with distances re-corrected for rail) and
the unchanged engine recomputes. Run: python demos/02_what_if_shift_to_train.py
"""

from dataclasses import replace
from importlib import resources

from labges import compute_inventory, load_bundled_factor_set, load_bundled_gazetteer
from labges.geodesy import corrected_distance
from labges.ingestion import normalize_trips, parse_commute_csv, parse_travel_tsv
from labges.inventory import TravelMode, inventory_from_json, merge_commute_responses, merge_trips

THRESHOLD_KM = 1500.0  # one-way corrected distance under which a train is viable

demo = resources.files("labges.data").joinpath("demo")
gazetteer = load_bundled_gazetteer()
factors = load_bundled_factor_set()

inventory = inventory_from_json(demo.joinpath("cogitamus_2019.json").read_bytes())
rows, _ = parse_travel_tsv(demo.joinpath("cogitamus_travel_2019.tsv").read_bytes())
trips, _ = normalize_trips(rows, gazetteer)
responses, _ = parse_commute_csv(demo.joinpath("cogitamus_commutes_2019.csv").read_bytes())
inventory = merge_commute_responses(merge_trips(inventory, trips), responses)

baseline = compute_inventory(inventory, factors)


def shift_short_flights_to_rail(inv):
    """Relabel qualifying plane legs as train and re-correct their distance."""
    shifted = 0
    new_trips = []
    for trip in inv.trips:
        legs = []
        for leg in trip.legs:
            if leg.mode is TravelMode.PLANE and leg.corrected_km < THRESHOLD_KM:
                legs.append(
                    replace(
                        leg,
                        mode=TravelMode.TRAIN,
                        corrected_km=corrected_distance(TravelMode.TRAIN, leg.great_circle_km),
                    )
                )
                shifted += 1
            else:
                legs.append(leg)
        new_trips.append(replace(trip, legs=tuple(legs)))
    return replace(inv, trips=tuple(new_trips)), shifted


scenario_inventory, shifted = shift_short_flights_to_rail(inventory)
scenario = compute_inventory(scenario_inventory, factors)

delta = baseline.total_kg - scenario.total_kg
travel_before = baseline.synthetic.leaves["travel_professional"]
travel_after = scenario.synthetic.leaves["travel_professional"]

print(f"plane legs shifted to rail (< {THRESHOLD_KM:.0f} km): {shifted}")
print(f"professional travel: {travel_before:,.0f} -> {travel_after:,.0f} kg CO2e")
print(f"lab total:           {baseline.total_kg:,.0f} -> {scenario.total_kg:,.0f} kg CO2e")
print(f"saved:               {delta:,.0f} kg CO2e ({100 * delta / baseline.total_kg:.1f}% of the footprint)")
