"""End-to-end footprint of the bundled demo lab.

Loads the Cogitamus 2019 fixture, imports its travel and commute files,
computes the footprint and writes the report bundle to ./demo-out/.
Run: python demos/01_demo_footprint.py
"""

from importlib import resources
from pathlib import Path

from labges import compute_inventory, load_bundled_factor_set, load_bundled_gazetteer
from labges.engine import result_to_json
from labges.ingestion import normalize_trips, parse_commute_csv, parse_travel_tsv
from labges.inventory import inventory_from_json, merge_commute_responses, merge_trips
from labges.reporting import build_report_bundle, render_synthetic, report_filename

demo = resources.files("labges.data").joinpath("demo")

# 1. One lab-year of activity data: general info, buildings, vehicles.
inventory = inventory_from_json(demo.joinpath("cogitamus_2019.json").read_bytes())
print(f"{inventory.lab.name} {inventory.lab.year}: {inventory.lab.total_members} members")

# 2. Import the professional-travel TSV (one line per leg) and the
#    commute survey CSV. Both importers keep going past bad rows.
gazetteer = load_bundled_gazetteer()
rows, row_errors = parse_travel_tsv(demo.joinpath("cogitamus_travel_2019.tsv").read_bytes())
trips, issues = normalize_trips(rows, gazetteer)
print(f"travel: {len(rows)} legs across {len(trips)} trips ({len(row_errors) + len(issues)} issues)")

responses, commute_errors = parse_commute_csv(demo.joinpath("cogitamus_commutes_2019.csv").read_bytes())
print(f"commutes: {len(responses)} survey responses ({len(commute_errors)} issues)")

inventory = merge_commute_responses(merge_trips(inventory, trips), responses)

# 3. Convert activity data to emission records and aggregate.
factors = load_bundled_factor_set()
result = compute_inventory(inventory, factors)
print(f"\ntotal: {result.total_kg:,.0f} ± {result.uncertainty_kg:,.0f} kg CO2e "
      f"(factors {result.methodology['factor_set_version']})\n")
print(render_synthetic(result.synthetic, "en").text_table)

# 4. Breakdowns of professional travel (the biggest lever).
for axis in ("purpose", "status"):
    top = max(result.breakdowns[axis], key=lambda r: r.co2e_kg)
    print(f"largest travel share by {axis}: {top.value} ({100 * top.share:.0f}%)")

# 5. Write the downloadable bundle.
out = Path("demo-out")
out.mkdir(exist_ok=True)
bundle = build_report_bundle(result, "en")
lab, year = result.lab_name, result.year
(out / report_filename(lab, year, "result", "json")).write_bytes(result_to_json(result))
(out / report_filename(lab, year, "regulatory", "csv")).write_bytes(bundle.regulatory_csv)
for name, svg in bundle.charts.items():
    (out / report_filename(lab, year, name, "svg")).write_bytes(svg)
print(f"\nreports written to {out}/")
