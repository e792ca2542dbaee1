// Single-page UI: inventory wizard, file uploads, results dashboard and
// the what-if scenario panel. All emission numbers come from the service;
// the page only transforms activity data and relabels payload values.

import { ApiClient, ApiError } from "./api";
import {
  formatKg,
  formatShare,
  regulatoryRows,
  syntheticRows,
  yearComparison,
  type Locale,
} from "./dashboard";
import { applyScenario, zeroAdjustment, type ScenarioAdjustment } from "./scenario";
import type { Finding, FootprintResult, Inventory } from "./types";
import { MEMBER_STATUSES, STATUS_LABELS, validateInventory } from "./validation";
import {
  buildInventory,
  emptyBuilding,
  emptyVehicle,
  initialWizardState,
  nextStep,
  previousStep,
  stepFindings,
  WIZARD_STEPS,
  type WizardState,
} from "./wizard";

declare global {
  interface Window {
    GES_API_BASE?: string;
  }
}

const api = new ApiClient(window.GES_API_BASE ?? "");

interface AppState {
  locale: Locale;
  wizard: WizardState;
  inventoryId: string | null;
  inventory: Inventory | null;
  result: FootprintResult | null;
  scenario: ScenarioAdjustment;
  scenarioResult: FootprintResult | null;
  uploadLog: string[];
  findings: Finding[];
  message: string;
}

const state: AppState = {
  locale: "en",
  wizard: initialWizardState(),
  inventoryId: null,
  inventory: null,
  result: null,
  scenario: zeroAdjustment(),
  scenarioResult: null,
  uploadLog: [],
  findings: [],
  message: "",
};

// scenario requests are cancel-superseded: only the latest render wins
let scenarioRequestSeq = 0;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

function numberInput(value: number, onChange: (v: number) => void, step = "any"): HTMLInputElement {
  const input = el("input", { type: "number", step, value: String(value) });
  input.addEventListener("change", () => onChange(Number(input.value)));
  return input;
}

function findingsFor(path: string): string {
  return state.findings
    .filter((f) => f.path === path || f.path.startsWith(`${path}.`) || f.path.startsWith(`${path}[`))
    .map((f) => f.message)
    .join("; ");
}

function fieldRow(label: string, input: HTMLElement, errorText = ""): HTMLElement {
  const row = el("label", { class: "field" }, el("span", {}, label), input);
  if (errorText) {
    row.append(el("span", { class: "error" }, errorText));
  }
  return row;
}

// ---------------------------------------------------------------------------
// Wizard steps
// ---------------------------------------------------------------------------

function renderGeneralStep(): HTMLElement {
  const g = state.wizard.general;
  const section = el("section", {}, el("h3", {}, "General information"));
  const name = el("input", { type: "text", value: g.name, placeholder: "Lab name" });
  name.addEventListener("change", () => {
    g.name = name.value;
    refresh();
  });
  section.append(fieldRow("Lab name", name, findingsFor("lab.name")));
  section.append(
    fieldRow(
      "Inventory year",
      numberInput(g.year, (v) => {
        g.year = v;
        refresh();
      }, "1"),
      findingsFor("lab.year"),
    ),
  );
  for (const status of MEMBER_STATUSES) {
    section.append(
      fieldRow(
        `Members – ${STATUS_LABELS[status]}`,
        numberInput(g.members[status], (v) => {
          g.members[status] = v;
          refresh();
        }, "1"),
      ),
    );
  }
  const membersError = findingsFor("lab.members");
  if (membersError) section.append(el("p", { class: "error" }, membersError));
  return section;
}

function renderBuildingsStep(): HTMLElement {
  const section = el("section", {}, el("h3", {}, "Buildings"));
  state.wizard.buildings.forEach((building, i) => {
    const box = el("fieldset", {}, el("legend", {}, building.name || `Building ${i + 1}`));
    const nameInput = el("input", { type: "text", value: building.name });
    nameInput.addEventListener("change", () => {
      building.name = nameInput.value;
      refresh();
    });
    box.append(fieldRow("Name", nameInput));
    const numeric: [string, keyof typeof building][] = [
      ["Floor area (m²)", "floor_area_m2"],
      ["Occupied share (0–1]", "occupied_share"],
      ["Electricity (kWh)", "electricity_kwh"],
      ["Self-generated (kWh)", "self_generated_kwh"],
      ["Heat network (kWh PCI)", "heat_network_kwh_pci"],
    ];
    for (const [label, field] of numeric) {
      box.append(
        fieldRow(
          label,
          numberInput(building[field] as number, (v) => {
            (building[field] as number) = v;
            refresh();
          }),
          findingsFor(`buildings[${i}].${field}`),
        ),
      );
    }
    building.refrigerant_leaks.forEach((leak, j) => {
      const gas = el("input", { type: "text", value: leak.gas, placeholder: "R32" });
      gas.addEventListener("change", () => {
        leak.gas = gas.value;
        refresh();
      });
      box.append(fieldRow(`Leak ${j + 1} – gas`, gas, findingsFor(`buildings[${i}].refrigerant_leaks[${j}]`)));
      box.append(
        fieldRow(`Leak ${j + 1} – kg`, numberInput(leak.kg, (v) => {
          leak.kg = v;
          refresh();
        })),
      );
    });
    const addLeak = el("button", { type: "button" }, "+ refrigerant leak");
    addLeak.addEventListener("click", () => {
      building.refrigerant_leaks.push({ gas: "", kg: 0 });
      refresh();
    });
    const remove = el("button", { type: "button" }, "remove building");
    remove.addEventListener("click", () => {
      state.wizard.buildings.splice(i, 1);
      refresh();
    });
    box.append(addLeak, remove);
    section.append(box);
  });
  const add = el("button", { type: "button" }, "+ building");
  add.addEventListener("click", () => {
    state.wizard.buildings.push(emptyBuilding());
    refresh();
  });
  section.append(add);
  return section;
}

function renderVehiclesStep(): HTMLElement {
  const section = el("section", {}, el("h3", {}, "Lab vehicles"));
  state.wizard.vehicles.forEach((vehicle, i) => {
    const box = el("fieldset", {}, el("legend", {}, `${vehicle.kind} (${vehicle.fuel})`));
    const kind = el("select", {});
    for (const value of ["car", "motorbike", "bike", "e-bike", "scooter", "e-scooter", "bus", "coach", "train", "streetcar", "subway", "aircraft", "boat"]) {
      const option = el("option", { value }, value);
      if (value === vehicle.kind) option.setAttribute("selected", "");
      kind.append(option);
    }
    kind.addEventListener("change", () => {
      vehicle.kind = kind.value as typeof vehicle.kind;
      refresh();
    });
    const fuel = el("select", {});
    for (const value of ["gasoline", "diesel", "electric", "hybrid", "none"]) {
      const option = el("option", { value }, value);
      if (value === vehicle.fuel) option.setAttribute("selected", "");
      fuel.append(option);
    }
    fuel.addEventListener("change", () => {
      vehicle.fuel = fuel.value as typeof vehicle.fuel;
      refresh();
    });
    box.append(fieldRow("Kind", kind), fieldRow("Fuel", fuel));
    box.append(
      fieldRow(
        "Annual distance (km)",
        numberInput(vehicle.annual_distance_km ?? 0, (v) => {
          vehicle.annual_distance_km = v;
          vehicle.annual_fuel = null;
          vehicle.hours_of_operation = null;
          refresh();
        }),
        findingsFor(`vehicles[${i}]`),
      ),
    );
    const remove = el("button", { type: "button" }, "remove vehicle");
    remove.addEventListener("click", () => {
      state.wizard.vehicles.splice(i, 1);
      refresh();
    });
    box.append(remove);
    section.append(box);
  });
  const add = el("button", { type: "button" }, "+ vehicle");
  add.addEventListener("click", () => {
    state.wizard.vehicles.push({ ...emptyVehicle(), annual_distance_km: 0 });
    refresh();
  });
  section.append(add);
  return section;
}

function renderUploadsStep(): HTMLElement {
  const section = el(
    "section",
    {},
    el("h3", {}, "Data files"),
    el("p", {}, "Upload the professional-travel TSV and the commute survey CSV."),
  );
  if (!state.inventoryId) {
    const submit = el("button", { type: "button" }, "Create inventory");
    submit.addEventListener("click", () => void submitInventory());
    section.append(submit);
    return section;
  }
  section.append(el("p", {}, `Inventory ${state.inventoryId} stored.`));
  for (const [label, endpoint] of [
    ["Travel TSV", "travel"],
    ["Commute CSV", "commutes"],
  ] as const) {
    const input = el("input", { type: "file" }) as HTMLInputElement;
    const button = el("button", { type: "button" }, `Upload ${label}`);
    button.addEventListener("click", () => void uploadFile(endpoint, input));
    section.append(fieldRow(label, el("span", {}, input, button)));
  }
  const computeButton = el("button", { type: "button", class: "primary" }, "Compute footprint");
  computeButton.addEventListener("click", () => void computeBaseline());
  section.append(computeButton);
  if (state.uploadLog.length > 0) {
    section.append(el("pre", { class: "log" }, state.uploadLog.join("\n")));
  }
  return section;
}

async function submitInventory(): Promise<void> {
  const inventory = buildInventory(state.wizard);
  const findings = validateInventory(inventory);
  if (findings.length > 0) {
    state.findings = findings;
    state.message = "fix validation findings before submitting";
    refresh();
    return;
  }
  try {
    state.inventoryId = await api.createInventory(inventory);
    state.inventory = inventory;
    state.message = "inventory created";
  } catch (error) {
    handleApiError(error);
  }
  refresh();
}

async function uploadFile(endpoint: "travel" | "commutes", input: HTMLInputElement): Promise<void> {
  if (!state.inventoryId || !input.files || input.files.length === 0) {
    return;
  }
  try {
    const file = input.files[0];
    const outcome =
      endpoint === "travel"
        ? await api.uploadTravel(state.inventoryId, file, file.name)
        : await api.uploadCommutes(state.inventoryId, file, file.name);
    state.uploadLog.push(`${endpoint}: imported ${outcome.imported} rows, ${outcome.errors.length} issues`);
    for (const issue of outcome.errors) {
      state.uploadLog.push(`  line ${issue.line}: ${issue.message}`);
    }
    state.inventory = await api.getInventory(state.inventoryId);
  } catch (error) {
    handleApiError(error);
  }
  refresh();
}

async function computeBaseline(): Promise<void> {
  if (!state.inventoryId) return;
  try {
    state.result = await api.compute(state.inventoryId);
    state.scenarioResult = null;
    state.inventory = await api.getInventory(state.inventoryId);
    state.message = "computed";
  } catch (error) {
    handleApiError(error);
  }
  refresh();
}

function handleApiError(error: unknown): void {
  if (error instanceof ApiError) {
    const findings = error.detail.findings as Finding[] | undefined;
    if (findings) {
      state.findings = findings;
    }
    state.message = error.message;
  } else {
    state.message = String(error);
  }
}

// ---------------------------------------------------------------------------
// Dashboard
// ---------------------------------------------------------------------------

function renderDashboard(): HTMLElement {
  const section = el("section", {}, el("h3", {}, "Results"));
  const result = state.scenarioResult ?? state.result;
  if (!result || !state.inventoryId) {
    section.append(el("p", {}, "Compute a footprint to see the dashboard."));
    return section;
  }
  if (state.scenarioResult) {
    section.append(el("p", { class: "notice" }, "Showing scenario result (baseline unchanged)."));
  }
  section.append(
    el(
      "p",
      { class: "headline" },
      `${result.lab.name} ${result.lab.year}: ${formatKg(result.total_kg)} ± ${formatKg(result.uncertainty_kg)} CO₂e`,
    ),
  );
  for (const warning of result.methodology.warnings) {
    section.append(el("p", { class: "warning" }, warning));
  }

  const synthetic = el("table", { class: "synthetic" });
  synthetic.append(el("tr", {}, el("th", {}, "Source"), el("th", {}, "kg CO₂e"), el("th", {}, "Share")));
  for (const row of syntheticRows(result, state.locale)) {
    synthetic.append(
      el("tr", { class: row.group }, el("td", {}, row.label), el("td", {}, formatKg(row.co2eKg)), el("td", {}, formatShare(row.share))),
    );
  }
  section.append(synthetic);

  // charts come from the service renderer, so files and dashboard agree
  const charts = el("div", { class: "charts" });
  for (const format of ["pie_svg", "purpose_svg", "status_svg"]) {
    const img = el("img", { src: api.reportUrl(state.inventoryId, format, state.locale), alt: format });
    charts.append(img);
  }
  section.append(charts);

  const regulatory = el("details", {}, el("summary", {}, "Regulatory table (23 categories)"));
  const table = el("table", { class: "regulatory" });
  table.append(
    el("tr", {}, el("th", {}, "#"), el("th", {}, "Scope"), el("th", {}, "Category"), el("th", {}, "kg CO₂e"), el("th", {}, "±")),
  );
  for (const row of regulatoryRows(result, state.locale)) {
    table.append(
      el(
        "tr",
        {},
        el("td", {}, String(row.category)),
        el("td", {}, String(row.scope)),
        el("td", {}, row.label),
        el("td", {}, formatKg(row.co2eKg)),
        el("td", {}, formatKg(row.uncertaintyKg)),
      ),
    );
  }
  regulatory.append(
    table,
    el("a", { href: api.reportUrl(state.inventoryId, "regulatory_csv", state.locale) }, "download CSV"),
  );
  section.append(regulatory);
  return section;
}

// ---------------------------------------------------------------------------
// Scenario panel
// ---------------------------------------------------------------------------

function renderScenarioPanel(): HTMLElement {
  const section = el("section", {}, el("h3", {}, "What-if scenarios"));
  if (!state.result || !state.inventory) {
    section.append(el("p", {}, "Compute a baseline first."));
    return section;
  }
  const adj = state.scenario;

  const planeMax = numberInput(adj.shift_plane_to_train?.max_km ?? 1000, (v) => {
    adj.shift_plane_to_train = { max_km: v, fraction: adj.shift_plane_to_train?.fraction ?? 0 };
  });
  const planeFraction = numberInput(adj.shift_plane_to_train?.fraction ?? 0, (v) => {
    adj.shift_plane_to_train = { max_km: adj.shift_plane_to_train?.max_km ?? 1000, fraction: v };
  });
  section.append(fieldRow("Shift flights under (km)", planeMax));
  section.append(fieldRow("…fraction of plane-km to rail [0–1]", planeFraction));

  const purposeFraction = numberInput(adj.reduce_travel_by_purpose?.fraction ?? 0, (v) => {
    adj.reduce_travel_by_purpose = { purpose: adj.reduce_travel_by_purpose?.purpose ?? "conference", fraction: v };
  });
  section.append(fieldRow("Reduce conference travel by [0–1]", purposeFraction));

  const commuteFraction = numberInput(adj.commute_mode_shift?.fraction ?? 0, (v) => {
    adj.commute_mode_shift = { from: "car", to: "bus", fraction: v };
  });
  section.append(fieldRow("Shift car commutes to bus [0–1]", commuteFraction));

  const electricity = numberInput(adj.electricity_factor_override ?? NaN, (v) => {
    adj.electricity_factor_override = Number.isNaN(v) ? null : v;
  });
  section.append(fieldRow("Electricity factor override (kg/kWh, blank = off)", electricity));

  const run = el("button", { type: "button", class: "primary" }, "Run scenario");
  run.addEventListener("click", () => void runScenario());
  const reset = el("button", { type: "button" }, "Back to baseline");
  reset.addEventListener("click", () => {
    state.scenario = zeroAdjustment();
    state.scenarioResult = null;
    refresh();
  });
  section.append(run, reset);

  if (state.scenarioResult && state.result) {
    const delta = state.scenarioResult.total_kg - state.result.total_kg;
    const sign = delta <= 0 ? "" : "+";
    section.append(
      el(
        "p",
        { class: "headline" },
        `Scenario total: ${formatKg(state.scenarioResult.total_kg)} (${sign}${formatKg(delta)} vs baseline)`,
      ),
    );
  }
  return section;
}

async function runScenario(): Promise<void> {
  if (!state.inventory || !state.result) return;
  const seq = ++scenarioRequestSeq;
  const plan = applyScenario(state.inventory, state.scenario, state.result.methodology.route_correction);
  try {
    // recompute on a scratch inventory; the baseline is never mutated
    const scratchId = await api.createInventory(plan.inventory);
    const result = await api.compute(scratchId, plan.computeOverride);
    await api.deleteInventory(scratchId);
    if (seq === scenarioRequestSeq) {
      state.scenarioResult = result;
      state.message = "scenario computed";
    }
  } catch (error) {
    if (seq === scenarioRequestSeq) handleApiError(error);
  }
  refresh();
}

// ---------------------------------------------------------------------------
// Shell
// ---------------------------------------------------------------------------

function renderWizardNav(): HTMLElement {
  const nav = el("nav", { class: "steps" });
  WIZARD_STEPS.forEach((step, index) => {
    const button = el("button", { type: "button" }, `${index + 1}. ${step}`);
    if (step === state.wizard.step) button.classList.add("active");
    button.addEventListener("click", () => {
      state.wizard.step = step;
      refresh();
    });
    nav.append(button);
  });
  return nav;
}

function refresh(): void {
  const root = document.getElementById("app");
  if (!root) return;
  state.findings = stepFindings(state.wizard);
  root.innerHTML = "";

  const localeToggle = el("button", { type: "button" }, state.locale === "en" ? "FR" : "EN");
  localeToggle.addEventListener("click", () => {
    state.locale = state.locale === "en" ? "fr" : "en";
    refresh();
  });
  root.append(el("header", {}, el("h1", {}, "Lab GHG inventory"), localeToggle));
  if (state.message) root.append(el("p", { class: "message" }, state.message));

  root.append(renderWizardNav());
  switch (state.wizard.step) {
    case "general":
      root.append(renderGeneralStep());
      break;
    case "buildings":
      root.append(renderBuildingsStep());
      break;
    case "vehicles":
      root.append(renderVehiclesStep());
      break;
    case "uploads":
      root.append(renderUploadsStep());
      break;
  }
  const navButtons = el("div", { class: "wizard-nav" });
  const back = el("button", { type: "button" }, "Back");
  back.addEventListener("click", () => {
    state.wizard = previousStep(state.wizard);
    refresh();
  });
  const forward = el("button", { type: "button", class: "primary" }, "Next");
  forward.addEventListener("click", () => {
    state.wizard = nextStep(state.wizard);
    refresh();
  });
  navButtons.append(back, forward);
  root.append(navButtons);

  root.append(renderDashboard());
  root.append(renderScenarioPanel());
}

document.addEventListener("DOMContentLoaded", () => {
  void api
    .health()
    .then((health) => {
      state.wizard.factorSetVersion = health.factor_set_version;
      state.message = `service ok (factors ${health.factor_set_version})`;
    })
    .catch(() => {
      state.message = "service unreachable — set window.GES_API_BASE";
    })
    .finally(refresh);
});
