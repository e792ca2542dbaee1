// Thin typed client over the documented /api endpoints. The UI never
// computes emissions itself: every number displayed comes back from here.

import type { FootprintResult, Inventory, InventoryListing, UploadOutcome } from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: Record<string, unknown>,
  ) {
    super(typeof detail.error === "string" ? detail.error : `HTTP ${status}`);
  }
}

async function parseDetail(response: Response): Promise<Record<string, unknown>> {
  try {
    const body = (await response.json()) as Record<string, unknown>;
    return (body.detail as Record<string, unknown>) ?? body;
  } catch {
    return { error: `HTTP ${response.status}` };
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private token: string | null = null,
  ) {}

  setToken(token: string | null): void {
    this.token = token;
  }

  private headers(extra: Record<string, string> = {}): Record<string, string> {
    return this.token ? { ...extra, Authorization: `Bearer ${this.token}` } : extra;
  }

  private async request(path: string, init: RequestInit = {}): Promise<Response> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      ...init,
      headers: this.headers((init.headers as Record<string, string>) ?? {}),
    });
    if (!response.ok) {
      throw new ApiError(response.status, await parseDetail(response));
    }
    return response;
  }

  async health(): Promise<{ status: string; factor_set_version: string }> {
    const response = await this.request("/api/health");
    return response.json();
  }

  async createAccount(login: string, password: string, labName: string): Promise<string> {
    const response = await this.request("/api/accounts", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ login, password, lab_name: labName }),
    });
    return (await response.json()).account_id;
  }

  async login(login: string, password: string): Promise<string> {
    const response = await this.request("/api/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ login, password }),
    });
    const token = (await response.json()).token as string;
    this.token = token;
    return token;
  }

  async createInventory(inventory: Inventory): Promise<string> {
    const response = await this.request("/api/inventories", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(inventory),
    });
    return (await response.json()).id;
  }

  async getInventory(id: string): Promise<Inventory> {
    const response = await this.request(`/api/inventories/${id}`);
    return (await response.json()).inventory;
  }

  async putInventory(id: string, inventory: Inventory): Promise<void> {
    await this.request(`/api/inventories/${id}`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(inventory),
    });
  }

  async deleteInventory(id: string): Promise<void> {
    await this.request(`/api/inventories/${id}`, { method: "DELETE" });
  }

  async claimInventory(id: string): Promise<void> {
    await this.request(`/api/inventories/${id}/claim`, { method: "POST" });
  }

  async listInventories(): Promise<InventoryListing> {
    const response = await this.request("/api/inventories");
    return response.json();
  }

  private async upload(id: string, endpoint: string, filename: string, payload: string | Blob): Promise<UploadOutcome> {
    const form = new FormData();
    const blob = typeof payload === "string" ? new Blob([payload], { type: "text/plain" }) : payload;
    form.append("file", blob, filename);
    const response = await this.request(`/api/inventories/${id}/${endpoint}`, {
      method: "POST",
      body: form,
    });
    return response.json();
  }

  uploadTravel(id: string, payload: string | Blob, filename = "travel.tsv"): Promise<UploadOutcome> {
    return this.upload(id, "travel", filename, payload);
  }

  uploadCommutes(id: string, payload: string | Blob, filename = "commutes.csv"): Promise<UploadOutcome> {
    return this.upload(id, "commutes", filename, payload);
  }

  /** Compute and return the raw canonical bytes (determinism checks use these). */
  async computeRaw(id: string, electricityOverride?: number): Promise<string> {
    const init: RequestInit =
      electricityOverride === undefined
        ? { method: "POST" }
        : {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ electricity_use_phase_override: electricityOverride }),
          };
    const response = await this.request(`/api/inventories/${id}/compute`, init);
    return response.text();
  }

  async compute(id: string, electricityOverride?: number): Promise<FootprintResult> {
    return JSON.parse(await this.computeRaw(id, electricityOverride));
  }

  async report(id: string, format: string, locale?: string): Promise<string> {
    const params = new URLSearchParams({ format });
    if (locale) params.set("locale", locale);
    const response = await this.request(`/api/inventories/${id}/report?${params}`);
    return response.text();
  }

  reportUrl(id: string, format: string, locale?: string): string {
    const params = new URLSearchParams({ format });
    if (locale) params.set("locale", locale);
    return `${this.baseUrl}/api/inventories/${id}/report?${params}`;
  }
}
