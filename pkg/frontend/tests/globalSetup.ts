// Boots the real inventory service (the Python `ges serve` process) once
// for the whole test run and hands its base URL to the tests.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import type { TestProject } from "vitest/node";

let service: ChildProcess | undefined;

function freePort(): Promise<number> {
  return new Promise((resolvePort, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port"));
        return;
      }
      probe.close(() => resolvePort(address.port));
    });
  });
}

async function waitForHealth(baseUrl: string, timeoutMs = 60_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = undefined;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${baseUrl}/api/health`);
      if (response.ok) return;
    } catch (error) {
      lastError = error;
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error(`service did not come up at ${baseUrl}: ${lastError}`);
}

export default async function setup(project: TestProject): Promise<() => Promise<void>> {
  const port = await freePort();
  const dataDir = mkdtempSync(join(tmpdir(), "labges-web-test-"));
  const configPath = join(dataDir, "config.json");
  writeFileSync(
    configPath,
    JSON.stringify({ service: { host: "127.0.0.1", port, data_dir: join(dataDir, "store") } }),
  );

  const repoRoot = resolve(__dirname, "../..");
  service = spawn("python3", ["-m", "labges.cli", "serve", "--config", configPath], {
    cwd: repoRoot,
    stdio: ["ignore", "pipe", "pipe"],
  });
  service.stderr?.on("data", (chunk: Buffer) => {
    const text = chunk.toString();
    if (text.includes("error")) console.error(`[ges serve] ${text}`);
  });

  const baseUrl = `http://127.0.0.1:${port}`;
  await waitForHealth(baseUrl);
  project.provide("baseUrl", baseUrl);

  return async () => {
    service?.kill("SIGTERM");
    await new Promise((r) => setTimeout(r, 300));
    service?.kill("SIGKILL");
  };
}

declare module "vitest" {
  export interface ProvidedContext {
    baseUrl: string;
  }
}
