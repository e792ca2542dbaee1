import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    globalSetup: "./tests/globalSetup.ts",
    testTimeout: 30_000,
    hookTimeout: 90_000,
    // integration tests share one service instance; keep files sequential
    fileParallelism: false,
  },
});
