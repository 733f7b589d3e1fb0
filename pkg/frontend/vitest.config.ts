import { defineConfig } from "vitest/config";

// Keep in sync with the port in tests/service-setup.ts: the test window
// shares the service's origin so same-origin fetches work as they would
// when the bundle is served from the service itself.
export default defineConfig({
  test: {
    environment: "happy-dom",
    environmentOptions: {
      happyDOM: { url: "http://127.0.0.1:8641" },
    },
    globalSetup: "./tests/service-setup.ts",
    include: ["tests/**/*.test.ts"],
    testTimeout: 30_000,
    hookTimeout: 180_000,
  },
});
