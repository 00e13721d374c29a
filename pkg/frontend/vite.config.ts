import { defineConfig } from "vitest/config";

// The dev server proxies /api to a running checker service, so the
// client code can use same-origin paths in development and behind a
// reverse proxy alike.
export default defineConfig({
  server: {
    proxy: {
      "/api": process.env.PROOFCHECK_API ?? "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "node",
    include: ["test/**/*.test.ts"],
  },
});
