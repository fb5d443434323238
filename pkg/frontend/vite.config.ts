import { defineConfig } from "vitest/config";

export default defineConfig({
  base: "./",
  build: { outDir: "dist" },
  server: {
    proxy: {
      "/stats": "http://localhost:8080",
      "/nodes": "http://localhost:8080",
      "/candidates": "http://localhost:8080",
      "/explain": "http://localhost:8080",
      "/feedback": "http://localhost:8080",
      "/reembed": "http://localhost:8080",
      "/journal": "http://localhost:8080",
    },
  },
  test: {
    environment: "happy-dom",
  },
});
