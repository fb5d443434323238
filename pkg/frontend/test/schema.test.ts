// The REST JSON shapes are versioned in ../../api-schema.json and checked
// on both sides: the Python suite validates real server responses against
// it, and this test validates the shapes the client is built against.

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

interface EndpointSchema {
  required: string[];
  item?: string[];
}

const schema: { version: number; endpoints: Record<string, EndpointSchema> } =
  JSON.parse(
    readFileSync(join(__dirname, "..", "..", "api-schema.json"), "utf-8"),
  );

// Representative payloads in the exact shape the typed client (src/api.ts)
// expects. If the schema gains a required key these fail until the client
// types catch up.
const samples: Record<string, { body: Record<string, unknown>; items?: Record<string, unknown>[] }> = {
  "GET /stats": {
    body: {
      n_nodes: 6,
      n_edges: 5,
      embedding_nnz: 12,
      embedding_stale: false,
      journal_entries: 0,
      seed: 42,
    },
  },
  "GET /nodes": {
    body: { total: 1, offset: 0, results: [{ id: 2, iri: "http://x/sugar" }] },
    items: [{ id: 2, iri: "http://x/sugar" }],
  },
  "GET /candidates": {
    body: {
      kind: "missing",
      k: 10,
      stale: false,
      candidates: [{ u: "http://x/a", v: "http://x/b", score: 0.5, kind: "missing" }],
    },
    items: [{ u: "http://x/a", v: "http://x/b", score: 0.5, kind: "missing" }],
  },
  "GET /explain/local": {
    body: {
      u: 0,
      v: 1,
      total: 0.5,
      contributions: [{ feature: "http://x/a", value: 0.5 }],
    },
    items: [{ feature: "http://x/a", value: 0.5 }],
  },
  "GET /explain/global": {
    body: { top: [{ feature: "http://x/a", beta: 1.0, se: 0.1, t: 10.0 }] },
    items: [{ feature: "http://x/a", beta: 1.0, se: 0.1, t: 10.0 }],
  },
  "POST /feedback": {
    body: {
      applied: 1,
      errors: [{ u: "http://x/a", v: "http://x/b", action: "accept", reason: "edge exists" }],
      stale: true,
    },
    items: [{ u: "http://x/a", v: "http://x/b", action: "accept", reason: "edge exists" }],
  },
  "POST /reembed": { body: { stale: false, nnz: 12 } },
  "GET /journal": { body: { entries: [] } },
  error: { body: { code: "unknown_node", message: "unknown node IRI" } },
};

describe("api-schema", () => {
  it("covers every endpoint the client calls", () => {
    expect(Object.keys(samples).sort()).toEqual(Object.keys(schema.endpoints).sort());
  });

  for (const [name, spec] of Object.entries(schema.endpoints)) {
    it(`client shape for ${name} carries all required keys`, () => {
      const sample = samples[name];
      expect(sample).toBeDefined();
      for (const key of spec.required) {
        expect(sample.body, `${name} missing ${key}`).toHaveProperty(key);
      }
      if (spec.item) {
        expect(sample.items, `${name} needs item samples`).toBeDefined();
        for (const item of sample.items!) {
          for (const key of spec.item) {
            expect(item, `${name} item missing ${key}`).toHaveProperty(key);
          }
        }
      }
    });
  }
});
