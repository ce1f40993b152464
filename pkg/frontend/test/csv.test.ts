import { describe, expect, it } from "vitest";

import { column, parseCsv, requireColumns } from "../src/csv.js";
import { SchemaError } from "../src/errors.js";

describe("parseCsv", () => {
  it("reads a numeric table", () => {
    const t = parseCsv("a,b\n1,2\n3.5,-4e-2\n", "t.csv");
    expect(t.names).toEqual(["a", "b"]);
    expect(t.rows).toEqual([
      [1, 2],
      [3.5, -0.04],
    ]);
    expect(column(t, "b")).toEqual([2, -0.04]);
  });

  it("keeps a header-only file as zero rows", () => {
    const t = parseCsv("path_id,s,lam\n", "h.csv");
    expect(t.rows).toHaveLength(0);
  });

  it("rejects an empty file", () => {
    expect(() => parseCsv("", "e.csv")).toThrowError(/empty file/);
  });

  it("names the column holding a non-numeric cell", () => {
    try {
      parseCsv("a,b\n1,x\n", "t.csv");
      expect.unreachable();
    } catch (e) {
      expect(e).toBeInstanceOf(SchemaError);
      expect((e as SchemaError).field).toBe("b");
      expect((e as SchemaError).message).toContain('column "b"');
    }
  });

  it("reports ragged rows with their line number", () => {
    expect(() => parseCsv("a,b\n1\n", "t.csv")).toThrowError(/line 2: expected 2 fields/);
  });
});

describe("requireColumns", () => {
  it("names the first missing column", () => {
    const t = parseCsv("a,b\n1,2\n", "t.csv");
    try {
      requireColumns(t, ["a", "mass"], "t.csv");
      expect.unreachable();
    } catch (e) {
      expect((e as SchemaError).field).toBe("mass");
      expect((e as SchemaError).message).toContain('missing column "mass"');
      expect((e as SchemaError).message).toContain("has: a, b");
    }
  });
});
