import { readFile } from "node:fs/promises";
import { describe, expect, it } from "vitest";

import { SchemaError } from "../src/errors.js";
import { loadReport } from "../src/report.js";

const FIXTURE = new URL("./fixtures/dudley_radial_moment_report.json", import.meta.url).pathname;

describe("loadReport", () => {
  it("parses a harness report", async () => {
    const rep = loadReport(await readFile(FIXTURE, "utf8"), "r.json");
    expect(rep.experiment).toBe("dudley_radial_moment");
    expect(rep.schema_version).toBe(1);
    expect(rep.checks.length).toBeGreaterThan(0);
    expect(typeof rep.checks[0].value).toBe("number");
    expect(rep.pass).toBe(true);
  });

  it("names a missing field with its dotted path", async () => {
    const raw = JSON.parse(await readFile(FIXTURE, "utf8"));
    delete raw.checks[0].value;
    try {
      loadReport(JSON.stringify(raw), "r.json");
      expect.unreachable();
    } catch (e) {
      expect(e).toBeInstanceOf(SchemaError);
      expect((e as SchemaError).field).toBe("checks.0.value");
      expect((e as SchemaError).message).toContain('"checks.0.value"');
    }
  });

  it("names a field of the wrong type", async () => {
    const raw = JSON.parse(await readFile(FIXTURE, "utf8"));
    raw.seed = "oops";
    expect(() => loadReport(JSON.stringify(raw), "r.json")).toThrowError(/"seed"/);
  });

  it("rejects an unknown op value", async () => {
    const raw = JSON.parse(await readFile(FIXTURE, "utf8"));
    raw.checks[0].op = "eq";
    expect(() => loadReport(JSON.stringify(raw), "r.json")).toThrowError(/checks\.0\.op/);
  });

  it("flags syntactically broken JSON", () => {
    expect(() => loadReport("{nope", "r.json")).toThrowError(/not valid JSON/);
  });

  it("ignores extra fields a newer writer might add", async () => {
    const raw = JSON.parse(await readFile(FIXTURE, "utf8"));
    raw.wall_s = 1.5;
    raw.checks[0].note = "extra";
    const rep = loadReport(JSON.stringify(raw), "r.json");
    expect(rep.experiment).toBe("dudley_radial_moment");
  });
});
