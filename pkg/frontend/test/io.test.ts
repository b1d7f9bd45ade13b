import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { column, parseScanCsv } from "../src/csv.js";
import { parsePgm } from "../src/pgm.js";

const FIXTURES = join(__dirname, "..", "fixtures");

describe("scan csv parsing", () => {
  it("reads the restricted-norm fixture with provenance comments", () => {
    const table = parseScanCsv(readFileSync(join(FIXTURES, "fup.csv"), "utf8"));
    expect(table.header).toEqual(["h", "norm", "volume_bound", "M", "converged"]);
    expect(table.rows.length).toBe(4);
    expect(table.comments.length).toBeGreaterThanOrEqual(3);
    expect(table.comments.some((c) => c.includes("fitted beta"))).toBe(true);
    const hs = column(table, "h");
    expect(hs[0]).toBeCloseTo(3 ** -5, 12);
    for (const v of column(table, "converged")) expect(v).toBe(1);
  });

  it("keeps nan cells as NaN", () => {
    const table = parseScanCsv(readFileSync(join(FIXTURES, "key.csv"), "utf8"));
    const partial = column(table, "beta_fit_partial");
    expect(Number.isNaN(partial[0])).toBe(true);
    expect(Number.isFinite(partial[partial.length - 1])).toBe(true);
  });

  it("rejects ragged rows and missing columns", () => {
    expect(() => parseScanCsv("a,b\n1,2,3\n")).toThrow(/expected 2/);
    const table = parseScanCsv("a,b\n1,2\n");
    expect(() => column(table, "c")).toThrow(/no column/);
  });
});

describe("pgm parsing", () => {
  it("reads the rendered set mask", () => {
    const pgm = parsePgm(readFileSync(join(FIXTURES, "set_3.pgm"), "utf8"));
    expect(pgm.width).toBe(96);
    expect(pgm.height).toBe(96);
    expect(pgm.maxval).toBe(255);
    const values = new Set(pgm.pixels.flat());
    for (const v of values) expect([0, 255]).toContain(v);
    const filled = pgm.pixels.flat().filter((v) => v === 255).length;
    expect(filled).toBeGreaterThan(0);
    expect(filled).toBeLessThan(96 * 96);
  });

  it("rejects bad headers and truncated data", () => {
    expect(() => parsePgm("P5\n2 2\n255\n0 0 0 0")).toThrow(/magic/);
    expect(() => parsePgm("P2\n2 2\n255\n0 0 0")).toThrow(/expected 4 pixels/);
    expect(() => parsePgm("P2\n2 1\n255\n0 300")).toThrow(/outside/);
  });
});
