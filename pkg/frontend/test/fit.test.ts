import { describe, expect, it } from "vitest";

import { fitPowerLaw } from "../src/fit.js";

describe("power-law fit", () => {
  it("recovers an exact power", () => {
    const hs = [1, 2, 3, 4, 5, 6].map((k) => 2 ** -k);
    const fit = fitPowerLaw(hs, hs.map((h) => 3 * h ** 0.25));
    expect(fit.exponent).toBeCloseTo(0.25, 12);
    expect(fit.prefactor).toBeCloseTo(3, 10);
    expect(fit.r2).toBeCloseTo(1, 12);
    expect(fit.used).toBe(6);
  });

  it("drops nonpositive and non-finite points", () => {
    const fit = fitPowerLaw([0.5, 0.25, 0.125, 0.0625], [0.5 ** 0.3, 0, 0.125 ** 0.3, NaN]);
    expect(fit.used).toBe(2);
    expect(fit.exponent).toBeCloseTo(0.3, 10);
  });

  it("needs two positive points", () => {
    expect(() => fitPowerLaw([1], [1])).toThrow(/two positive/);
    expect(() => fitPowerLaw([1, 2], [1, -1])).toThrow(/two positive/);
    expect(() => fitPowerLaw([1, 1], [1, 2])).toThrow(/coincide/);
  });
});
