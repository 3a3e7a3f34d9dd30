import { describe, expect, it } from "vitest";

import { ColumnError, numbers, parseCsv, requireColumns } from "../src/csv.js";

describe("parseCsv", () => {
  it("parses header and rows", () => {
    const t = parseCsv("a,b\n1,2\n3,4\n", "x.csv");
    expect(t.header).toEqual(["a", "b"]);
    expect(t.rows).toHaveLength(2);
    expect(numbers(t, "b")).toEqual([2, 4]);
  });

  it("names the file when empty", () => {
    expect(() => parseCsv("", "runs/growth.csv")).toThrow(/runs\/growth\.csv/);
  });

  it("rejects header-only files", () => {
    expect(() => parseCsv("a,b\n", "h.csv")).toThrow(/no data rows/);
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv("a,b\n1\n", "r.csv")).toThrow(/row 2/);
  });
});

describe("requireColumns", () => {
  it("lists what is missing and what was expected", () => {
    const t = parseCsv("t,hs_norm\n0,1\n", "g.csv");
    try {
      requireColumns(t, ["t", "i2", "e3"], "conservation_drift");
      throw new Error("should have thrown");
    } catch (err) {
      expect(err).toBeInstanceOf(ColumnError);
      const msg = String((err as Error).message);
      expect(msg).toContain("i2");
      expect(msg).toContain("e3");
      expect(msg).toContain("expected [t, i2, e3]");
    }
  });
});
