import { describe, expect, it } from "vitest";
import { SchemaMismatchError, column, expectKind, parseNextjumpCsv } from "../src/csv.js";

const FIG2 = `# nextjump-csv v1 fig2
# chi_over_kappa=5
# tau_max=2
tau,Y
0,0
0.5,1.25
1,0.017453292519943295
`;

describe("parseNextjumpCsv", () => {
  it("parses kind, metadata, columns and rows", () => {
    const p = parseNextjumpCsv(FIG2);
    expect(p.kind).toBe("fig2");
    expect(p.version).toBe("v1");
    expect(p.meta).toEqual({ chi_over_kappa: "5", tau_max: "2" });
    expect(p.columns).toEqual(["tau", "Y"]);
    expect(p.rows).toHaveLength(3);
  });

  it("round-trips full-precision doubles", () => {
    const p = parseNextjumpCsv(FIG2);
    expect(p.rows[2][1]).toBe(0.017453292519943295);
  });

  it("rejects a missing magic header", () => {
    expect(() => parseNextjumpCsv("tau,Y\n0,0\n")).toThrow(SchemaMismatchError);
  });

  it("rejects ragged rows", () => {
    const bad = "# nextjump-csv v1 fig2\ntau,Y\n0,0,9\n";
    expect(() => parseNextjumpCsv(bad)).toThrow(SchemaMismatchError);
  });
});

describe("expectKind", () => {
  it("accepts a matching layout", () => {
    expect(() => expectKind(parseNextjumpCsv(FIG2), "fig2")).not.toThrow();
  });

  it("rejects a kind mismatch", () => {
    expect(() => expectKind(parseNextjumpCsv(FIG2), "fig1")).toThrow(
      SchemaMismatchError,
    );
  });

  it("rejects wrong columns for the declared kind", () => {
    const bad = "# nextjump-csv v1 fig2\ntau,Z\n0,0\n";
    expect(() => expectKind(parseNextjumpCsv(bad), "fig2")).toThrow(
      SchemaMismatchError,
    );
  });

  it("rejects an empty body", () => {
    const bad = "# nextjump-csv v1 fig2\ntau,Y\n";
    expect(() => expectKind(parseNextjumpCsv(bad), "fig2")).toThrow(
      SchemaMismatchError,
    );
  });
});

describe("column", () => {
  it("extracts by name and errors on unknowns", () => {
    const p = parseNextjumpCsv(FIG2);
    expect(column(p, "Y")).toEqual([0, 1.25, 0.017453292519943295]);
    expect(() => column(p, "nope")).toThrow(SchemaMismatchError);
  });
});
