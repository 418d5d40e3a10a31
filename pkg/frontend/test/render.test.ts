import { describe, expect, it } from "vitest";
import { parseNextjumpCsv } from "../src/csv.js";
import { extractPlottedData } from "../src/extract.js";
import { renderFigure } from "../src/render.js";

function fig2Csv(n = 40): string {
  const lines = ["# nextjump-csv v1 fig2", "# chi_over_kappa=5", "tau,Y"];
  for (let i = 0; i < n; i++) {
    const tau = (10 * i) / (n - 1);
    const y =
      (1 - Math.exp(-tau / 2)) ** 2 +
      4 * Math.exp(-tau / 2) * Math.sin((5 * tau) / 2) ** 2;
    lines.push(`${tau.toPrecision(17)},${y.toPrecision(17)}`);
  }
  return lines.join("\n") + "\n";
}

function fig1Csv(n = 30): string {
  const lines = ["# nextjump-csv v1 fig1", "# nbar_list=25", "tau,logW_over_nbar_25"];
  for (let i = 0; i < n; i++) {
    const tau = (10 * i) / (n - 1);
    const a = 1 - Math.exp(-tau / 2);
    lines.push(`${tau.toPrecision(17)},${(-tau + 2 * a + a * a).toPrecision(17)}`);
  }
  return lines.join("\n") + "\n";
}

const HIST = `# nextjump-csv v1 histogram
# nbar=4
bin_left,bin_right,count,empirical_freq,expected_mass
0,0.5,10,0.1,0.12
0.5,1,50,0.5,0.47
1,1.5,30,0.3,0.31
1.5,2,10,0.1,0.1
`;

const SURV = `# nextjump-csv v1 survival
# nbar=4
t,W_numeric,W_exact,W_short,W_disp_short,W_disp_long,D
0,1,1,1,nan,nan,0
1,0.79,0.79,0.72,nan,nan,0.49
2,0.45,0.45,0.4,nan,nan,0.52
`;

describe("renderFigure", () => {
  it("produces a nonempty SVG for every kind", () => {
    const cases: [string, string][] = [
      ["fig1", fig1Csv()],
      ["fig2", fig2Csv()],
      ["survival", SURV],
      ["histogram", HIST],
    ];
    for (const [kind, csv] of cases) {
      const svg = renderFigure(kind as never, parseNextjumpCsv(csv));
      expect(svg.startsWith("<svg")).toBe(true);
      expect(svg.length).toBeGreaterThan(1000);
      expect(svg).toContain("</svg>");
    }
  });

  it("round-trips the plotted series bit-exactly", () => {
    const parsed = parseNextjumpCsv(fig2Csv());
    const svg = renderFigure("fig2", parsed);
    const data = extractPlottedData(svg);
    expect(data.kind).toBe("fig2");
    expect(data.meta.chi_over_kappa).toBe("5");
    expect(data.series).toHaveLength(1);
    expect(data.series[0].x).toEqual(parsed.rows.map((r) => r[0]));
    expect(data.series[0].y).toEqual(parsed.rows.map((r) => r[1]));
  });

  it("overlays the linear asymptote and cubic reference on fig1", () => {
    const svg = renderFigure("fig1", parseNextjumpCsv(fig1Csv()));
    expect(svg).toContain("3 - tau");
    expect(svg).toContain("-tau^3/12");
    // references stay out of the embedded data
    const data = extractPlottedData(svg);
    expect(data.series.map((s) => s.label)).toEqual(["nbar = 25"]);
  });

  it("keeps non-finite survival cells out of the drawing but renders", () => {
    const svg = renderFigure("survival", parseNextjumpCsv(SURV));
    expect(svg).toContain("W_numeric");
    expect(svg).not.toContain("NaN");
  });

  it("draws histograms as steps covering the full bin span", () => {
    const svg = renderFigure("histogram", parseNextjumpCsv(HIST));
    const data = extractPlottedData(svg);
    expect(data.series[0].x[0]).toBe(0);
    expect(data.series[0].x.at(-1)).toBe(2);
  });
});
