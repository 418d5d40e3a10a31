import { ParsedCsv, column, expectKind } from "./csv.js";
import { EmbeddedData, Series, renderLineChart } from "./svg.js";

export type FigureKind = "fig1" | "fig2" | "survival" | "histogram";

export const KINDS: FigureKind[] = ["fig1", "fig2", "survival", "histogram"];

function embed(parsed: ParsedCsv, series: Series[]): EmbeddedData {
  return {
    kind: parsed.kind,
    meta: parsed.meta,
    series: series.map((s) => ({ label: s.label, x: s.x, y: s.y })),
  };
}

function renderFig1(parsed: ParsedCsv): string {
  const tau = column(parsed, "tau");
  const series: Series[] = parsed.columns.slice(1).map((name) => ({
    label: name.replace("logW_over_nbar_", "nbar = ").replace("p", "."),
    x: tau,
    y: column(parsed, name),
  }));
  const references: Series[] = [
    {
      label: "3 - tau",
      x: tau,
      y: tau.map((t) => 3 - t),
      color: "#555",
      dash: "6 4",
      width: 1.2,
    },
    {
      label: "-tau^3/12",
      x: tau,
      y: tau.map((t) => -(t ** 3) / 12),
      color: "#999",
      dash: "2 3",
      width: 1.2,
    },
  ];
  return renderLineChart(series, {
    title: "Scaled log-norm of the no-jump state",
    xLabel: "tau = kappa t",
    yLabel: "log W / nbar",
    references,
  }, embed(parsed, series));
}

function renderFig2(parsed: ParsedCsv): string {
  const tau = column(parsed, "tau");
  const series: Series[] = [{ label: "Y", x: tau, y: column(parsed, "Y") }];
  const ratio = parsed.meta["chi_over_kappa"] ?? "?";
  return renderLineChart(series, {
    title: `Scaled logarithmic decrement, chi/kappa = ${ratio}`,
    xLabel: "tau = kappa t",
    yLabel: "Y",
  }, embed(parsed, series));
}

function renderSurvival(parsed: ParsedCsv): string {
  const t = column(parsed, "t");
  const names = parsed.columns.filter((c) => c.startsWith("W"));
  const series: Series[] = names.map((name) => ({
    label: name,
    x: t,
    y: column(parsed, name),
  }));
  series.push({
    label: "D = -dW/dt",
    x: t,
    y: column(parsed, "D"),
    dash: "5 3",
  });
  return renderLineChart(series, {
    title: "No-jump survival and next-jump density",
    xLabel: "t",
    yLabel: "W, D",
    logY: true,
  }, embed(parsed, series));
}

function renderHistogram(parsed: ParsedCsv): string {
  const left = column(parsed, "bin_left");
  const right = column(parsed, "bin_right");
  // step outline over the bins: one point per edge
  const x = [...left, right[right.length - 1]];
  const asSteps = (vals: number[]): number[] => [...vals, vals[vals.length - 1]];
  const series: Series[] = [
    {
      label: "empirical frequency",
      x,
      y: asSteps(column(parsed, "empirical_freq")),
      step: true,
    },
    {
      label: "expected mass",
      x,
      y: asSteps(column(parsed, "expected_mass")),
      step: true,
      dash: "5 3",
    },
  ];
  return renderLineChart(series, {
    title: "Sampled next-jump times vs record density",
    xLabel: "t",
    yLabel: "probability mass per bin",
  }, embed(parsed, series));
}

export function renderFigure(kind: FigureKind, parsed: ParsedCsv): string {
  expectKind(parsed, kind);
  switch (kind) {
    case "fig1":
      return renderFig1(parsed);
    case "fig2":
      return renderFig2(parsed);
    case "survival":
      return renderSurvival(parsed);
    case "histogram":
      return renderHistogram(parsed);
  }
}
