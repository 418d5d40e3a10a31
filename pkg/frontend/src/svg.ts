/**
 * Minimal SVG line/step chart builder.
 *
 * Every chart embeds the plotted series, bit-exact, inside a
 * `<metadata id="plotkit-data">` block (JSON round-trips doubles exactly),
 * so downstream tooling can recover the data without re-parsing the CSV.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color?: string;
  dash?: string;
  width?: number;
  /** draw as horizontal steps (histograms) instead of point-to-point */
  step?: boolean;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  width?: number;
  height?: number;
  logY?: boolean;
  /** reference overlays: drawn but kept out of the embedded data series */
  references?: Series[];
}

export interface EmbeddedData {
  kind: string;
  meta: Record<string, string>;
  series: { label: string; x: number[]; y: number[] }[];
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const MARGIN = { top: 48, right: 24, bottom: 56, left: 72 };

function xmlEscape(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function finitePairs(s: Series, logY: boolean): [number, number][] {
  const out: [number, number][] = [];
  for (let i = 0; i < s.x.length; i++) {
    const y = s.y[i];
    if (Number.isFinite(s.x[i]) && Number.isFinite(y) && (!logY || y > 0)) {
      out.push([s.x[i], y]);
    }
  }
  return out;
}

function niceTicks(lo: number, hi: number, n = 6): number[] {
  if (!(hi > lo)) {
    return [lo];
  }
  const span = hi - lo;
  const step0 = span / Math.max(1, n - 1);
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const candidates = [1, 2, 2.5, 5, 10].map((m) => m * mag);
  const step = candidates.find((c) => span / c <= n) ?? candidates[4];
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return ticks;
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return String(parseFloat(v.toPrecision(6)));
}

export function renderLineChart(
  series: Series[],
  opts: ChartOptions,
  embedded: EmbeddedData,
): string {
  const width = opts.width ?? 800;
  const height = opts.height ?? 500;
  const logY = opts.logY ?? false;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const drawn = [...series, ...(opts.references ?? [])];
  const dataPts = series.flatMap((s) => finitePairs(s, logY));
  if (dataPts.length === 0) {
    throw new Error("nothing to plot: no finite points in any series");
  }
  let xMin = Math.min(...dataPts.map((p) => p[0]));
  let xMax = Math.max(...dataPts.map((p) => p[0]));
  let yMin = Math.min(...dataPts.map((p) => p[1]));
  let yMax = Math.max(...dataPts.map((p) => p[1]));
  if (xMax === xMin) xMax = xMin + 1;
  if (yMax === yMin) {
    yMax += yMax === 0 ? 1 : Math.abs(yMax) * 0.1;
    yMin -= yMin === 0 ? 0 : Math.abs(yMin) * 0.1;
  }
  const yPad = logY ? 0 : (yMax - yMin) * 0.04;
  yMin -= yPad;
  yMax += yPad;

  const tx = (v: number) => MARGIN.left + ((v - xMin) / (xMax - xMin)) * plotW;
  const ty = (v: number) => {
    const f = logY
      ? (Math.log10(v) - Math.log10(yMin)) / (Math.log10(yMax) - Math.log10(yMin))
      : (v - yMin) / (yMax - yMin);
    return MARGIN.top + (1 - f) * plotH;
  };

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
  );
  parts.push(
    `<metadata id="plotkit-data">${xmlEscape(JSON.stringify(embedded))}</metadata>`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">${xmlEscape(opts.title)}</text>`,
  );

  // axes + ticks
  const axis = `stroke="#333" stroke-width="1"`;
  parts.push(`<line x1="${MARGIN.left}" y1="${MARGIN.top + plotH}" x2="${MARGIN.left + plotW}" y2="${MARGIN.top + plotH}" ${axis}/>`);
  parts.push(`<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${MARGIN.top + plotH}" ${axis}/>`);
  for (const v of niceTicks(xMin, xMax)) {
    const x = tx(v);
    parts.push(`<line x1="${x}" y1="${MARGIN.top + plotH}" x2="${x}" y2="${MARGIN.top + plotH + 5}" ${axis}/>`);
    parts.push(`<text x="${x}" y="${MARGIN.top + plotH + 20}" text-anchor="middle" font-family="sans-serif" font-size="11">${fmtTick(v)}</text>`);
  }
  const yTicks = logY
    ? niceTicks(Math.log10(yMin), Math.log10(yMax)).map((e) => Math.pow(10, e))
    : niceTicks(yMin, yMax);
  for (const v of yTicks) {
    const y = ty(v);
    parts.push(`<line x1="${MARGIN.left - 5}" y1="${y}" x2="${MARGIN.left}" y2="${y}" ${axis}/>`);
    parts.push(`<text x="${MARGIN.left - 8}" y="${y + 4}" text-anchor="end" font-family="sans-serif" font-size="11">${fmtTick(v)}</text>`);
    parts.push(`<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" stroke="#ddd" stroke-width="0.5"/>`);
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 12}" text-anchor="middle" font-family="sans-serif" font-size="13">${xmlEscape(opts.xLabel)}</text>`,
  );
  parts.push(
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${xmlEscape(opts.yLabel)}</text>`,
  );

  // series
  drawn.forEach((s, i) => {
    const color = s.color ?? PALETTE[i % PALETTE.length];
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    const w = s.width ?? 1.6;
    const pts = finitePairs(s, logY).filter(
      (p) => p[0] >= xMin && p[0] <= xMax && p[1] >= yMin && p[1] <= yMax,
    );
    if (pts.length === 0) return;
    let d = "";
    let prev: [number, number] | null = null;
    for (const [px, py] of pts) {
      if (s.step && prev !== null) {
        d += ` L${tx(px).toFixed(2)},${ty(prev[1]).toFixed(2)}`;
      }
      d += `${d === "" ? "M" : " L"}${tx(px).toFixed(2)},${ty(py).toFixed(2)}`;
      prev = [px, py];
    }
    parts.push(`<path d="${d}" fill="none" stroke="${color}" stroke-width="${w}"${dash}/>`);
  });

  // legend
  drawn.forEach((s, i) => {
    const color = s.color ?? PALETTE[i % PALETTE.length];
    const y = MARGIN.top + 14 + i * 18;
    const x = MARGIN.left + plotW - 180;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(`<line x1="${x}" y1="${y}" x2="${x + 26}" y2="${y}" stroke="${color}" stroke-width="2"${dash}/>`);
    parts.push(`<text x="${x + 32}" y="${y + 4}" font-family="sans-serif" font-size="11">${xmlEscape(s.label)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n");
}
