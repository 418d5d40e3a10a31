import type { EmbeddedData } from "./svg.js";

/** Recover the bit-exact plotted series embedded in a plotkit SVG. */
export function extractPlottedData(svgText: string): EmbeddedData {
  const m = svgText.match(/<metadata id="plotkit-data">([\s\S]*?)<\/metadata>/);
  if (!m) {
    throw new Error("no plotkit data block found in SVG");
  }
  const json = m[1]
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&amp;/g, "&");
  return JSON.parse(json) as EmbeddedData;
}
