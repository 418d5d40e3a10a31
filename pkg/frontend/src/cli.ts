#!/usr/bin/env node
/**
 * plotkit <kind> <input.csv> -o <out.svg>
 *
 * Renders nextjump CSV output to SVG.  Kinds: fig1, fig2, survival,
 * histogram.  Exit codes: 0 ok, 1 I/O error, 2 usage or schema mismatch.
 */

import { readFile, writeFile } from "fs/promises";
import { pathToFileURL } from "url";
import { SchemaMismatchError, parseNextjumpCsv } from "./csv.js";
import { FigureKind, KINDS, renderFigure } from "./render.js";

function usage(): string {
  return `usage: plotkit <${KINDS.join("|")}> <input.csv> -o <output.svg>`;
}

export async function run(argv: string[]): Promise<number> {
  const args = [...argv];
  let out: string | null = null;
  const oIdx = args.findIndex((a) => a === "-o" || a === "--output");
  if (oIdx >= 0) {
    out = args[oIdx + 1] ?? null;
    args.splice(oIdx, 2);
  }
  if (args.length !== 2 || out === null) {
    console.error(usage());
    return 2;
  }
  const [kind, input] = args;
  if (!KINDS.includes(kind as FigureKind)) {
    console.error(`unknown kind "${kind}"\n${usage()}`);
    return 2;
  }

  let text: string;
  try {
    text = await readFile(input, "utf-8");
  } catch (err) {
    console.error(`cannot read ${input}: ${(err as Error).message}`);
    return 1;
  }
  let svg: string;
  try {
    svg = renderFigure(kind as FigureKind, parseNextjumpCsv(text));
  } catch (err) {
    if (err instanceof SchemaMismatchError) {
      console.error(`schema mismatch: ${err.message}`);
      return 2;
    }
    console.error(`render failed: ${(err as Error).message}`);
    return 1;
  }
  try {
    await writeFile(out, svg, "utf-8");
  } catch (err) {
    console.error(`cannot write ${out}: ${(err as Error).message}`);
    return 1;
  }
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  run(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
