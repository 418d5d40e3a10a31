/**
 * Parser for the nextjump CSV contract:
 *
 *   # nextjump-csv v1 <kind>
 *   # key=value            (zero or more metadata lines)
 *   col1,col2,...          (header row)
 *   1.5,0.25,...           (data rows, full double precision)
 */

export class SchemaMismatchError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaMismatchError";
  }
}

export interface ParsedCsv {
  kind: string;
  version: string;
  meta: Record<string, string>;
  columns: string[];
  rows: number[][];
}

const MAGIC = /^# nextjump-csv (v\d+) (\S+)\s*$/;

export function parseNextjumpCsv(text: string): ParsedCsv {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaMismatchError("empty file");
  }
  const magic = lines[0].match(MAGIC);
  if (!magic) {
    throw new SchemaMismatchError(
      `missing "# nextjump-csv <version> <kind>" header, got: ${lines[0]}`,
    );
  }
  const [, version, kind] = magic;
  const meta: Record<string, string> = {};
  let i = 1;
  for (; i < lines.length && lines[i].startsWith("#"); i++) {
    const body = lines[i].slice(1).trim();
    const eq = body.indexOf("=");
    if (eq > 0) {
      meta[body.slice(0, eq)] = body.slice(eq + 1);
    }
  }
  if (i >= lines.length) {
    throw new SchemaMismatchError("no header row after metadata");
  }
  const columns = lines[i].split(",");
  const rows: number[][] = [];
  for (i += 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== columns.length) {
      throw new SchemaMismatchError(
        `row ${rows.length + 1} has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    rows.push(cells.map(Number));
  }
  return { kind, version, meta, columns, rows };
}

/** Column layouts each figure kind relies on. */
const REQUIRED: Record<string, (c: string[]) => boolean> = {
  fig1: (c) => c[0] === "tau" && c.length >= 2 && c.slice(1).every((n) => n.startsWith("logW_over_nbar")),
  fig2: (c) => c.length === 2 && c[0] === "tau" && c[1] === "Y",
  survival: (c) =>
    c[0] === "t" && ["W_numeric", "W_exact", "D"].every((n) => c.includes(n)),
  histogram: (c) =>
    ["bin_left", "bin_right", "empirical_freq", "expected_mass"].every((n) => c.includes(n)),
};

export function expectKind(parsed: ParsedCsv, kind: string): ParsedCsv {
  if (!(kind in REQUIRED)) {
    throw new SchemaMismatchError(`unknown figure kind "${kind}"`);
  }
  if (parsed.kind !== kind) {
    throw new SchemaMismatchError(
      `file is kind "${parsed.kind}", expected "${kind}"`,
    );
  }
  if (!REQUIRED[kind](parsed.columns)) {
    throw new SchemaMismatchError(
      `columns [${parsed.columns.join(", ")}] do not match kind "${kind}"`,
    );
  }
  if (parsed.rows.length === 0) {
    throw new SchemaMismatchError("file has no data rows");
  }
  return parsed;
}

export function column(parsed: ParsedCsv, name: string): number[] {
  const idx = parsed.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaMismatchError(`missing column "${name}"`);
  }
  return parsed.rows.map((r) => r[idx]);
}
