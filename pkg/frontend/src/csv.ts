/** Parsers for the run-directory CSV schema (schema_version=1). */

export const SNAPSHOT_COLUMNS = [
  "t", "r", "u", "v", "dv_plus", "dv_minus",
  "Rt_plus", "Rt_minus", "F", "delta_reconstructed",
] as const;

export const CURVE_COLUMNS = ["family", "foot", "t", "r"] as const;

export class SchemaError extends Error {}

export interface Snapshot {
  t: number;
  r: Float64Array;
  u: Float64Array;
  v: Float64Array;
  rtPlus: Float64Array;
  rtMinus: Float64Array;
  f: Float64Array;
  delta: Float64Array;
}

export interface Curve {
  family: string;
  foot: number;
  t: Float64Array;
  r: Float64Array;
}

function splitLines(text: string): string[] {
  const lines = text.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  return lines;
}

/** Validates the schema comment and header; returns data lines with their
 * 1-based file line numbers. */
function checkHeader(
  text: string,
  path: string,
  columns: readonly string[],
): Array<[number, string]> {
  const lines = splitLines(text);
  if (lines.length < 2 || !lines[0].startsWith("# schema_version=1")) {
    throw new SchemaError(`${path}: missing "# schema_version=1" comment`);
  }
  const got = lines[1].split(",");
  for (let i = 0; i < Math.max(got.length, columns.length); i++) {
    if (got[i] !== columns[i]) {
      throw new SchemaError(
        `${path}: header column ${i + 1} is "${got[i] ?? ""}", ` +
        `expected "${columns[i] ?? "(none)"}"`,
      );
    }
  }
  return lines.slice(2).map((line, i): [number, string] => [i + 3, line]);
}

function parseRow(
  lineNo: number,
  line: string,
  width: number,
  path: string,
  numericFrom = 0,
): string[] {
  const parts = line.split(",");
  if (parts.length !== width) {
    throw new SchemaError(`${path}: corrupt row at line ${lineNo}`);
  }
  for (let i = numericFrom; i < width; i++) {
    if (!Number.isFinite(Number(parts[i]))) {
      throw new SchemaError(`${path}: corrupt row at line ${lineNo}`);
    }
  }
  return parts;
}

export function parseSnapshots(text: string, path: string): Snapshot[] {
  const rows = checkHeader(text, path, SNAPSHOT_COLUMNS);
  const snaps: Snapshot[] = [];
  let buf: number[][] = [];
  let current = NaN;
  const flush = () => {
    if (buf.length === 0) return;
    snaps.push({
      t: current,
      r: Float64Array.from(buf.map((p) => p[1])),
      u: Float64Array.from(buf.map((p) => p[2])),
      v: Float64Array.from(buf.map((p) => p[3])),
      rtPlus: Float64Array.from(buf.map((p) => p[6])),
      rtMinus: Float64Array.from(buf.map((p) => p[7])),
      f: Float64Array.from(buf.map((p) => p[8])),
      delta: Float64Array.from(buf.map((p) => p[9])),
    });
    buf = [];
  };
  for (const [lineNo, line] of rows) {
    const parts = parseRow(lineNo, line, SNAPSHOT_COLUMNS.length, path).map(Number);
    if (parts[0] !== current) {
      flush();
      current = parts[0];
    }
    buf.push(parts);
  }
  flush();
  if (snaps.length === 0) {
    throw new SchemaError(`${path}: no snapshot rows`);
  }
  return snaps;
}

export function parseCurves(text: string, path: string): Curve[] {
  const rows = checkHeader(text, path, CURVE_COLUMNS);
  const curves: Curve[] = [];
  let buf: Array<[number, number]> = [];
  let key: [string, number] | null = null;
  const flush = () => {
    if (!key || buf.length === 0) return;
    curves.push({
      family: key[0],
      foot: key[1],
      t: Float64Array.from(buf.map((p) => p[0])),
      r: Float64Array.from(buf.map((p) => p[1])),
    });
    buf = [];
  };
  for (const [lineNo, line] of rows) {
    const parts = parseRow(lineNo, line, CURVE_COLUMNS.length, path, 1);
    const foot = Number(parts[1]);
    if (!key || key[0] !== parts[0] || key[1] !== foot) {
      flush();
      key = [parts[0], foot];
    }
    buf.push([Number(parts[2]), Number(parts[3])]);
  }
  flush();
  return curves;
}

/** report.txt: "# schema_version=1" then "key = value" lines. */
export function parseReport(text: string, path: string): Map<string, string> {
  const lines = splitLines(text);
  if (lines.length === 0 || !lines[0].startsWith("# schema_version=1")) {
    throw new SchemaError(`${path}: missing "# schema_version=1" comment`);
  }
  const out = new Map<string, string>();
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "" || line.startsWith("#")) continue;
    const eq = line.indexOf("=");
    if (eq < 0) throw new SchemaError(`${path}: corrupt row at line ${i + 1}`);
    out.set(line.slice(0, eq).trim(), line.slice(eq + 1).trim());
  }
  return out;
}
