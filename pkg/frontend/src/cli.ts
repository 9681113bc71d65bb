#!/usr/bin/env node
/** Render the four figures from a run directory:
 *
 *   membrane-plots RUN_DIR [--out DIR]
 *
 * Reads snapshots.csv, curves.csv, and report.txt; writes fan.png,
 * profiles.png, blowup.png, rtilde.png. Pure function of the CSVs.
 */
import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { SchemaError, parseCurves, parseReport, parseSnapshots } from "./csv.js";
import { renderBlowup, renderFan, renderProfiles, renderRtilde } from "./figures.js";

export function render(runDir: string, outDir: string, warn: (msg: string) => void): void {
  const snapsPath = join(runDir, "snapshots.csv");
  const curvesPath = join(runDir, "curves.csv");
  const reportPath = join(runDir, "report.txt");
  const snaps = parseSnapshots(readFileSync(snapsPath, "utf8"), snapsPath);
  const curves = parseCurves(readFileSync(curvesPath, "utf8"), curvesPath);
  const report = parseReport(readFileSync(reportPath, "utf8"), reportPath);
  const tstarRaw = report.get("t_star_bound");
  const tstar = tstarRaw !== undefined && Number.isFinite(Number(tstarRaw))
    ? Number(tstarRaw) : null;

  mkdirSync(outDir, { recursive: true });
  const fan = renderFan(snaps, curves);
  for (const w of fan.warnings) warn(w);
  writeFileSync(join(outDir, "fan.png"), fan.png);
  writeFileSync(join(outDir, "profiles.png"), renderProfiles(snaps));
  writeFileSync(join(outDir, "blowup.png"), renderBlowup(snaps, tstar));
  writeFileSync(join(outDir, "rtilde.png"), renderRtilde(snaps));
}

export function main(argv: string[]): number {
  const args = [...argv];
  let outDir: string | null = null;
  const positional: string[] = [];
  while (args.length > 0) {
    const a = args.shift() as string;
    if (a === "--out") {
      const v = args.shift();
      if (v === undefined) {
        console.error("--out requires a directory");
        return 2;
      }
      outDir = v;
    } else if (a === "--help" || a === "-h") {
      console.log("usage: membrane-plots RUN_DIR [--out DIR]");
      return 0;
    } else {
      positional.push(a);
    }
  }
  if (positional.length !== 1) {
    console.error("usage: membrane-plots RUN_DIR [--out DIR]");
    return 2;
  }
  const runDir = positional[0];
  try {
    render(runDir, outDir ?? runDir, (msg) => console.warn(`warning: ${msg}`));
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(String(err.message));
      return 1;
    }
    if (err instanceof Error && "code" in err) {
      console.error(String(err.message));
      return 1;
    }
    throw err;
  }
  return 0;
}

const isDirectRun = process.argv[1] !== undefined
  && import.meta.url.endsWith(process.argv[1].split("/").pop() as string);
if (isDirectRun) {
  process.exit(main(process.argv.slice(2)));
}
