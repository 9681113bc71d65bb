/** Synthetic run directory matching the schema_version=1 layout. */
import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

const SNAP_HEADER =
  "t,r,u,v,dv_plus,dv_minus,Rt_plus,Rt_minus,F,delta_reconstructed";

function snapshotRows(t: number, r0: number, r1: number, vPeak: number): string[] {
  const rows: string[] = [];
  const n = 5;
  for (let j = 0; j < n; j++) {
    const r = r0 + ((r1 - r0) * j) / (n - 1);
    const bump = Math.exp(-80 * Math.pow(r - 0.5 * (r0 + r1), 2));
    const v = 80 + (vPeak - 80) * bump;
    const u = 0.6 - 0.2 * (r - r0);
    const rt = 40 - 30 * bump;
    const f = 0.3 + 0.1 * bump;
    const delta = Math.pow(1 + f, 2) / (v * v);
    rows.push([t, r, u, v, 0.1, 0.1, rt, rt + 1, f, delta].join(","));
  }
  return rows;
}

export const SNAPSHOTS_CSV = [
  "# schema_version=1",
  SNAP_HEADER,
  ...snapshotRows(0.0, 1.0, 1.4, 80),
  ...snapshotRows(0.3, 1.05, 1.38, 200),
  ...snapshotRows(0.53, 1.2, 1.36, 1000),
].join("\n") + "\n";

export const CURVES_CSV = [
  "# schema_version=1",
  "family,foot,t,r",
  "plus,1.0,0,1.0", "plus,1.0,0.3,1.1", "plus,1.0,0.53,1.2",
  "zero,1.1,0,1.1", "zero,1.1,0.3,1.2", "zero,1.1,0.53,1.28",
  "zero,1.3,0,1.3", "zero,1.3,0.3,1.33", "zero,1.3,0.53,1.35",
  "minus,1.4,0,1.4", "minus,1.4,0.3,1.38", "minus,1.4,0.53,1.36",
].join("\n") + "\n";

export const REPORT_TXT = [
  "# schema_version=1",
  "t_blow_observed = 0.53",
  "t_star_bound = 1.154",
  "v_max = 1000.0",
  "run_status = blew_up",
].join("\n") + "\n";

export function writeRunDir(dir: string, overrides: Partial<Record<
  "snapshots.csv" | "curves.csv" | "report.txt", string>> = {}): string {
  mkdirSync(dir, { recursive: true });
  writeFileSync(join(dir, "snapshots.csv"),
    overrides["snapshots.csv"] ?? SNAPSHOTS_CSV);
  writeFileSync(join(dir, "curves.csv"), overrides["curves.csv"] ?? CURVES_CSV);
  writeFileSync(join(dir, "report.txt"), overrides["report.txt"] ?? REPORT_TXT);
  return dir;
}
