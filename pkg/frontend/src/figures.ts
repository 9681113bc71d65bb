/** The four run-directory figures. Each renderer is a pure function of
 * the parsed CSV data. */
import { Curve, Snapshot } from "./csv.js";
import { BLACK, BLUE, Canvas, Color, GREEN, ORANGE, PURPLE, RED } from "./draw.js";
import { Axes, DEFAULT_MARGIN } from "./plot.js";

const WIDTH = 800;
const HEIGHT = 600;

const FAMILY_COLORS: Record<string, Color> = {
  plus: BLUE,
  minus: RED,
  zero: GREEN,
};

function rRange(snaps: Snapshot[]): [number, number] {
  let lo = Infinity, hi = -Infinity;
  for (const s of snaps) {
    lo = Math.min(lo, s.r[0]);
    hi = Math.max(hi, s.r[s.r.length - 1]);
  }
  return [lo, hi];
}

/** Characteristic fan: every curve from curves.csv over the shrinking
 * window, in the (r, t) plane. */
export function renderFan(
  snaps: Snapshot[], curves: Curve[],
): { png: Buffer; warnings: string[] } {
  const warnings: string[] = [];
  const canvas = new Canvas(WIDTH, HEIGHT);
  const [rLo, rHi] = rRange(snaps);
  const tHi = Math.max(snaps[snaps.length - 1].t, 1e-12);
  const ax = new Axes(canvas, [rLo, rHi], [0, tHi]);
  ax.frame("characteristic fan", "r", "t");
  if (curves.length === 0) {
    warnings.push("curves.csv has no curves; fan rendered without them");
  }
  const legend: Array<[string, Color]> = [];
  let zeroCount = 0;
  for (const c of curves) {
    let color = FAMILY_COLORS[c.family] ?? BLACK;
    if (c.family === "zero" && zeroCount++ > 0) color = PURPLE;
    ax.polyline(c.r, c.t, color);
    legend.push([`${c.family} (${c.foot.toPrecision(4)})`, color]);
  }
  ax.legend(legend);
  return { png: canvas.toPng(), warnings };
}

/** v(r) profile stack approaching blow-up, log scale in v. */
export function renderProfiles(snaps: Snapshot[]): Buffer {
  const canvas = new Canvas(WIDTH, HEIGHT);
  const [rLo, rHi] = rRange(snaps);
  let vLo = Infinity, vHi = -Infinity;
  for (const s of snaps) {
    for (const v of s.v) {
      vLo = Math.min(vLo, v);
      vHi = Math.max(vHi, v);
    }
  }
  const ax = new Axes(canvas, [rLo, rHi], [vLo * 0.9, vHi * 1.1], { ylog: true });
  ax.frame("v profiles toward blow-up", "r", "v");
  const picks = new Set<number>();
  const count = Math.min(8, snaps.length);
  for (let k = 0; k < count; k++) {
    // quadratic spacing concentrates the stack near the final time
    picks.add(Math.round((snaps.length - 1) * Math.pow(k / Math.max(count - 1, 1), 2)));
  }
  const legend: Array<[string, Color]> = [];
  let i = 0;
  for (const j of [...picks].sort((a, b) => a - b)) {
    const frac = i / Math.max(picks.size - 1, 1);
    const color: Color = [
      Math.round(40 + 180 * frac),
      Math.round(60 * (1 - frac)),
      Math.round(180 * (1 - frac) + 40),
    ];
    ax.polyline(snaps[j].r, snaps[j].v, color);
    legend.push([`t=${snaps[j].t.toPrecision(4)}`, color]);
    i++;
  }
  ax.legend(legend);
  return canvas.toPng();
}

/** max v and min Delta versus t on a log scale, with t* marked. */
export function renderBlowup(snaps: Snapshot[], tstar: number | null): Buffer {
  const canvas = new Canvas(WIDTH, HEIGHT);
  const times = snaps.map((s) => s.t);
  const vmax = snaps.map((s) => Math.max(...s.v));
  const dmin = snaps.map((s) => Math.min(...s.delta));
  const tHi = Math.max(times[times.length - 1], tstar ?? 0) * 1.05 + 1e-12;
  const yLo = Math.min(...dmin) * 0.5;
  const yHi = Math.max(...vmax) * 2;
  const ax = new Axes(canvas, [0, tHi], [yLo, yHi], { ylog: true });
  ax.frame("approach to blow-up", "t", "log scale");
  ax.polyline(times, vmax, BLUE);
  ax.polyline(times, dmin, ORANGE);
  const legend: Array<[string, Color]> = [["max v", BLUE], ["min delta", ORANGE]];
  const dash = [false, false];
  if (tstar !== null) {
    ax.vline(tstar, BLACK, [5, 4]);
    legend.push(["t* bound", BLACK]);
    dash.push(true);
  }
  ax.legend(legend, { dash });
  return canvas.toPng();
}

function heatColor(value: number, scale: number): Color {
  // symmetric log ramp: white at 0, blue for positive, red for negative
  const s = Math.sign(value) * Math.log10(1 + Math.abs(value));
  const f = Math.min(Math.abs(s) / scale, 1);
  const shade = Math.round(255 * (1 - f));
  return value >= 0 ? [shade, shade, 255] : [255, shade, shade];
}

/** Heatmap of min(Rt+, Rt-) over the space-time window. */
export function renderRtilde(snaps: Snapshot[]): Buffer {
  const canvas = new Canvas(WIDTH, HEIGHT);
  const [rLo, rHi] = rRange(snaps);
  const tHi = Math.max(snaps[snaps.length - 1].t, 1e-12);
  const ax = new Axes(canvas, [rLo, rHi], [0, tHi]);
  const m = DEFAULT_MARGIN;
  let scale = 1e-12;
  for (const s of snaps) {
    for (let j = 0; j < s.r.length; j++) {
      const w = Math.min(s.rtPlus[j], s.rtMinus[j]);
      scale = Math.max(scale, Math.log10(1 + Math.abs(w)));
    }
  }
  const x0 = m.left + 1, x1 = canvas.width - m.right - 1;
  const y0 = m.top + 1, y1 = canvas.height - m.bottom - 1;
  for (let py = y0; py <= y1; py++) {
    const t = tHi * (y1 - py) / (y1 - y0);
    // nearest snapshot in time
    let k = 0;
    while (k + 1 < snaps.length
           && Math.abs(snaps[k + 1].t - t) <= Math.abs(snaps[k].t - t)) k++;
    const s = snaps[k];
    for (let px = x0; px <= x1; px++) {
      const r = rLo + (rHi - rLo) * (px - x0) / (x1 - x0);
      if (r < s.r[0] || r > s.r[s.r.length - 1]) continue;
      // nearest sample in r (grid is uniform within a snapshot)
      const dj = s.r.length > 1 ? (s.r[s.r.length - 1] - s.r[0]) / (s.r.length - 1) : 1;
      const j = Math.max(0, Math.min(s.r.length - 1, Math.round((r - s.r[0]) / dj)));
      const w = Math.min(s.rtPlus[j], s.rtMinus[j]);
      canvas.set(px, py, heatColor(w, scale));
    }
  }
  ax.frame("min(Rt+, Rt-) heatmap (blue = positive, red = negative)", "r", "t");
  return canvas.toPng();
}
