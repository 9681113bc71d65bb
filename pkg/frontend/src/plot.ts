/** Axes: data-to-pixel mapping, tick generation, frame drawing. */
import { BLACK, Canvas, Color, GREY } from "./draw.js";

export interface Margin { left: number; right: number; top: number; bottom: number; }

export const DEFAULT_MARGIN: Margin = { left: 70, right: 20, top: 40, bottom: 45 };

export function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= step0) { step = m * mag; break; }
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return ticks;
}

export function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-12); Math.pow(10, e) <= hi * (1 + 1e-12); e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks.length > 0 ? ticks : [lo];
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    const e = Math.floor(Math.log10(a));
    const m = v / Math.pow(10, e);
    const ms = Math.abs(m - Math.round(m)) < 1e-9
      ? String(Math.round(m)) : m.toFixed(1);
    return `${ms}e${e}`;
  }
  return String(Number(v.toPrecision(4)));
}

export class Axes {
  constructor(
    readonly canvas: Canvas,
    readonly xlim: [number, number],
    readonly ylim: [number, number],
    readonly opts: { xlog?: boolean; ylog?: boolean; margin?: Margin } = {},
  ) {}

  private get margin(): Margin { return this.opts.margin ?? DEFAULT_MARGIN; }

  private tx(x: number): number { return this.opts.xlog ? Math.log10(x) : x; }
  private ty(y: number): number { return this.opts.ylog ? Math.log10(y) : y; }

  xPix(x: number): number {
    const [a, b] = this.xlim.map((v) => this.tx(v));
    const w = this.canvas.width - this.margin.left - this.margin.right;
    return this.margin.left + ((this.tx(x) - a) / (b - a)) * w;
  }

  yPix(y: number): number {
    const [a, b] = this.ylim.map((v) => this.ty(v));
    const h = this.canvas.height - this.margin.top - this.margin.bottom;
    return this.canvas.height - this.margin.bottom - ((this.ty(y) - a) / (b - a)) * h;
  }

  frame(title: string, xlabel: string, ylabel: string): void {
    const c = this.canvas;
    const m = this.margin;
    const x0 = m.left, x1 = c.width - m.right;
    const y0 = m.top, y1 = c.height - m.bottom;
    const xticks = this.opts.xlog
      ? logTicks(this.xlim[0], this.xlim[1])
      : niceTicks(this.xlim[0], this.xlim[1]);
    const yticks = this.opts.ylog
      ? logTicks(this.ylim[0], this.ylim[1])
      : niceTicks(this.ylim[0], this.ylim[1]);
    for (const t of xticks) {
      const px = Math.round(this.xPix(t));
      c.line(px, y0, px, y1, GREY, 1, [1, 3]);
      c.line(px, y1, px, y1 + 4, BLACK);
      const label = fmtTick(t);
      c.text(px - Math.floor(c.textWidth(label) / 2), y1 + 8, label, BLACK, 2);
    }
    for (const t of yticks) {
      const py = Math.round(this.yPix(t));
      c.line(x0, py, x1, py, GREY, 1, [1, 3]);
      c.line(x0 - 4, py, x0, py, BLACK);
      const label = fmtTick(t);
      c.text(x0 - 8 - c.textWidth(label), py - 5, label, BLACK, 2);
    }
    c.line(x0, y0, x0, y1, BLACK);
    c.line(x0, y1, x1, y1, BLACK);
    c.line(x1, y0, x1, y1, BLACK);
    c.line(x0, y0, x1, y0, BLACK);
    c.text(x0, 12, title, BLACK, 3);
    c.text(
      Math.floor((x0 + x1) / 2 - c.textWidth(xlabel) / 2),
      c.height - 14, xlabel, BLACK, 2,
    );
    c.text(4, y0 - 16, ylabel, BLACK, 2);
  }

  polyline(
    xs: ArrayLike<number>, ys: ArrayLike<number>, color: Color,
    thickness = 2, dash?: [number, number],
  ): void {
    for (let i = 1; i < xs.length; i++) {
      this.canvas.line(
        this.xPix(xs[i - 1]), this.yPix(ys[i - 1]),
        this.xPix(xs[i]), this.yPix(ys[i]), color, thickness, dash,
      );
    }
  }

  vline(x: number, color: Color, dash?: [number, number]): void {
    const m = this.margin;
    this.canvas.line(
      Math.round(this.xPix(x)), m.top,
      Math.round(this.xPix(x)), this.canvas.height - m.bottom, color, 1, dash,
    );
  }

  legend(entries: Array<[string, Color]>, opts: { dash?: boolean[] } = {}): void {
    const m = this.margin;
    let y = m.top + 8;
    for (let i = 0; i < entries.length; i++) {
      const [label, color] = entries[i];
      const x = m.left + 10;
      this.canvas.line(x, y + 4, x + 22, y + 4, color, 2,
        opts.dash?.[i] ? [4, 3] : undefined);
      this.canvas.text(x + 28, y, label, BLACK, 2);
      y += 16;
    }
  }
}
