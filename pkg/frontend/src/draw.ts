/** Software rasterizer: RGB canvas with lines, rectangles, and a 3x5
 * bitmap font. Everything is integer pixel work, so output is a pure
 * function of the draw calls. */
import { encodePng } from "./png.js";

export type Color = [number, number, number];

export const BLACK: Color = [0, 0, 0];
export const GREY: Color = [170, 170, 170];
export const BLUE: Color = [31, 119, 180];
export const ORANGE: Color = [255, 127, 14];
export const GREEN: Color = [44, 160, 44];
export const RED: Color = [214, 39, 40];
export const PURPLE: Color = [148, 103, 189];

// 3x5 glyphs, rows top to bottom, "1" = ink. Uppercase maps onto the
// same shapes via toLowerCase.
const FONT: Record<string, string[]> = {
  "0": ["111", "101", "101", "101", "111"],
  "1": ["010", "110", "010", "010", "111"],
  "2": ["111", "001", "111", "100", "111"],
  "3": ["111", "001", "111", "001", "111"],
  "4": ["101", "101", "111", "001", "001"],
  "5": ["111", "100", "111", "001", "111"],
  "6": ["111", "100", "111", "101", "111"],
  "7": ["111", "001", "001", "010", "010"],
  "8": ["111", "101", "111", "101", "111"],
  "9": ["111", "101", "111", "001", "111"],
  ".": ["000", "000", "000", "000", "010"],
  ",": ["000", "000", "000", "010", "100"],
  "-": ["000", "000", "111", "000", "000"],
  "+": ["000", "010", "111", "010", "000"],
  "*": ["000", "101", "010", "101", "000"],
  "=": ["000", "111", "000", "111", "000"],
  "_": ["000", "000", "000", "000", "111"],
  "~": ["000", "010", "101", "000", "000"],
  "(": ["010", "100", "100", "100", "010"],
  ")": ["010", "001", "001", "001", "010"],
  "/": ["001", "001", "010", "100", "100"],
  ":": ["000", "010", "000", "010", "000"],
  " ": ["000", "000", "000", "000", "000"],
  a: ["010", "101", "111", "101", "101"],
  b: ["110", "101", "110", "101", "110"],
  c: ["011", "100", "100", "100", "011"],
  d: ["110", "101", "101", "101", "110"],
  e: ["111", "100", "110", "100", "111"],
  f: ["111", "100", "110", "100", "100"],
  g: ["011", "100", "101", "101", "011"],
  h: ["101", "101", "111", "101", "101"],
  i: ["111", "010", "010", "010", "111"],
  j: ["011", "001", "001", "101", "010"],
  k: ["101", "110", "100", "110", "101"],
  l: ["100", "100", "100", "100", "111"],
  m: ["101", "111", "111", "101", "101"],
  n: ["110", "101", "101", "101", "101"],
  o: ["010", "101", "101", "101", "010"],
  p: ["110", "101", "110", "100", "100"],
  q: ["010", "101", "101", "011", "001"],
  r: ["110", "101", "110", "110", "101"],
  s: ["011", "100", "010", "001", "110"],
  t: ["111", "010", "010", "010", "010"],
  u: ["101", "101", "101", "101", "111"],
  v: ["101", "101", "101", "101", "010"],
  w: ["101", "101", "111", "111", "101"],
  x: ["101", "101", "010", "101", "101"],
  y: ["101", "101", "010", "010", "010"],
  z: ["111", "001", "010", "100", "111"],
};

export class Canvas {
  readonly width: number;
  readonly height: number;
  readonly pixels: Uint8Array;

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
    this.pixels = new Uint8Array(width * height * 3).fill(255);
  }

  set(x: number, y: number, color: Color): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const off = (y * this.width + x) * 3;
    this.pixels[off] = color[0];
    this.pixels[off + 1] = color[1];
    this.pixels[off + 2] = color[2];
  }

  fillRect(x0: number, y0: number, w: number, h: number, color: Color): void {
    for (let y = y0; y < y0 + h; y++) {
      for (let x = x0; x < x0 + w; x++) this.set(x, y, color);
    }
  }

  /** Bresenham line; dash is [on, off] in pixels along the step count. */
  line(
    x0: number, y0: number, x1: number, y1: number,
    color: Color, thickness = 1, dash?: [number, number],
  ): void {
    let xa = Math.round(x0), ya = Math.round(y0);
    const xb = Math.round(x1), yb = Math.round(y1);
    const dx = Math.abs(xb - xa), sx = xa < xb ? 1 : -1;
    const dy = -Math.abs(yb - ya), sy = ya < yb ? 1 : -1;
    let err = dx + dy;
    let step = 0;
    const period = dash ? dash[0] + dash[1] : 1;
    for (;;) {
      if (!dash || step % period < dash[0]) {
        for (let ox = 0; ox < thickness; ox++) {
          for (let oy = 0; oy < thickness; oy++) {
            this.set(xa + ox, ya + oy, color);
          }
        }
      }
      if (xa === xb && ya === yb) break;
      const e2 = 2 * err;
      if (e2 >= dy) { err += dy; xa += sx; }
      if (e2 <= dx) { err += dx; ya += sy; }
      step++;
    }
  }

  /** 3x5 font, scaled; (x, y) is the top-left corner. */
  text(x: number, y: number, s: string, color: Color, scale = 2): void {
    let cx = x;
    for (const ch of s) {
      const glyph = FONT[ch] ?? FONT[ch.toLowerCase()] ?? FONT["."];
      for (let row = 0; row < 5; row++) {
        for (let col = 0; col < 3; col++) {
          if (glyph[row][col] === "1") {
            this.fillRect(cx + col * scale, y + row * scale, scale, scale, color);
          }
        }
      }
      cx += 4 * scale;
    }
  }

  textWidth(s: string, scale = 2): number {
    return s.length * 4 * scale - scale;
  }

  toPng(): Buffer {
    return encodePng(this.width, this.height, this.pixels);
  }
}
