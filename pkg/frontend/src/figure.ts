/** Raster (PNG) figure drawing, mirroring the SVG layout. */

import { Canvas, hexColor, textWidth } from "./raster.js";
import { Trace } from "./trace.js";
import { YScale, formatExponent, linearTicks, logTicks, normalize } from "./scale.js";
import { DEFAULT_LAYOUT, FigureLayout, PALETTE, cellColors, shiftCaption } from "./layout.js";

const BLACK: [number, number, number] = [0x11, 0x11, 0x11];
const GREY: [number, number, number] = [0x33, 0x33, 0x33];
const GRID: [number, number, number] = [0xdd, 0xdd, 0xdd];
const FAINT: [number, number, number] = [0x66, 0x66, 0x66];

export function renderRaster(
  objective: string,
  traces: Trace[],
  yScale: YScale,
  layout: FigureLayout = DEFAULT_LAYOUT
): Canvas {
  const { width, height, left, right, top, bottom } = layout;
  const plotW = width - left - right;
  const plotH = height - top - bottom;
  const maxIter = Math.max(1, ...traces.map((t) => t.rows[t.rows.length - 1].iter));
  const colors = cellColors(traces);
  const canvas = new Canvas(width, height);

  const xPos = (iter: number) => left + (iter / maxIter) * plotW;
  const yPos = (f: number) => top + (1 - normalize(yScale, f)) * plotH;

  canvas.text(left, top - 24, objective, BLACK);

  if (yScale.log) {
    for (const e of logTicks(yScale)) {
      const y = top + (1 - (e - yScale.logMin) / (yScale.logMax - yScale.logMin)) * plotH;
      canvas.line(left, y, left + plotW, y, GRID);
      const label = formatExponent(e);
      canvas.text(left - 8 - textWidth(label), y - 3, label, GREY);
    }
  } else {
    for (const v of linearTicks(yScale.min, yScale.max)) {
      const y = yPos(v);
      canvas.line(left, y, left + plotW, y, GRID);
      const label = v.toPrecision(3);
      canvas.text(left - 8 - textWidth(label), y - 3, label, GREY);
    }
  }
  for (const v of linearTicks(0, maxIter, 8)) {
    const x = xPos(v);
    canvas.line(x, top + plotH, x, top + plotH + 4, GREY);
    const label = String(Math.round(v));
    canvas.text(x - textWidth(label) / 2, top + plotH + 8, label, GREY);
  }
  canvas.rect(left, top, plotW, plotH, GREY);
  canvas.text(left + plotW / 2 - textWidth("iteration") / 2, height - 16, "iteration", GREY);

  for (const t of traces) {
    const rgb = hexColor(colors.get(t.cell) ?? PALETTE[0]);
    let px: number | null = null;
    let py: number | null = null;
    for (const r of t.rows) {
      const x = xPos(r.iter);
      const y = yPos(r.f);
      if (px !== null && py !== null) {
        canvas.line(px, py, x, y, rgb);
      } else {
        canvas.set(x, y, rgb);
      }
      px = x;
      py = y;
    }
  }

  let ly = top + 4;
  for (const t of traces) {
    const rgb = hexColor(colors.get(t.cell) ?? PALETTE[0]);
    canvas.line(left + plotW + 10, ly + 3, left + plotW + 28, ly + 3, rgb);
    canvas.text(left + plotW + 34, ly, t.label, BLACK);
    ly += 12;
  }

  const caption = shiftCaption(yScale);
  if (caption) {
    canvas.text(left, height - 34, caption, FAINT);
  }
  return canvas;
}
