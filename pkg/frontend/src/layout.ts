/** Shared figure geometry, colors, and caption text. */

import { Trace } from "./trace.js";
import { YScale, SHIFT_EPSILON } from "./scale.js";

export interface FigureLayout {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const DEFAULT_LAYOUT: FigureLayout = {
  width: 960,
  height: 600,
  left: 70,
  right: 280,
  top: 40,
  bottom: 60,
};

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#e377c2",
  "#bcbd22",
  "#7f7f7f",
];

/** Stable cell -> color assignment in sorted-label order. */
export function cellColors(traces: Trace[]): Map<string, string> {
  const cells = Array.from(new Set(traces.map((t) => t.cell))).sort();
  const map = new Map<string, string>();
  cells.forEach((cell, i) => map.set(cell, PALETTE[i % PALETTE.length]));
  return map;
}

export function shiftCaption(scale: YScale): string | null {
  if (!scale.log || scale.shift === 0) return null;
  return `log scale: values shifted by f - f_best + ${SHIFT_EPSILON} (non-positive minimum ${scale.min})`;
}
