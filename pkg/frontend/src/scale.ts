/**
 * Axis domains and tick generation for the convergence figures.
 *
 * The y axis is log10 by default. Non-positive values cannot be drawn on a
 * log axis, so when a figure contains any f <= 0 every series in it is
 * shifted by (-fBest + 1e-16); the shift is reported so the renderer can
 * state it in the caption.
 */

export interface YScale {
  /** additive shift applied to every value before taking log10 (0 when unused) */
  shift: number;
  /** inclusive log10 domain covering every finite shifted value */
  logMin: number;
  logMax: number;
  log: boolean;
  /** linear domain, used when log is off */
  min: number;
  max: number;
}

export const SHIFT_EPSILON = 1e-16;

export function buildYScale(values: number[], log: boolean): YScale {
  const finite = values.filter((v) => Number.isFinite(v));
  if (finite.length === 0) {
    return { shift: 0, logMin: -1, logMax: 1, log, min: 0, max: 1 };
  }
  const lo = Math.min(...finite);
  const hi = Math.max(...finite);
  if (!log) {
    const pad = lo === hi ? Math.max(1e-12, Math.abs(lo) * 0.1) : 0;
    return { shift: 0, logMin: 0, logMax: 0, log, min: lo - pad, max: hi + pad };
  }
  const shift = lo <= 0 ? -lo + SHIFT_EPSILON : 0;
  let logMin = Math.log10(lo + shift);
  let logMax = Math.log10(hi + shift);
  if (!Number.isFinite(logMin)) logMin = -16;
  if (!Number.isFinite(logMax)) logMax = logMin + 1;
  if (logMax - logMin < 1e-9) {
    logMin -= 0.5;
    logMax += 0.5;
  }
  // expand to whole decades so every point lies strictly inside the axis
  return {
    shift,
    logMin: Math.floor(logMin),
    logMax: Math.ceil(logMax),
    log,
    min: lo,
    max: hi,
  };
}

/** Decade ticks, thinned to at most `maxTicks` evenly strided entries. */
export function logTicks(scale: YScale, maxTicks = 12): number[] {
  const span = Math.round(scale.logMax - scale.logMin);
  const stride = Math.max(1, Math.ceil(span / maxTicks));
  const ticks: number[] = [];
  for (let e = Math.round(scale.logMin); e <= Math.round(scale.logMax); e += stride) {
    ticks.push(e);
  }
  return ticks;
}

export function linearTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const norm = rawStep / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(v);
  }
  return ticks;
}

/** Map a value into [0, 1] within the scale (clamped; non-finite goes to 1). */
export function normalize(scale: YScale, value: number): number {
  if (!Number.isFinite(value)) return 1;
  if (scale.log) {
    const shifted = value + scale.shift;
    const lv = shifted > 0 ? Math.log10(shifted) : scale.logMin;
    return clamp01((lv - scale.logMin) / (scale.logMax - scale.logMin));
  }
  return clamp01((value - scale.min) / (scale.max - scale.min || 1));
}

function clamp01(v: number): number {
  return v < 0 ? 0 : v > 1 ? 1 : v;
}

export function formatExponent(e: number): string {
  return `1e${e}`;
}
