/**
 * Deterministic SVG figure builder: identical inputs produce identical
 * bytes (plain string assembly, fixed number formatting, no timestamps).
 */

import { Trace } from "./trace.js";
import { YScale, formatExponent, linearTicks, logTicks, normalize } from "./scale.js";
import { FigureLayout, PALETTE, cellColors, shiftCaption } from "./layout.js";

function fmt(v: number): string {
  return v.toFixed(2).replace(/\.00$/, "");
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderSvg(
  objective: string,
  traces: Trace[],
  yScale: YScale,
  layout: FigureLayout
): string {
  const { width, height, left, right, top, bottom } = layout;
  const plotW = width - left - right;
  const plotH = height - top - bottom;
  const maxIter = Math.max(1, ...traces.map((t) => t.rows[t.rows.length - 1].iter));
  const colors = cellColors(traces);

  const xPos = (iter: number) => left + (iter / maxIter) * plotW;
  const yPos = (f: number) => top + (1 - normalize(yScale, f)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" data-objective="${esc(objective)}" ` +
      `data-y-log="${yScale.log}" data-y-min="${yScale.min}" data-y-max="${yScale.max}" ` +
      `data-y-shift="${yScale.shift}" data-log-min="${yScale.logMin}" data-log-max="${yScale.logMax}">`
  );
  parts.push(`<rect width="${width}" height="${height}" fill="#ffffff"/>`);
  parts.push(
    `<text x="${left}" y="${top - 14}" font-family="monospace" font-size="16" fill="#111111">` +
      `${esc(objective)}</text>`
  );

  // axes
  parts.push(
    `<rect x="${left}" y="${top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333333" stroke-width="1"/>`
  );

  // y ticks and gridlines
  if (yScale.log) {
    for (const e of logTicks(yScale)) {
      const y = top + (1 - (e - yScale.logMin) / (yScale.logMax - yScale.logMin)) * plotH;
      parts.push(
        `<line x1="${left}" y1="${fmt(y)}" x2="${left + plotW}" y2="${fmt(y)}" ` +
          `stroke="#dddddd" stroke-width="1"/>`
      );
      parts.push(
        `<text x="${left - 6}" y="${fmt(y + 4)}" text-anchor="end" font-family="monospace" ` +
          `font-size="11" fill="#333333">${formatExponent(e)}</text>`
      );
    }
  } else {
    for (const v of linearTicks(yScale.min, yScale.max)) {
      const y = yPos(v);
      parts.push(
        `<line x1="${left}" y1="${fmt(y)}" x2="${left + plotW}" y2="${fmt(y)}" ` +
          `stroke="#dddddd" stroke-width="1"/>`
      );
      parts.push(
        `<text x="${left - 6}" y="${fmt(y + 4)}" text-anchor="end" font-family="monospace" ` +
          `font-size="11" fill="#333333">${v.toPrecision(3)}</text>`
      );
    }
  }

  // x ticks
  for (const v of linearTicks(0, maxIter, 8)) {
    const x = xPos(v);
    parts.push(
      `<line x1="${fmt(x)}" y1="${top + plotH}" x2="${fmt(x)}" y2="${top + plotH + 4}" ` +
        `stroke="#333333" stroke-width="1"/>`
    );
    parts.push(
      `<text x="${fmt(x)}" y="${top + plotH + 16}" text-anchor="middle" ` +
        `font-family="monospace" font-size="11" fill="#333333">${Math.round(v)}</text>`
    );
  }
  parts.push(
    `<text x="${left + plotW / 2}" y="${height - 10}" text-anchor="middle" ` +
      `font-family="monospace" font-size="12" fill="#333333">iteration</text>`
  );

  // one polyline per trace file; point count equals row count
  for (const t of traces) {
    const pts = t.rows
      .map((r) => `${fmt(xPos(r.iter))},${fmt(yPos(r.f))}`)
      .join(" ");
    parts.push(
      `<polyline fill="none" stroke="${colors.get(t.cell) ?? PALETTE[0]}" ` +
        `stroke-width="1.5" data-label="${esc(t.label)}" data-points="${t.rows.length}" ` +
        `points="${pts}"/>`
    );
  }

  // legend, one entry per file
  let ly = top + 8;
  for (const t of traces) {
    const color = colors.get(t.cell) ?? PALETTE[0];
    parts.push(
      `<line x1="${left + plotW + 10}" y1="${ly}" x2="${left + plotW + 30}" y2="${ly}" ` +
        `stroke="${color}" stroke-width="2"/>`
    );
    parts.push(
      `<text x="${left + plotW + 36}" y="${ly + 4}" font-family="monospace" ` +
        `font-size="10" fill="#111111">${esc(t.label)}</text>`
    );
    ly += 16;
  }

  const caption = shiftCaption(yScale);
  if (caption) {
    parts.push(
      `<text x="${left}" y="${height - 28}" font-family="monospace" font-size="10" ` +
        `fill="#666666">${esc(caption)}</text>`
    );
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
