/**
 * Directory-level orchestration: read every trace CSV under the input
 * directory, group by objective, and write one figure per objective.
 */

import { mkdirSync, readdirSync, writeFileSync } from "fs";
import { join } from "path";

import { DEFAULT_LAYOUT } from "./layout.js";
import { buildYScale } from "./scale.js";
import { renderSvg } from "./svg.js";
import { renderRaster } from "./figure.js";
import { encodePng } from "./png.js";
import { Trace, groupByObjective, readTraceFile } from "./trace.js";

export interface PlotSpec {
  inDir: string;
  outDir: string;
  svg: boolean;
  logY: boolean;
}

export interface RenderReport {
  images: string[];
  skipped: { file: string; reason: string }[];
  parsed: number;
}

export class RenderError extends Error {}

export function renderTraces(
  spec: PlotSpec,
  warn: (msg: string) => void = (msg) => console.error(msg)
): RenderReport {
  let entries: string[];
  try {
    entries = readdirSync(spec.inDir).filter((f) => f.toLowerCase().endsWith(".csv"));
  } catch (err) {
    throw new RenderError(`cannot read input directory ${spec.inDir}: ${err}`);
  }
  entries.sort();
  if (entries.length === 0) {
    throw new RenderError(`no trace CSV files in ${spec.inDir}`);
  }

  const traces: Trace[] = [];
  const skipped: { file: string; reason: string }[] = [];
  for (const name of entries) {
    try {
      traces.push(readTraceFile(join(spec.inDir, name)));
    } catch (err) {
      const reason = err instanceof Error ? err.message : String(err);
      skipped.push({ file: name, reason });
      warn(`warning: skipping ${name}: ${reason}`);
    }
  }
  if (traces.length === 0) {
    throw new RenderError(`all ${entries.length} CSV files were malformed`);
  }

  mkdirSync(spec.outDir, { recursive: true });
  const images: string[] = [];
  for (const [objective, group] of groupByObjective(traces)) {
    const values = group.flatMap((t) => t.rows.map((r) => r.f));
    const yScale = buildYScale(values, spec.logY);
    if (spec.svg) {
      const out = join(spec.outDir, `${objective}.svg`);
      writeFileSync(out, renderSvg(objective, group, yScale, DEFAULT_LAYOUT));
      images.push(out);
    } else {
      const out = join(spec.outDir, `${objective}.png`);
      writeFileSync(out, encodePng(renderRaster(objective, group, yScale)));
      images.push(out);
    }
  }
  return { images, skipped, parsed: traces.length };
}
