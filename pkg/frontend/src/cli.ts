#!/usr/bin/env node
/**
 * plot-traces --in DIR --out DIR [--svg] [--linear-y]
 *
 * Renders one convergence figure per objective from optimizer trace CSVs.
 * Exit codes: 0 success (possibly with skipped files), 1 bad arguments,
 * empty input, or all inputs malformed.
 */

import { resolve } from "path";
import { fileURLToPath } from "url";

import { PlotSpec, RenderError, renderTraces } from "./render.js";

function usage(): string {
  return "usage: plot-traces --in DIR --out DIR [--svg] [--linear-y]";
}

export function parseArgs(argv: string[]): PlotSpec {
  const spec: Partial<PlotSpec> = { svg: false, logY: true };
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--in") {
      spec.inDir = argv[++i];
    } else if (arg === "--out") {
      spec.outDir = argv[++i];
    } else if (arg === "--svg") {
      spec.svg = true;
    } else if (arg === "--linear-y") {
      spec.logY = false;
    } else {
      throw new RenderError(`unknown argument ${arg}\n${usage()}`);
    }
  }
  if (!spec.inDir || !spec.outDir) {
    throw new RenderError(`--in and --out are required\n${usage()}`);
  }
  return spec as PlotSpec;
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    const report = renderTraces(spec);
    console.log(
      `${report.images.length} figure(s) from ${report.parsed} trace(s)` +
        (report.skipped.length ? `, ${report.skipped.length} skipped` : "")
    );
    return 0;
  } catch (err) {
    if (err instanceof RenderError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

if (process.argv[1] && fileURLToPath(import.meta.url) === resolve(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
