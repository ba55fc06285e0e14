/**
 * Trace CSV parsing and grouping.
 *
 * Input files follow the harness schema exactly:
 *   iter,f,grad_inf_norm,step_norm,ls_trials,updates_skipped,elapsed_s
 * and are named `{objective}__{algorithm}-{transform}__start{i}.csv`.
 */

import { readFileSync } from "fs";
import { basename } from "path";

export const TRACE_HEADER =
  "iter,f,grad_inf_norm,step_norm,ls_trials,updates_skipped,elapsed_s";

export interface TraceRow {
  iter: number;
  f: number;
  gradInfNorm: number;
  stepNorm: number;
  lsTrials: number;
  updatesSkipped: number;
  elapsedS: number;
}

export interface Trace {
  /** file name without extension, used as the legend label */
  label: string;
  objective: string;
  /** algorithm-transform cell, used to pick the curve color */
  cell: string;
  start: string;
  rows: TraceRow[];
}

export class TraceFormatError extends Error {}

function parseNumber(text: string, field: string, line: number): number {
  // the harness serializes non-finite floats as inf/-inf/nan
  const t = text.trim().toLowerCase();
  if (t === "inf" || t === "+inf") return Infinity;
  if (t === "-inf") return -Infinity;
  if (t === "nan" || t === "-nan") return NaN;
  const v = Number(text);
  if (!Number.isNaN(v) && text.trim() !== "") {
    return v;
  }
  throw new TraceFormatError(`line ${line}: bad ${field} value ${JSON.stringify(text)}`);
}

export function parseTraceText(text: string): TraceRow[] {
  const lines = text.split("\n");
  if (lines[0]?.trim() !== TRACE_HEADER) {
    throw new TraceFormatError(`unexpected header: ${JSON.stringify(lines[0] ?? "")}`);
  }
  const rows: TraceRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i];
    if (line.trim() === "") continue;
    const cells = line.split(",");
    if (cells.length !== 7) {
      throw new TraceFormatError(`line ${i + 1}: expected 7 columns, got ${cells.length}`);
    }
    rows.push({
      iter: parseNumber(cells[0], "iter", i + 1),
      f: parseNumber(cells[1], "f", i + 1),
      gradInfNorm: parseNumber(cells[2], "grad_inf_norm", i + 1),
      stepNorm: parseNumber(cells[3], "step_norm", i + 1),
      lsTrials: parseNumber(cells[4], "ls_trials", i + 1),
      updatesSkipped: parseNumber(cells[5], "updates_skipped", i + 1),
      elapsedS: parseNumber(cells[6], "elapsed_s", i + 1),
    });
  }
  if (rows.length === 0) {
    throw new TraceFormatError("no data rows");
  }
  return rows;
}

/** Split `{objective}__{cell}__start{i}` into its parts; falls back to the
 * whole stem as the objective for foreign file names. */
export function parseTraceName(fileName: string): {
  objective: string;
  cell: string;
  start: string;
} {
  const stem = basename(fileName).replace(/\.csv$/i, "");
  const parts = stem.split("__");
  if (parts.length === 3) {
    return { objective: parts[0], cell: parts[1], start: parts[2] };
  }
  return { objective: stem, cell: stem, start: "" };
}

export function readTraceFile(path: string): Trace {
  const rows = parseTraceText(readFileSync(path, "utf8"));
  const { objective, cell, start } = parseTraceName(path);
  const stem = basename(path).replace(/\.csv$/i, "");
  return { label: stem, objective, cell, start, rows };
}

export function groupByObjective(traces: Trace[]): Map<string, Trace[]> {
  const groups = new Map<string, Trace[]>();
  for (const t of traces) {
    const list = groups.get(t.objective) ?? [];
    list.push(t);
    groups.set(t.objective, list);
  }
  for (const list of groups.values()) {
    list.sort((a, b) => (a.label < b.label ? -1 : a.label > b.label ? 1 : 0));
  }
  return groups;
}
