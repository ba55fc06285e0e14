import { mkdirSync, mkdtempSync, readFileSync, readdirSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

import { describe, expect, it } from "vitest";

import { RenderError, renderTraces } from "../src/render.js";
import { TRACE_HEADER } from "../src/trace.js";
import { main } from "../src/cli.js";

function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "plot-traces-"));
}

function writeTrace(dir: string, name: string, fs: number[]): void {
  const rows = fs.map((f, i) => `${i},${f},1,0.1,0,0,0`);
  writeFileSync(join(dir, name), `${TRACE_HEADER}\n${rows.join("\n")}\n`);
}

function makeInputs(): string {
  const dir = tempDir();
  writeTrace(dir, "sphere__adam-vanilla__start0.csv", [100, 10, 1, 0.1]);
  writeTrace(dir, "sphere__adam-qqg__start0.csv", [100, 1, 1e-6, 1e-10]);
  writeTrace(dir, "beale__bfgs-vanilla__start0.csv", [14, 2, 1e-9]);
  return dir;
}

describe("renderTraces (svg)", () => {
  it("writes one figure per objective with one polyline per file", () => {
    const inDir = makeInputs();
    const outDir = tempDir();
    const report = renderTraces({ inDir, outDir, svg: true, logY: true }, () => {});
    expect(report.images.length).toBe(2);
    expect(readdirSync(outDir).sort()).toEqual(["beale.svg", "sphere.svg"]);
    const sphere = readFileSync(join(outDir, "sphere.svg"), "utf8");
    expect((sphere.match(/<polyline /g) ?? []).length).toBe(2);
    expect(sphere).toContain('data-label="sphere__adam-qqg__start0"');
    expect(sphere).toContain('data-points="4"');
  });

  it("curve point count equals trace row count", () => {
    const inDir = tempDir();
    writeTrace(inDir, "sphere__gd-vanilla__start0.csv", [5, 4, 3, 2, 1, 0.5, 0.25]);
    const outDir = tempDir();
    renderTraces({ inDir, outDir, svg: true, logY: true }, () => {});
    const svg = readFileSync(join(outDir, "sphere.svg"), "utf8");
    const m = svg.match(/data-points="(\d+)" points="([^"]+)"/);
    expect(m).not.toBeNull();
    expect(Number(m![1])).toBe(7);
    expect(m![2].split(" ").length).toBe(7);
  });

  it("log axis covers the full value range without clipping", () => {
    const inDir = tempDir();
    writeTrace(inDir, "sphere__gd-vanilla__start0.csv", [1e2, 1, 1e-12]);
    const outDir = tempDir();
    renderTraces({ inDir, outDir, svg: true, logY: true }, () => {});
    const svg = readFileSync(join(outDir, "sphere.svg"), "utf8");
    const lo = Number(svg.match(/data-log-min="(-?\d+)"/)![1]);
    const hi = Number(svg.match(/data-log-max="(-?\d+)"/)![1]);
    expect(lo).toBeLessThanOrEqual(-12);
    expect(hi).toBeGreaterThanOrEqual(2);
  });

  it("states the shift in the caption when values are non-positive", () => {
    const inDir = tempDir();
    writeTrace(inDir, "camel__adam-vanilla__start0.csv", [1.5, 0.2, -1.03]);
    const outDir = tempDir();
    renderTraces({ inDir, outDir, svg: true, logY: true }, () => {});
    const svg = readFileSync(join(outDir, "camel.svg"), "utf8");
    expect(svg).toContain("shifted by f - f_best + 1e-16");
  });

  it("re-rendering unchanged inputs is byte-identical", () => {
    const inDir = makeInputs();
    const out1 = tempDir();
    const out2 = tempDir();
    renderTraces({ inDir, outDir: out1, svg: true, logY: true }, () => {});
    renderTraces({ inDir, outDir: out2, svg: true, logY: true }, () => {});
    for (const name of readdirSync(out1)) {
      expect(readFileSync(join(out1, name))).toEqual(readFileSync(join(out2, name)));
    }
  });

  it("skips malformed files with a warning", () => {
    const inDir = makeInputs();
    writeFileSync(join(inDir, "broken.csv"), "not,a,trace\n1,2\n");
    const outDir = tempDir();
    const warnings: string[] = [];
    const report = renderTraces({ inDir, outDir, svg: true, logY: true },
      (msg) => warnings.push(msg));
    expect(report.skipped.length).toBe(1);
    expect(report.skipped[0].file).toBe("broken.csv");
    expect(warnings[0]).toContain("broken.csv");
    expect(report.images.length).toBe(2);
  });

  it("errors when every file is malformed", () => {
    const inDir = tempDir();
    writeFileSync(join(inDir, "a.csv"), "garbage\n");
    writeFileSync(join(inDir, "b.csv"), "more garbage\n");
    expect(() =>
      renderTraces({ inDir, outDir: tempDir(), svg: true, logY: true }, () => {})
    ).toThrow(RenderError);
  });

  it("errors on an empty directory", () => {
    expect(() =>
      renderTraces({ inDir: tempDir(), outDir: tempDir(), svg: true, logY: true }, () => {})
    ).toThrow(/no trace CSV/);
  });
});

describe("renderTraces (png)", () => {
  it("writes valid PNG files deterministically", () => {
    const inDir = makeInputs();
    const out1 = tempDir();
    const out2 = tempDir();
    renderTraces({ inDir, outDir: out1, svg: false, logY: true }, () => {});
    renderTraces({ inDir, outDir: out2, svg: false, logY: true }, () => {});
    const names = readdirSync(out1).sort();
    expect(names).toEqual(["beale.png", "sphere.png"]);
    for (const name of names) {
      const buf = readFileSync(join(out1, name));
      expect([...buf.subarray(0, 8)]).toEqual([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
      expect(buf.readUInt32BE(16)).toBe(960); // IHDR width
      expect(buf.readUInt32BE(20)).toBe(600); // IHDR height
      expect(buf).toEqual(readFileSync(join(out2, name)));
    }
  });
});

describe("cli", () => {
  it("renders via argv and returns 0", () => {
    const inDir = makeInputs();
    const outDir = tempDir();
    expect(main(["--in", inDir, "--out", outDir, "--svg"])).toBe(0);
    expect(readdirSync(outDir).length).toBe(2);
  });

  it("returns 1 on missing arguments", () => {
    expect(main(["--in", "somewhere"])).toBe(1);
  });

  it("returns 1 on an empty input directory", () => {
    expect(main(["--in", tempDir(), "--out", tempDir()])).toBe(1);
  });

  it("returns 1 on unknown flags", () => {
    expect(main(["--in", "x", "--out", "y", "--frobnicate"])).toBe(1);
  });
});
