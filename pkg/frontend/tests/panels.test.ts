import { mkdtempSync, readdirSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { beforeAll, describe, expect, it } from "vitest";

import { COLUMNS, loadTrajectory, SchemaError, EmptyTrajectory } from "../src/csv.js";
import type { Trajectory } from "../src/csv.js";
import { panelSvgs, PANELS, render } from "../src/panels.js";
import { fixtureCsv } from "./helpers.js";

const ALL_FILES = [
  "states.svg",
  "path.svg",
  "phase.svg",
  "total_energy.svg",
  "swing_up_energy.svg",
];

let sec4Csv: string;
let zeroCsv: string;

beforeAll(() => {
  sec4Csv = fixtureCsv("paper_sec4");
  zeroCsv = fixtureCsv("zero_equilibrium");
}, 120_000);

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "plots-"));
}

describe("reference run", () => {
  let tr: Trajectory;
  beforeAll(() => {
    tr = loadTrajectory(sec4Csv);
  });

  it("parses to the full sample count", () => {
    expect(tr.rows).toBe(60001);
    expect(tr.columns.t[0]).toBe(0);
    expect(tr.columns.t[60000]).toBeCloseTo(60, 6);
  });

  it("shows the regulation outcome the panels are meant to display", () => {
    const { x, y, E } = tr.columns;
    const last = tr.rows - 1;
    const start = Math.hypot(x[0], y[0]);
    expect(Math.hypot(x[last], y[last])).toBeLessThan(0.05 * start);
    expect(Math.abs(E[last])).toBeLessThan(0.01);
  });

  it("renders every panel file", () => {
    const out = tmp();
    const written = render({ csvPath: sec4Csv, panels: PANELS, outDir: out });
    expect(written.map((p) => p.split("/").pop())).toEqual(ALL_FILES);
    expect(readdirSync(out).sort()).toEqual([...ALL_FILES].sort());
    for (const name of ALL_FILES) {
      const content = readFileSync(join(out, name), "utf8");
      expect(content.startsWith("<svg ")).toBe(true);
      expect(content.trimEnd().endsWith("</svg>")).toBe(true);
      expect(content.length).toBeGreaterThan(2000);
    }
  });

  it("marks origin and start on the path panel", () => {
    const svgs = panelSvgs(tr, ["path"]);
    const path = svgs.get("path.svg")!;
    expect(path).toContain(">origin</text>");
    expect(path).toContain(">start</text>");
    expect(path.match(/<circle /g)!.length).toBe(2);
  });

  it("draws the zero reference on both energy panels", () => {
    const svgs = panelSvgs(tr, ["energies"]);
    for (const name of ["total_energy.svg", "swing_up_energy.svg"]) {
      expect(svgs.get(name)!).toContain("stroke-dasharray");
    }
  });

  it("stacks all seven state traces", () => {
    const states = panelSvgs(tr, ["states"]).get("states.svg")!;
    expect(states.match(/<polyline /g)!.length).toBe(7);
    for (const label of ["x (m)", "theta (rad)", "theta_dot (rad/s)"]) {
      expect(states).toContain(`>${label}</text>`);
    }
  });

  it("is a pure function of the trajectory", () => {
    const a = panelSvgs(tr, PANELS);
    const b = panelSvgs(tr, PANELS);
    expect([...a.keys()]).toEqual([...b.keys()]);
    for (const key of a.keys()) {
      expect(a.get(key)).toBe(b.get(key));
    }
  });

  it("writes identical bytes on a second render", () => {
    const first = tmp();
    const second = tmp();
    render({ csvPath: sec4Csv, panels: PANELS, outDir: first });
    render({ csvPath: sec4Csv, panels: PANELS, outDir: second });
    for (const name of ALL_FILES) {
      const a = readFileSync(join(first, name));
      const b = readFileSync(join(second, name));
      expect(a.equals(b)).toBe(true);
    }
  });
});

describe("flat-line run", () => {
  let tr: Trajectory;
  beforeAll(() => {
    tr = loadTrajectory(zeroCsv);
  });

  it("stays exactly at zero in the file", () => {
    for (const name of COLUMNS) {
      if (name === "t") continue;
      const col = tr.columns[name];
      for (let i = 0; i < tr.rows; i++) {
        if (col[i] !== 0) throw new Error(`${name}[${i}] = ${col[i]}`);
      }
    }
  });

  it("renders every panel without error", () => {
    const out = tmp();
    render({ csvPath: zeroCsv, panels: PANELS, outDir: out });
    expect(readdirSync(out).sort()).toEqual([...ALL_FILES].sort());
  });

  it("draws time series as horizontal lines on the zero reference", () => {
    const svgs = panelSvgs(tr, ["energies"]);
    for (const name of ["total_energy.svg", "swing_up_energy.svg"]) {
      const content = svgs.get(name)!;
      const pts = content
        .match(/<polyline points="([^"]*)"/)![1]
        .split(" ")
        .map((p) => p.split(",").map(Number));
      expect(pts).toHaveLength(2);
      expect(pts[0][1]).toBe(pts[1][1]);
      const zero = content.match(/stroke-dasharray[^>]*/)
        ? content.match(/<line x1="[^"]*" y1="([^"]*)"[^>]*stroke-dasharray/)![1]
        : null;
      expect(zero).toBe(String(pts[0][1]));
    }
  });

  it("collapses each state trace to a flat line", () => {
    const states = panelSvgs(tr, ["states"]).get("states.svg")!;
    const polylines = [...states.matchAll(/<polyline points="([^"]*)"/g)];
    expect(polylines).toHaveLength(7);
    for (const m of polylines) {
      const pts = m[1].split(" ").map((p) => p.split(",").map(Number));
      expect(pts).toHaveLength(2);
      expect(pts[0][1]).toBe(pts[1][1]);
    }
  });

  it("draws the motionless path and phase point as dots", () => {
    const svgs = panelSvgs(tr, ["path", "phase"]);
    expect(svgs.get("phase.svg")!).toContain('r="1.75"');
    expect(svgs.get("path.svg")!).toContain('r="1.75"');
  });
});

describe("input validation through render", () => {
  it("raises SchemaError when a column is missing", () => {
    const dir = tmp();
    const path = join(dir, "broken.csv");
    const names = COLUMNS.filter((c) => c !== "E");
    writeFileSync(path, names.join(",") + "\n" + names.map(() => "0").join(",") + "\n");
    expect(() => render({ csvPath: path, panels: PANELS, outDir: dir })).toThrow(
      SchemaError,
    );
  });

  it("raises EmptyTrajectory on a header-only file", () => {
    const dir = tmp();
    const path = join(dir, "empty.csv");
    writeFileSync(path, COLUMNS.join(",") + "\n");
    expect(() => render({ csvPath: path, panels: PANELS, outDir: dir })).toThrow(
      EmptyTrajectory,
    );
  });
});
