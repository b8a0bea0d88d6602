#!/usr/bin/env node
/**
 * Command line front end.
 *
 *   plots --csv out/trajectory.csv --panels all --out figures
 *
 * Exit codes: 0 success, 1 bad usage, 2 unreadable or invalid input.
 */

import { pathToFileURL } from "node:url";

import { EmptyTrajectory, SchemaError } from "./csv.js";
import { PANELS, render } from "./panels.js";
import type { PanelName } from "./panels.js";

const USAGE = `usage: plots --csv PATH [--panels LIST] [--out DIR]

Render SVG figure panels from a simulator trajectory CSV.

  --csv PATH     trajectory CSV to read (required)
  --panels LIST  comma-separated subset of: ${PANELS.join(", ")}; or all
                 (default: all)
  --out DIR      output directory, created if missing (default: plots-out)
  --help         show this text
`;

export function parsePanels(list: string): PanelName[] {
  if (list === "all") return [...PANELS];
  const names: PanelName[] = [];
  for (const token of list.split(",")) {
    if (!(PANELS as readonly string[]).includes(token)) {
      throw new Error(`unknown panel '${token}' (expected ${PANELS.join(", ")} or all)`);
    }
    const name = token as PanelName;
    if (!names.includes(name)) names.push(name);
  }
  return names;
}

export function main(argv: string[]): number {
  // parsed by hand so the tool carries no runtime dependencies
  let csv: string | undefined;
  let panels = "all";
  let out = "plots-out";
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--help") {
      console.log(USAGE);
      return 0;
    }
    if (arg === "--csv" || arg === "--panels" || arg === "--out") {
      const value = argv[++i];
      if (value === undefined) {
        console.error(`plots: ${arg} needs a value\n${USAGE}`);
        return 1;
      }
      if (arg === "--csv") csv = value;
      else if (arg === "--panels") panels = value;
      else out = value;
      continue;
    }
    console.error(`plots: unknown argument '${arg}'\n${USAGE}`);
    return 1;
  }
  if (csv === undefined) {
    console.error(`plots: --csv is required\n${USAGE}`);
    return 1;
  }

  let panelList: PanelName[];
  try {
    panelList = parsePanels(panels);
  } catch (err) {
    console.error(`plots: ${(err as Error).message}`);
    return 1;
  }

  try {
    const written = render({ csvPath: csv, panels: panelList, outDir: out });
    for (const path of written) {
      console.log(`wrote ${path}`);
    }
    return 0;
  } catch (err) {
    const readFailure =
      err instanceof SchemaError ||
      err instanceof EmptyTrajectory ||
      (err as NodeJS.ErrnoException).code === "ENOENT";
    if (readFailure) {
      console.error(`plots: ${(err as Error).message}`);
      return 2;
    }
    throw err;
  }
}

if (import.meta.url === pathToFileURL(process.argv[1] ?? "").href) {
  process.exit(main(process.argv.slice(2)));
}
