/**
 * Reader for the simulator's trajectory CSV.
 *
 * The schema is fixed: one header line naming all 19 columns, LF row
 * endings, every cell a finite decimal. Column order is free (the
 * simulator always writes the same order, but nothing here depends on
 * it); presence is mandatory. Anything else raises SchemaError.
 */

import { readFileSync } from "node:fs";

export const COLUMNS = [
  "t",
  "x",
  "y",
  "psi",
  "theta",
  "v",
  "psi_dot",
  "theta_dot",
  "F",
  "tau",
  "E",
  "E_total",
  "V_E",
  "V_psi",
  "psi_d",
  "e_psi",
  "e_v",
  "e_p",
  "lambda",
] as const;

export type ColumnName = (typeof COLUMNS)[number];

/** Input does not conform to the trajectory schema. */
export class SchemaError extends Error {}

/** Structurally valid file that contains no samples. */
export class EmptyTrajectory extends Error {}

export interface Trajectory {
  rows: number;
  columns: Record<ColumnName, Float64Array>;
}

export function parseTrajectory(text: string): Trajectory {
  const lines = text.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop(); // the writer ends the file with a newline
  }
  if (lines.length === 0) {
    throw new SchemaError("empty file, expected a header line");
  }

  const header = stripCr(lines[0]).split(",");
  const index = new Map<string, number>();
  for (let i = 0; i < header.length; i++) {
    if (index.has(header[i])) {
      throw new SchemaError(`duplicate column '${header[i]}'`);
    }
    index.set(header[i], i);
  }
  for (const name of COLUMNS) {
    if (!index.has(name)) {
      throw new SchemaError(`missing column '${name}'`);
    }
  }
  if (header.length !== COLUMNS.length) {
    const known: readonly string[] = COLUMNS;
    const extra = header.filter((h) => !known.includes(h));
    throw new SchemaError(`unexpected column(s): ${extra.join(", ")}`);
  }

  const rows = lines.length - 1;
  if (rows === 0) {
    throw new EmptyTrajectory("header only, no samples");
  }

  const columns = {} as Record<ColumnName, Float64Array>;
  for (const name of COLUMNS) {
    columns[name] = new Float64Array(rows);
  }
  for (let r = 0; r < rows; r++) {
    const cells = stripCr(lines[r + 1]).split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(
        `row ${r + 1}: expected ${header.length} cells, got ${cells.length}`,
      );
    }
    for (const name of COLUMNS) {
      const cell = cells[index.get(name)!];
      const value = Number(cell);
      if (cell === "" || !Number.isFinite(value)) {
        throw new SchemaError(`row ${r + 1}, column '${name}': bad value '${cell}'`);
      }
      columns[name][r] = value;
    }
  }
  return { rows, columns };
}

export function loadTrajectory(path: string): Trajectory {
  return parseTrajectory(readFileSync(path, "utf8"));
}

function stripCr(line: string): string {
  return line.endsWith("\r") ? line.slice(0, -1) : line;
}
