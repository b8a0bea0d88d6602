/**
 * Figure panels drawn from a trajectory CSV:
 *
 *   states    the seven reduced states against time, stacked
 *   path      ground track, y against x, origin and start marked
 *   phase     pendulum phase portrait, theta_dot against theta
 *   energies  total energy and swing-up energy against time, one file each
 *
 * `render` reads the CSV named by a FigureSpec and writes one SVG per
 * panel into a directory. `panelSvgs` is the pure core: trajectory in,
 * file contents out, nothing else consulted.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { loadTrajectory } from "./csv.js";
import type { ColumnName, Trajectory } from "./csv.js";
import * as svg from "./svg.js";

export const PANELS = ["states", "path", "phase", "energies"] as const;

export type PanelName = (typeof PANELS)[number];

export interface FigureSpec {
  csvPath: string;
  panels: readonly PanelName[];
  outDir: string;
}

const WIDTH = 860;

export function panelSvgs(
  tr: Trajectory,
  panels: readonly PanelName[],
): Map<string, string> {
  const out = new Map<string, string>();
  for (const panel of panels) {
    switch (panel) {
      case "states":
        out.set("states.svg", statesFigure(tr));
        break;
      case "path":
        out.set("path.svg", pathFigure(tr));
        break;
      case "phase":
        out.set("phase.svg", phaseFigure(tr));
        break;
      case "energies":
        out.set("total_energy.svg", energyFigure(tr, "E_total", "total energy"));
        out.set("swing_up_energy.svg", energyFigure(tr, "E", "swing-up energy"));
        break;
    }
  }
  return out;
}

/** Render every requested panel; returns the paths written, in order. */
export function render(spec: FigureSpec): string[] {
  const tr = loadTrajectory(spec.csvPath);
  const files = panelSvgs(tr, spec.panels);
  mkdirSync(spec.outDir, { recursive: true });
  const written: string[] = [];
  for (const [name, content] of files) {
    const path = join(spec.outDir, name);
    writeFileSync(path, content);
    written.push(path);
  }
  return written;
}

const STATE_ROWS: [ColumnName, string, string][] = [
  ["x", "x (m)", svg.BLUE],
  ["y", "y (m)", svg.ORANGE],
  ["psi", "psi (rad)", svg.GREEN],
  ["theta", "theta (rad)", svg.RED],
  ["v", "v (m/s)", svg.PURPLE],
  ["psi_dot", "psi_dot (rad/s)", svg.BROWN],
  ["theta_dot", "theta_dot (rad/s)", svg.PINK],
];

function statesFigure(tr: Trajectory): string {
  const cellH = 150;
  const headH = 34;
  const cells: string[] = [];
  STATE_ROWS.forEach(([column, label, color], i) => {
    const last = i === STATE_ROWS.length - 1;
    cells.push(
      svg.linePanel(
        {
          width: WIDTH,
          height: cellH + (last ? 18 : 0),
          xLabel: last ? "t (s)" : undefined,
          yLabel: label,
          series: [
            { label, xs: tr.columns.t, ys: tr.columns[column], color },
          ],
        },
        0,
        headH + i * cellH,
      ),
    );
  });
  const total = headH + STATE_ROWS.length * cellH + 18;
  const title =
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif"` +
    ` font-size="14" font-weight="bold" fill="#111">State evolution</text>`;
  return svg.svgDocument(WIDTH, total, [title, ...cells].join("\n"));
}

function pathFigure(tr: Trajectory): string {
  const { x, y } = tr.columns;
  return svg.svgDocument(
    WIDTH,
    560,
    svg.linePanel({
      width: WIDTH,
      height: 560,
      title: "Ground path",
      xLabel: "x (m)",
      yLabel: "y (m)",
      equalAspect: true,
      series: [{ label: "path", xs: x, ys: y, color: svg.BLUE }],
      markers: [
        { x: 0, y: 0, label: "origin", kind: "ring", color: svg.RED },
        { x: x[0], y: y[0], label: "start", kind: "dot", color: svg.GREEN },
      ],
    }),
  );
}

function phaseFigure(tr: Trajectory): string {
  return svg.svgDocument(
    WIDTH,
    460,
    svg.linePanel({
      width: WIDTH,
      height: 460,
      title: "Pendulum phase portrait",
      xLabel: "theta (rad)",
      yLabel: "theta_dot (rad/s)",
      series: [
        {
          label: "phase",
          xs: tr.columns.theta,
          ys: tr.columns.theta_dot,
          color: svg.PURPLE,
        },
      ],
    }),
  );
}

function energyFigure(tr: Trajectory, column: "E_total" | "E", name: string): string {
  const color = column === "E" ? svg.RED : svg.BLUE;
  return svg.svgDocument(
    WIDTH,
    360,
    svg.linePanel({
      width: WIDTH,
      height: 360,
      title: name.charAt(0).toUpperCase() + name.slice(1),
      xLabel: "t (s)",
      yLabel: `${column} (J)`,
      zeroLine: true,
      series: [
        { label: name, xs: tr.columns.t, ys: tr.columns[column], color },
      ],
    }),
  );
}
