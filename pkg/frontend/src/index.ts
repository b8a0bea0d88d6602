export { COLUMNS, EmptyTrajectory, SchemaError, loadTrajectory, parseTrajectory } from "./csv.js";
export type { ColumnName, Trajectory } from "./csv.js";
export { PANELS, panelSvgs, render } from "./panels.js";
export type { FigureSpec, PanelName } from "./panels.js";
