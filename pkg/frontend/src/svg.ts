/**
 * Minimal SVG plotting kit: line panels with axes, ticks, grid, legend
 * and point markers. No dependencies; output is plain markup.
 *
 * Pixel coordinates are rounded to 1/100 px before serialization and
 * consecutive points that collapse onto the same position are dropped,
 * so a dense trajectory draws as a short polyline and re-rendering the
 * same data is byte-identical.
 */

export const BLUE = "#1f77b4";
export const ORANGE = "#ff7f0e";
export const GREEN = "#2ca02c";
export const RED = "#d62728";
export const PURPLE = "#9467bd";
export const BROWN = "#8c564b";
export const PINK = "#e377c2";
export const GRAY = "#7f7f7f";

export interface Series {
  label: string;
  xs: ArrayLike<number>;
  ys: ArrayLike<number>;
  color: string;
}

export interface Marker {
  x: number;
  y: number;
  label: string;
  /** "ring" is an open circle, "dot" a filled one. */
  kind: "ring" | "dot";
  color: string;
}

export interface PanelOptions {
  width?: number;
  height?: number;
  title?: string;
  xLabel?: string;
  yLabel?: string;
  series: Series[];
  markers?: Marker[];
  /** Draw a dashed horizontal reference at y = 0 when it is in range. */
  zeroLine?: boolean;
  /** Force the same data-units-per-pixel on both axes. */
  equalAspect?: boolean;
  /** Defaults to true when there is more than one series. */
  legend?: boolean;
}

/** Tick spacing from the 1-2-5 ladder, aiming for about `count` intervals. */
export function tickStep(span: number, count: number): number {
  const raw = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const unit = raw / mag;
  if (unit <= 1) return mag;
  if (unit <= 2) return 2 * mag;
  if (unit <= 5) return 5 * mag;
  return 10 * mag;
}

export function ticks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) return [lo];
  const step = tickStep(hi - lo, count);
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let k = 0; ; k++) {
    const v = first + k * step;
    if (v > hi + step * 1e-9) break;
    out.push(v);
  }
  return out;
}

/** Decimal form of a tick value without accumulated float noise. */
export function formatNumber(v: number): string {
  if (v === 0) return "0";
  return String(parseFloat(v.toPrecision(10)));
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function px(v: number): string {
  return String(Math.round(v * 100) / 100);
}

export function polylinePoints(
  xs: ArrayLike<number>,
  ys: ArrayLike<number>,
  mapX: (v: number) => number,
  mapY: (v: number) => number,
): string {
  const pts: [string, string][] = [];
  for (let i = 0; i < xs.length; i++) {
    const sx = px(mapX(xs[i]));
    const sy = px(mapY(ys[i]));
    const n = pts.length;
    if (n > 0 && pts[n - 1][0] === sx && pts[n - 1][1] === sy) continue;
    if (n >= 2) {
      const a = pts[n - 2];
      const b = pts[n - 1];
      // extend an axis-aligned run instead of accumulating points on it
      if ((a[1] === b[1] && b[1] === sy) || (a[0] === b[0] && b[0] === sx)) {
        pts[n - 1] = [sx, sy];
        continue;
      }
    }
    pts.push([sx, sy]);
  }
  return pts.map((p) => p.join(",")).join(" ");
}

interface Range {
  lo: number;
  hi: number;
}

function dataRange(values: Iterable<ArrayLike<number>>, extra: number[]): Range {
  let lo = Infinity;
  let hi = -Infinity;
  for (const arr of values) {
    for (let i = 0; i < arr.length; i++) {
      if (arr[i] < lo) lo = arr[i];
      if (arr[i] > hi) hi = arr[i];
    }
  }
  for (const v of extra) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return { lo, hi };
}

function padRange(r: Range): Range {
  if (r.lo === r.hi) {
    // a flat series still needs a visible band around it
    const pad = Math.max(1, 0.1 * Math.abs(r.lo));
    return { lo: r.lo - pad, hi: r.hi + pad };
  }
  const pad = 0.05 * (r.hi - r.lo);
  return { lo: r.lo - pad, hi: r.hi + pad };
}

function widen(r: Range, target: number): Range {
  const mid = 0.5 * (r.lo + r.hi);
  return { lo: mid - 0.5 * target, hi: mid + 0.5 * target };
}

/**
 * Render one panel as a positioned `<g>` fragment of the given size.
 * Wrap the result (or a stack of results) with `svgDocument`.
 */
export function linePanel(opts: PanelOptions, atX = 0, atY = 0): string {
  const width = opts.width ?? 860;
  const height = opts.height ?? 360;
  const marginLeft = 64;
  const marginRight = 18;
  const marginTop = opts.title ? 36 : 14;
  const marginBottom = opts.xLabel ? 48 : 30;
  const plotW = width - marginLeft - marginRight;
  const plotH = height - marginTop - marginBottom;

  const markers = opts.markers ?? [];
  let xr = padRange(
    dataRange(opts.series.map((s) => s.xs), markers.map((m) => m.x)),
  );
  let yr = padRange(
    dataRange(opts.series.map((s) => s.ys), markers.map((m) => m.y)),
  );
  if (opts.equalAspect) {
    const unit = Math.max((xr.hi - xr.lo) / plotW, (yr.hi - yr.lo) / plotH);
    xr = widen(xr, unit * plotW);
    yr = widen(yr, unit * plotH);
  }

  const mapX = (v: number) => marginLeft + ((v - xr.lo) / (xr.hi - xr.lo)) * plotW;
  const mapY = (v: number) => marginTop + plotH - ((v - yr.lo) / (yr.hi - yr.lo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<g transform="translate(${px(atX)},${px(atY)})" font-family="sans-serif" font-size="12">`,
  );
  parts.push(
    `<rect x="${px(marginLeft)}" y="${px(marginTop)}" width="${px(plotW)}" height="${px(plotH)}" fill="#fff" stroke="#ccc"/>`,
  );

  for (const t of ticks(xr.lo, xr.hi, 6)) {
    const gx = px(mapX(t));
    parts.push(
      `<line x1="${gx}" y1="${px(marginTop)}" x2="${gx}" y2="${px(marginTop + plotH)}" stroke="#e5e5e5"/>`,
    );
    parts.push(
      `<text x="${gx}" y="${px(marginTop + plotH + 16)}" text-anchor="middle" fill="#333">${formatNumber(t)}</text>`,
    );
  }
  for (const t of ticks(yr.lo, yr.hi, 4)) {
    const gy = px(mapY(t));
    parts.push(
      `<line x1="${px(marginLeft)}" y1="${gy}" x2="${px(marginLeft + plotW)}" y2="${gy}" stroke="#e5e5e5"/>`,
    );
    parts.push(
      `<text x="${px(marginLeft - 7)}" y="${gy}" dy="4" text-anchor="end" fill="#333">${formatNumber(t)}</text>`,
    );
  }

  if (opts.zeroLine && yr.lo <= 0 && 0 <= yr.hi) {
    const gy = px(mapY(0));
    parts.push(
      `<line x1="${px(marginLeft)}" y1="${gy}" x2="${px(marginLeft + plotW)}" y2="${gy}" stroke="#888" stroke-dasharray="5,4"/>`,
    );
  }

  for (const s of opts.series) {
    const points = polylinePoints(s.xs, s.ys, mapX, mapY);
    if (points === "") continue;
    if (points.includes(" ")) {
      parts.push(
        `<polyline points="${points}" fill="none" stroke="${s.color}" stroke-width="1.5"/>`,
      );
    } else {
      // the whole series sits on one pixel; a dot is the honest drawing
      const [cx, cy] = points.split(",");
      parts.push(`<circle cx="${cx}" cy="${cy}" r="1.75" fill="${s.color}"/>`);
    }
  }

  for (const m of markers) {
    const cx = px(mapX(m.x));
    const cy = px(mapY(m.y));
    if (m.kind === "ring") {
      parts.push(
        `<circle cx="${cx}" cy="${cy}" r="6" fill="none" stroke="${m.color}" stroke-width="1.8"/>`,
      );
    } else {
      parts.push(`<circle cx="${cx}" cy="${cy}" r="4" fill="${m.color}"/>`);
    }
    parts.push(
      `<text x="${px(mapX(m.x) + 9)}" y="${px(mapY(m.y) + 4)}" fill="#333">${escapeXml(m.label)}</text>`,
    );
  }

  if (opts.legend ?? opts.series.length > 1) {
    const longest = Math.max(...opts.series.map((s) => s.label.length));
    const boxW = 30 + longest * 6.5;
    const boxH = 6 + opts.series.length * 16;
    const boxX = marginLeft + plotW - boxW - 8;
    const boxY = marginTop + 8;
    parts.push(
      `<rect x="${px(boxX)}" y="${px(boxY)}" width="${px(boxW)}" height="${px(boxH)}" fill="#fff" fill-opacity="0.9" stroke="#ccc"/>`,
    );
    opts.series.forEach((s, i) => {
      const ly = boxY + 14 + i * 16;
      parts.push(
        `<line x1="${px(boxX + 6)}" y1="${px(ly - 4)}" x2="${px(boxX + 22)}" y2="${px(ly - 4)}" stroke="${s.color}" stroke-width="2"/>`,
      );
      parts.push(
        `<text x="${px(boxX + 27)}" y="${px(ly)}" fill="#333">${escapeXml(s.label)}</text>`,
      );
    });
  }

  if (opts.title) {
    parts.push(
      `<text x="${px(width / 2)}" y="22" text-anchor="middle" font-size="14" font-weight="bold" fill="#111">${escapeXml(opts.title)}</text>`,
    );
  }
  if (opts.xLabel) {
    parts.push(
      `<text x="${px(marginLeft + plotW / 2)}" y="${px(height - 10)}" text-anchor="middle" fill="#111">${escapeXml(opts.xLabel)}</text>`,
    );
  }
  if (opts.yLabel) {
    const cy = marginTop + plotH / 2;
    parts.push(
      `<text x="16" y="${px(cy)}" text-anchor="middle" fill="#111" transform="rotate(-90 16 ${px(cy)})">${escapeXml(opts.yLabel)}</text>`,
    );
  }

  parts.push("</g>");
  return parts.join("\n");
}

export function svgDocument(width: number, height: number, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="#fff"/>`,
    body,
    "</svg>",
    "",
  ].join("\n");
}
