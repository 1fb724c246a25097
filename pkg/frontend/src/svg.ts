/**
 * Minimal self-contained SVG plotting kit: linear/log axes, polylines,
 * markers, legends, heatmaps. No dependencies; output is a standalone
 * SVG document string.
 */

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
] as const;

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Compact tick/caption formatting: plain within [1e-3, 1e5), scientific outside. */
export function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e-3 && a < 1e5) {
    const s = v.toPrecision(4);
    return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
  }
  const [m, e] = v.toExponential(2).split("e") as [string, string];
  return `${m.replace(/\.?0+$/, "")}e${Number(e)}`;
}

interface Tick {
  v: number;
  label: string;
}

function linearTicks(lo: number, hi: number, target = 5): Tick[] {
  const span = hi - lo;
  if (!(span > 0)) return [{ v: lo, label: fmt(lo) }];
  const raw = span / target;
  const mag = 10 ** Math.floor(Math.log10(raw));
  let step = mag;
  for (const mult of [1, 2, 5, 10]) {
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  }
  const ticks: Tick[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) {
    const snapped = Math.abs(v) < step * 1e-9 ? 0 : v;
    ticks.push({ v: snapped, label: fmt(snapped) });
  }
  return ticks;
}

function logTicks(lo: number, hi: number): Tick[] {
  const eLo = Math.ceil(Math.log10(lo) - 1e-12);
  const eHi = Math.floor(Math.log10(hi) + 1e-12);
  const ticks: Tick[] = [];
  const mantissas = eHi - eLo >= 3 ? [1] : [1, 2, 5];
  for (let e = eLo - 1; e <= eHi + 1; e++) {
    for (const m of mantissas) {
      const v = m * 10 ** e;
      if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) {
        ticks.push({ v, label: fmt(v) });
      }
    }
  }
  if (ticks.length === 0) {
    ticks.push({ v: lo, label: fmt(lo) }, { v: hi, label: fmt(hi) });
  }
  return ticks;
}

export interface Series {
  x: readonly number[];
  y: readonly number[];
  color?: string;
  label?: string;
  dash?: string;
  width?: number;
  /** Draw circle markers at each point (always on for single-point series). */
  markers?: boolean;
}

export interface PanelSpec {
  x0: number;
  y0: number;
  w: number;
  h: number;
  title?: string;
  xlabel?: string;
  ylabel?: string;
  xlog?: boolean;
  ylog?: boolean;
  series: Series[];
  /** Horizontal reference lines in data coordinates. */
  hlines?: { v: number; color?: string; dash?: string; label?: string }[];
  /** Extra raw SVG placed on top of the panel (already positioned). */
  overlay?: string;
  /** Raw SVG placed under the grid and series (e.g. a heatmap backdrop). */
  underlay?: string;
  /** Panel background fill; "none" lets an underlay show through. */
  bg?: string;
  /** Draw the light grid lines behind the data (default true). */
  grid?: boolean;
  legend?: "ne" | "nw" | "se" | "sw" | "none";
}

interface ScaleFn {
  (v: number): number;
  lo: number;
  hi: number;
  log: boolean;
}

function makeScale(lo: number, hi: number, r0: number, r1: number, log: boolean): ScaleFn {
  const a = log ? Math.log(lo) : lo;
  const b = log ? Math.log(hi) : hi;
  const span = b - a || 1;
  const fn = ((v: number) => {
    const u = log ? Math.log(v) : v;
    return r0 + ((u - a) / span) * (r1 - r0);
  }) as ScaleFn;
  fn.lo = lo;
  fn.hi = hi;
  fn.log = log;
  return fn;
}

function dataRange(
  series: Series[],
  axis: "x" | "y",
  log: boolean,
): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    const arr = axis === "x" ? s.x : s.y;
    for (const v of arr) {
      if (!Number.isFinite(v)) continue;
      if (log && !(v > 0)) continue;
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!(lo <= hi)) {
    throw new Error(`no plottable ${axis}-data${log ? " (log axis needs positive values)" : ""}`);
  }
  if (lo === hi) {
    if (log) {
      lo /= 2;
      hi *= 2;
    } else {
      const pad = Math.abs(lo) > 0 ? 0.1 * Math.abs(lo) : 1.0;
      lo -= pad;
      hi += pad;
    }
  } else if (!log) {
    const pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  } else {
    lo /= 1.15;
    hi *= 1.15;
  }
  return [lo, hi];
}

/** Render one framed panel (axes, ticks, series, legend) into SVG elements. */
export function renderPanel(spec: PanelSpec): string {
  const { x0, y0, w, h } = spec;
  const [xlo, xhi] = dataRange(spec.series, "x", spec.xlog ?? false);
  const [ylo, yhi] = dataRange(spec.series, "y", spec.ylog ?? false);
  const sx = makeScale(xlo, xhi, x0, x0 + w, spec.xlog ?? false);
  const sy = makeScale(ylo, yhi, y0 + h, y0, spec.ylog ?? false);
  const out: string[] = [];
  out.push(
    `<rect x="${x0}" y="${y0}" width="${w}" height="${h}" fill="${spec.bg ?? "white"}" stroke="#444" stroke-width="1"/>`,
  );
  if (spec.underlay) out.push(spec.underlay);
  const gridOn = spec.grid ?? true;
  const xticks = (spec.xlog ? logTicks : linearTicks)(xlo, xhi);
  const yticks = (spec.ylog ? logTicks : linearTicks)(ylo, yhi);
  for (const t of xticks) {
    const px = sx(t.v);
    if (gridOn) {
      out.push(
        `<line x1="${px.toFixed(2)}" y1="${y0}" x2="${px.toFixed(2)}" y2="${y0 + h}" stroke="#ddd" stroke-width="0.6"/>`,
      );
    }
    out.push(
      `<line x1="${px.toFixed(2)}" y1="${y0 + h}" x2="${px.toFixed(2)}" y2="${y0 + h + 4}" stroke="#444"/>`,
      `<text x="${px.toFixed(2)}" y="${y0 + h + 16}" text-anchor="middle" class="tick">${escapeXml(t.label)}</text>`,
    );
  }
  for (const t of yticks) {
    const py = sy(t.v);
    if (gridOn) {
      out.push(
        `<line x1="${x0}" y1="${py.toFixed(2)}" x2="${x0 + w}" y2="${py.toFixed(2)}" stroke="#ddd" stroke-width="0.6"/>`,
      );
    }
    out.push(
      `<line x1="${x0 - 4}" y1="${py.toFixed(2)}" x2="${x0}" y2="${py.toFixed(2)}" stroke="#444"/>`,
      `<text x="${x0 - 7}" y="${(py + 3.5).toFixed(2)}" text-anchor="end" class="tick">${escapeXml(t.label)}</text>`,
    );
  }
  for (const hl of spec.hlines ?? []) {
    if (hl.v < sy.lo || hl.v > sy.hi) continue;
    const py = sy(hl.v);
    out.push(
      `<line x1="${x0}" y1="${py.toFixed(2)}" x2="${x0 + w}" y2="${py.toFixed(2)}" stroke="${hl.color ?? "#888"}" stroke-dasharray="${hl.dash ?? "5 3"}" stroke-width="1.2"/>`,
    );
    if (hl.label) {
      out.push(
        `<text x="${x0 + w - 5}" y="${(py - 4).toFixed(2)}" text-anchor="end" class="tick" fill="${hl.color ?? "#888"}">${escapeXml(hl.label)}</text>`,
      );
    }
  }
  spec.series.forEach((s, i) => {
    const color = s.color ?? PALETTE[i % PALETTE.length]!;
    const pts: string[] = [];
    for (let k = 0; k < s.x.length; k++) {
      const vx = s.x[k]!;
      const vy = s.y[k]!;
      if (!Number.isFinite(vx) || !Number.isFinite(vy)) continue;
      if ((sx.log && !(vx > 0)) || (sy.log && !(vy > 0))) continue;
      pts.push(`${sx(vx).toFixed(2)},${sy(vy).toFixed(2)}`);
    }
    if (pts.length >= 2) {
      out.push(
        `<polyline points="${pts.join(" ")}" fill="none" stroke="${color}" stroke-width="${s.width ?? 1.6}"${s.dash ? ` stroke-dasharray="${s.dash}"` : ""}/>`,
      );
    }
    if (s.markers || pts.length === 1) {
      for (const p of pts) {
        const [px, py] = p.split(",");
        out.push(`<circle cx="${px}" cy="${py}" r="2.6" fill="${color}"/>`);
      }
    }
  });
  if (spec.underlay) {
    out.push(
      `<rect x="${x0}" y="${y0}" width="${w}" height="${h}" fill="none" stroke="#444" stroke-width="1"/>`,
    );
  }
  if (spec.title) {
    out.push(
      `<text x="${x0 + w / 2}" y="${y0 - 8}" text-anchor="middle" class="title">${escapeXml(spec.title)}</text>`,
    );
  }
  if (spec.xlabel) {
    out.push(
      `<text x="${x0 + w / 2}" y="${y0 + h + 34}" text-anchor="middle" class="label">${escapeXml(spec.xlabel)}</text>`,
    );
  }
  if (spec.ylabel) {
    const lx = x0 - 48;
    const ly = y0 + h / 2;
    out.push(
      `<text x="${lx}" y="${ly}" text-anchor="middle" class="label" transform="rotate(-90 ${lx} ${ly})">${escapeXml(spec.ylabel)}</text>`,
    );
  }
  const legendEntries = spec.series.filter((s) => s.label);
  if (legendEntries.length > 0 && spec.legend !== "none") {
    const pos = spec.legend ?? "ne";
    const lw = 8 + 16 + 6 + Math.max(...legendEntries.map((s) => s.label!.length)) * 6.4 + 8;
    const lh = legendEntries.length * 16 + 10;
    const lx = pos.includes("w") ? x0 + 8 : x0 + w - lw - 8;
    const ly = pos.includes("s") ? y0 + h - lh - 8 : y0 + 8;
    out.push(
      `<rect x="${lx}" y="${ly}" width="${lw.toFixed(0)}" height="${lh}" fill="white" fill-opacity="0.85" stroke="#bbb"/>`,
    );
    legendEntries.forEach((s, i) => {
      const color = s.color ?? PALETTE[spec.series.indexOf(s) % PALETTE.length]!;
      const yy = ly + 13 + i * 16;
      out.push(
        `<line x1="${lx + 8}" y1="${yy - 3.5}" x2="${lx + 24}" y2="${yy - 3.5}" stroke="${color}" stroke-width="2"${s.dash ? ` stroke-dasharray="${s.dash}"` : ""}/>`,
        `<text x="${lx + 30}" y="${yy}" class="tick">${escapeXml(s.label!)}</text>`,
      );
    });
  }
  if (spec.overlay) out.push(spec.overlay);
  return out.join("\n");
}

/** Scale helper for overlays that need data->pixel mapping of a panel. */
export function panelScales(spec: PanelSpec): {
  sx: (v: number) => number;
  sy: (v: number) => number;
} {
  const [xlo, xhi] = dataRange(spec.series, "x", spec.xlog ?? false);
  const [ylo, yhi] = dataRange(spec.series, "y", spec.ylog ?? false);
  return {
    sx: makeScale(xlo, xhi, spec.x0, spec.x0 + spec.w, spec.xlog ?? false),
    sy: makeScale(ylo, yhi, spec.y0 + spec.h, spec.y0, spec.ylog ?? false),
  };
}

/** Five-stop dark-blue -> yellow color ramp for density heatmaps. */
export function rampColor(t: number): string {
  const stops: [number, number, number][] = [
    [13, 8, 135],
    [84, 2, 163],
    [156, 23, 158],
    [237, 121, 83],
    [240, 249, 33],
  ];
  const u = Math.min(1, Math.max(0, t)) * (stops.length - 1);
  const i = Math.min(stops.length - 2, Math.floor(u));
  const f = u - i;
  const a = stops[i]!;
  const b = stops[i + 1]!;
  const c = [0, 1, 2].map((k) => Math.round(a[k]! + f * (b[k]! - a[k]!)));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

/**
 * Block-averaged heatmap of row-major samples on an n x n periodic box of
 * side `length` centred at the origin, drawn into the given pixel rect.
 */
export function heatmap(
  rho: Float64Array,
  n: number,
  length: number,
  x0: number,
  y0: number,
  w: number,
  h: number,
  maxCells = 96,
): string {
  const block = Math.max(1, Math.ceil(n / maxCells));
  const m = Math.floor(n / block);
  const cells = new Float64Array(m * m);
  for (let ci = 0; ci < m; ci++) {
    for (let cj = 0; cj < m; cj++) {
      let acc = 0;
      for (let di = 0; di < block; di++) {
        for (let dj = 0; dj < block; dj++) {
          acc += rho[(ci * block + di) * n + (cj * block + dj)]!;
        }
      }
      cells[ci * m + cj] = acc / (block * block);
    }
  }
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of cells) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const span = hi - lo || 1;
  const out: string[] = [];
  const cw = w / m;
  const ch = h / m;
  // axis 0 of the samples is x (drawn horizontally), axis 1 is y (vertical,
  // increasing upward, so flipped against the SVG pixel direction)
  for (let ci = 0; ci < m; ci++) {
    for (let cj = 0; cj < m; cj++) {
      const t = (cells[ci * m + cj]! - lo) / span;
      const px = x0 + ci * cw;
      const py = y0 + h - (cj + 1) * ch;
      out.push(
        `<rect x="${px.toFixed(2)}" y="${py.toFixed(2)}" width="${(cw + 0.35).toFixed(2)}" height="${(ch + 0.35).toFixed(2)}" fill="${rampColor(t)}"/>`,
      );
    }
  }
  return out.join("\n");
}

/** Wrap panel elements into a standalone SVG document. */
export function svgDocument(width: number, height: number, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<style>`,
    `text { font-family: Helvetica, Arial, sans-serif; fill: #222; }`,
    `.title { font-size: 13px; font-weight: bold; }`,
    `.label { font-size: 12px; }`,
    `.tick { font-size: 10px; }`,
    `.caption { font-size: 11px; fill: #333; }`,
    `</style>`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    body,
    `</svg>`,
  ].join("\n");
}
