/**
 * Conservation drift figure: relative drift of mass and total energy from
 * their initial values, on a log scale against time.
 */

import { renderPanel, svgDocument, fmt, escapeXml, PALETTE, type Series } from "../svg.js";
import type { DiagnosticsRow, FigureResult } from "../types.js";

const FLOOR = 1e-17;

function driftSeries(
  rows: DiagnosticsRow[],
  pick: (r: DiagnosticsRow) => number,
): { t: number[]; d: number[]; max: number } {
  const q0 = pick(rows[0]!);
  const scale = Math.abs(q0) > 0 ? Math.abs(q0) : 1.0;
  const t: number[] = [];
  const d: number[] = [];
  let max = 0;
  for (const row of rows) {
    const drift = Math.abs(pick(row) - q0) / scale;
    t.push(row.t);
    d.push(Math.max(drift, FLOOR));
    if (drift > max) max = drift;
  }
  return { t, d, max };
}

export function driftFigure(rows: DiagnosticsRow[]): FigureResult {
  if (rows.length === 0) {
    throw new Error("no diagnostics rows: cannot build a drift figure");
  }
  const warnings: string[] = [];
  if (rows.length === 1) {
    warnings.push("only one diagnostics row; drift reduces to a single marker");
  }
  const mass = driftSeries(rows, (r) => r.mass);
  const energy = driftSeries(rows, (r) => r.energy);
  if (mass.max === 0) warnings.push("mass drift is identically zero (shown at the plot floor)");
  if (energy.max === 0) warnings.push("energy drift is identically zero (shown at the plot floor)");

  const series: Series[] = [
    { x: mass.t, y: mass.d, color: PALETTE[0]!, label: "relative mass drift", markers: rows.length <= 60 },
    { x: energy.t, y: energy.d, color: PALETTE[1]!, label: "relative energy drift", markers: rows.length <= 60 },
  ];
  const W = 640;
  const H = 470;
  const panel = renderPanel({
    x0: 72,
    y0: 36,
    w: 542,
    h: 336,
    title: "conservation drift",
    xlabel: "t",
    ylabel: "relative drift",
    ylog: true,
    series,
    legend: "nw",
  });
  const caption =
    `<text x="${W / 2}" y="${H - 22}" text-anchor="middle" class="caption" ` +
    `data-max-mass-drift="${String(mass.max)}" data-max-energy-drift="${String(energy.max)}">` +
    escapeXml(
      `max relative drift: mass ${fmt(mass.max)}, energy ${fmt(energy.max)} over ${rows.length} snapshots`,
    ) +
    `</text>`;
  return {
    svg: svgDocument(W, H, panel + "\n" + caption),
    warnings,
    meta: { max_mass_drift: mass.max, max_energy_drift: energy.max, snapshots: rows.length },
  };
}
