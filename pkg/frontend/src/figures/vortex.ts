/**
 * Vortex track figure: core positions from the circulation probes of each
 * diagnostics row, drawn over an optional density heatmap of a snapshot.
 * Each core gets a track line, a final-position mark, and its measured
 * winding next to the declared one.
 */

import { renderPanel, panelScales, heatmap, svgDocument, fmt, escapeXml, PALETTE, type Series, type PanelSpec } from "../svg.js";
import { densityImage } from "../qhdf.js";
import type { DiagnosticsRow, QhdfField, FigureResult } from "../types.js";

export function vortexFigure(
  rows: DiagnosticsRow[],
  snapshot?: QhdfField,
): FigureResult {
  if (rows.length === 0) {
    throw new Error("no diagnostics rows: cannot build a vortex figure");
  }
  const warnings: string[] = [];
  const probed = rows
    .map((r) => ({ t: r.t, circulation: r.circulation ?? [] }))
    .filter((r) => r.circulation.length > 0);
  if (probed.length === 0) {
    throw new Error("no circulation probes in this file: nothing to track");
  }
  if (probed.length === 1) {
    warnings.push("only one probed snapshot; tracks reduce to single markers");
  }
  const nCores = probed[0]!.circulation.length;
  for (const row of probed) {
    if (row.circulation.length !== nCores) {
      warnings.push(
        `probe count changes over time (${nCores} -> ${row.circulation.length}); tracks use the first ${nCores}`,
      );
      break;
    }
  }

  const series: Series[] = [];
  const marks: string[] = [];
  let maxDefect = 0;
  const windings: number[] = [];
  for (let j = 0; j < nCores; j++) {
    const xs: number[] = [];
    const ys: number[] = [];
    for (const row of probed) {
      const entry = row.circulation[j];
      if (!entry) continue;
      xs.push(entry.x[0]);
      ys.push(entry.x[1]);
      if (entry.defect > maxDefect) maxDefect = entry.defect;
    }
    const last = probed[probed.length - 1]!.circulation[j]!;
    windings.push(last.winding);
    if (last.winding !== last.k) {
      warnings.push(
        `core ${j}: measured winding ${last.winding} differs from declared ${last.k}`,
      );
    }
    series.push({
      x: xs,
      y: ys,
      color: PALETTE[j % PALETTE.length]!,
      label: `core ${j}: k=${last.k >= 0 ? "+" : ""}${last.k}, measured ${last.winding >= 0 ? "+" : ""}${last.winding}`,
      width: 2.0,
      markers: probed.length <= 30,
    });
  }

  if (snapshot) {
    const half = snapshot.extent / 2;
    // invisible corner series pins the panel to the full box
    series.push({ x: [-half, half], y: [-half, half], color: "rgba(0,0,0,0)", width: 0 });
  }

  const spec: PanelSpec = {
    x0: 80,
    y0: 36,
    w: 440,
    h: 440,
    title: "vortex core tracks",
    xlabel: "x",
    ylabel: "y",
    series,
    legend: "ne",
    bg: snapshot ? "none" : "white",
    grid: !snapshot,
  };
  if (snapshot) {
    const img = densityImage(snapshot);
    const { sx, sy } = panelScales(spec);
    const half = img.length / 2;
    const px0 = sx(-half);
    const px1 = sx(half);
    const py0 = sy(half);
    const py1 = sy(-half);
    spec.underlay = heatmap(img.rho, img.n, img.length, px0, py0, px1 - px0, py1 - py0);
  }
  const { sx, sy } = panelScales(spec);
  for (let j = 0; j < nCores; j++) {
    const last = probed[probed.length - 1]!.circulation[j]!;
    const cx = sx(last.x[0]);
    const cy = sy(last.x[1]);
    marks.push(
      `<circle class="core-mark" cx="${cx.toFixed(2)}" cy="${cy.toFixed(2)}" r="6" fill="none" stroke="${PALETTE[j % PALETTE.length]}" stroke-width="2.2"/>`,
      `<text x="${(cx + 9).toFixed(2)}" y="${(cy - 8).toFixed(2)}" class="tick" fill="#111">${last.winding >= 0 ? "+" : ""}${last.winding}</text>`,
    );
  }
  spec.overlay = marks.join("\n");

  const W = 640;
  const H = 560;
  const panel = renderPanel(spec);
  const t0 = probed[0]!.t;
  const t1 = probed[probed.length - 1]!.t;
  const caption =
    `<text x="${W / 2}" y="${H - 22}" text-anchor="middle" class="caption" data-max-defect="${String(maxDefect)}">` +
    escapeXml(
      `${nCores} cores tracked over t = ${fmt(t0)} .. ${fmt(t1)}; ` +
        `windings [${windings.join(", ")}], max quantization defect ${fmt(maxDefect)}`,
    ) +
    `</text>`;
  return {
    svg: svgDocument(W, H, panel + "\n" + caption),
    warnings,
    meta: {
      cores: nCores,
      windings: windings.join(","),
      max_defect: maxDefect,
      snapshots: probed.length,
    },
  };
}
