/**
 * Functional panel: four panes showing the acceleration functional by both
 * routes, the dilation functional by both forms, the interaction functional,
 * and the pointwise residual norms.
 */

import { extractColumn } from "../ndjson.js";
import { renderPanel, svgDocument, fmt, escapeXml, PALETTE, type Series } from "../svg.js";
import type { DiagnosticsRow, FigureResult } from "../types.js";

function seriesOf(
  rows: DiagnosticsRow[],
  name: string,
  color: string,
  label: string,
  markers: boolean,
): Series | null {
  const { times, values } = extractColumn(rows, name);
  if (values.length === 0) return null;
  return { x: times, y: values, color, label, markers };
}

export function panelFigure(rows: DiagnosticsRow[]): FigureResult {
  if (rows.length === 0) {
    throw new Error("no diagnostics rows: cannot build a functional panel");
  }
  const warnings: string[] = [];
  if (rows.length === 1) {
    warnings.push("only one diagnostics row; panels reduce to single markers");
  }
  const marks = rows.length <= 40;
  const W = 900;
  const H = 700;
  const panes: string[] = [];
  const meta: Record<string, number | string> = {};

  const geom = [
    { x0: 70, y0: 40 },
    { x0: 520, y0: 40 },
    { x0: 70, y0: 390 },
    { x0: 520, y0: 390 },
  ];
  const pw = 360;
  const ph = 260;

  // pane 1: acceleration functional, hydrodynamic vs wave route
  {
    const a = seriesOf(rows, "I_value", PALETTE[0]!, "I (hydro route)", marks);
    const b = seriesOf(rows, "I_wave_value", PALETTE[1]!, "I (wave route)", marks);
    const series = [a, b].filter((s): s is Series => s !== null);
    if (series.length > 0) {
      panes.push(
        renderPanel({
          ...geom[0]!,
          w: pw,
          h: ph,
          title: "acceleration functional I",
          xlabel: "t",
          series,
          legend: "nw",
        }),
      );
      if (a && b) {
        let maxRel = 0;
        const bByT = new Map(b.x.map((t, i) => [t, b.y[i]!]));
        for (let i = 0; i < a.x.length; i++) {
          const other = bByT.get(a.x[i]!);
          if (other === undefined) continue;
          const denom = Math.max(Math.abs(a.y[i]!), Math.abs(other), 1e-300);
          maxRel = Math.max(maxRel, Math.abs(a.y[i]! - other) / denom);
        }
        meta["i_route_max_rel_diff"] = maxRel;
      }
    } else {
      warnings.push("acceleration functional not recorded");
    }
  }

  // pane 2: dilation functional, direct vs profile form
  {
    const a = seriesOf(rows, "V_value", PALETTE[0]!, "V (moment form)", marks);
    const b = seriesOf(rows, "V_form2_value", PALETTE[1]!, "V (profile form)", marks);
    const series = [a, b].filter((s): s is Series => s !== null);
    if (b) b.dash = "5 3";
    if (series.length > 0) {
      panes.push(
        renderPanel({
          ...geom[1]!,
          w: pw,
          h: ph,
          title: "dilation functional V",
          xlabel: "t",
          series,
          legend: "nw",
        }),
      );
    } else {
      warnings.push("dilation functional not recorded");
    }
  }

  // pane 3: interaction functional (monotone under the flow)
  {
    const a = seriesOf(rows, "H_value", PALETTE[2]!, "H", marks);
    if (a) {
      panes.push(
        renderPanel({
          ...geom[2]!,
          w: pw,
          h: ph,
          title: "interaction functional H",
          xlabel: "t",
          series: [a],
          legend: "nw",
        }),
      );
      let monotone = 1;
      for (let i = 1; i < a.y.length; i++) {
        if (a.y[i]! < a.y[i - 1]!) {
          monotone = 0;
          break;
        }
      }
      meta["h_nondecreasing"] = monotone;
      if (monotone === 0) warnings.push("interaction functional is not nondecreasing");
    } else {
      warnings.push("interaction functional not recorded");
    }
  }

  // pane 4: residual norms (log scale)
  {
    const series: Series[] = [];
    const defs: [string, string][] = [
      ["irrotationality", "irrotationality"],
      ["xi_consistency", "current consistency"],
      ["energy_flux", "energy flux"],
    ];
    defs.forEach(([name, label], i) => {
      const s = seriesOf(rows, name, PALETTE[i % PALETTE.length]!, label, marks);
      if (s) {
        // log axis: clamp exact zeros to a tiny floor so they stay visible
        s.y = s.y.map((v) => Math.max(v, 1e-17));
        series.push(s);
      }
    });
    if (series.length > 0) {
      panes.push(
        renderPanel({
          ...geom[3]!,
          w: pw,
          h: ph,
          title: "residual norms",
          xlabel: "t",
          ylog: true,
          series,
          legend: "sw",
        }),
      );
    } else {
      warnings.push("no residual norms recorded");
    }
  }

  if (panes.length === 0) {
    throw new Error("no functional columns recorded: nothing to draw");
  }
  const t1 = rows[rows.length - 1]!.t;
  const caption =
    `<text x="${W / 2}" y="${H - 14}" text-anchor="middle" class="caption">` +
    escapeXml(`functionals over t = ${fmt(rows[0]!.t)} .. ${fmt(t1)} (${rows.length} snapshots)`) +
    `</text>`;
  meta["snapshots"] = rows.length;
  return { svg: svgDocument(W, H, panes.join("\n") + "\n" + caption), warnings, meta };
}
