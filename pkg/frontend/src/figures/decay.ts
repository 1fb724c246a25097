/**
 * Log-log decay figure: one diagnostics column against time, with the
 * least-squares power-law fit drawn over its window and the fitted slope
 * embedded in the caption (full precision in the data-exponent attribute).
 */

import { extractColumn, type ColumnOptions } from "../ndjson.js";
import { logLogFit, defaultWindow } from "../fit.js";
import { renderPanel, svgDocument, fmt, escapeXml, PALETTE, type Series } from "../svg.js";
import type { DiagnosticsRow, DecayFit, FigureResult } from "../types.js";

export interface DecayFigureOptions extends ColumnOptions {
  /** Fit window [t0, t1]; default is the late-time window of the run. */
  window?: [number, number];
  /** Reference fit (e.g. produced by the Python pipeline) to overlay. */
  reference?: DecayFit;
  /** Theoretical decay rate sigma; drawn as a guide slope when given. */
  sigmaTheory?: number;
}

export function decayFigure(
  rows: DiagnosticsRow[],
  quantity: string,
  opts: DecayFigureOptions = {},
): FigureResult {
  if (rows.length === 0) {
    throw new Error("no diagnostics rows: cannot build a decay figure");
  }
  const warnings: string[] = [];
  const { times, values, skipped } = extractColumn(rows, quantity, opts);
  if (skipped > 0) {
    warnings.push(`${skipped} rows had no ${quantity} value and were skipped`);
  }
  if (times.length === 0) {
    throw new Error(`column ${quantity} has no values in this file`);
  }
  const tEnd = times[times.length - 1]!;
  const [t0, t1] = opts.window ?? defaultWindow(tEnd);
  const fit = logLogFit(times, values, t0, t1, quantity);

  const fitX = [t0, t1];
  const fitY = fitX.map((t) => Math.exp(fit.intercept + fit.exponent * Math.log(t)));
  const series: Series[] = [
    {
      x: times,
      y: values,
      color: PALETTE[0]!,
      label: quantity,
      markers: times.length <= 80,
    },
    {
      x: fitX,
      y: fitY,
      color: PALETTE[1]!,
      label: `fit slope ${fmt(fit.exponent)}`,
      width: 2.0,
    },
  ];
  const meta: Record<string, number | string> = {
    exponent: fit.exponent,
    residual_95: fit.residual95,
    samples: fit.samples,
    t0,
    t1,
  };
  if (opts.reference) {
    const ref = opts.reference;
    const tm = Math.exp(0.5 * (Math.log(t0) + Math.log(t1)));
    // anchor the reference slope on the fitted line's midpoint value
    const vm = Math.exp(fit.intercept + fit.exponent * Math.log(tm));
    const refY = fitX.map((t) => vm * (t / tm) ** ref.exponent);
    series.push({
      x: fitX,
      y: refY,
      color: PALETTE[2]!,
      label: `reference slope ${fmt(ref.exponent)}`,
      width: 1.4,
      dash: "6 3",
    });
    meta["reference_exponent"] = ref.exponent;
    meta["exponent_vs_reference"] = Math.abs(fit.exponent - ref.exponent);
  }
  if (opts.sigmaTheory !== undefined) {
    const tm = Math.exp(0.5 * (Math.log(t0) + Math.log(t1)));
    const vm = Math.exp(fit.intercept + fit.exponent * Math.log(tm));
    const thY = fitX.map((t) => vm * (t / tm) ** -opts.sigmaTheory!);
    series.push({
      x: fitX,
      y: thY,
      color: "#888",
      label: `theory slope ${fmt(-opts.sigmaTheory)}`,
      width: 1.2,
      dash: "2 3",
    });
    meta["sigma_theory"] = opts.sigmaTheory;
  }

  const W = 640;
  const H = 486;
  const panel = renderPanel({
    x0: 66,
    y0: 36,
    w: 548,
    h: 336,
    title: `decay of ${quantity}`,
    xlabel: "t",
    ylabel: quantity,
    xlog: true,
    ylog: true,
    series,
    legend: "sw",
  });
  const capLines = [
    `${quantity} ~ t^p on [${fmt(t0)}, ${fmt(t1)}]: slope p = ${fmt(fit.exponent)} ` +
      `(95% band +/- ${fmt(fit.residual95)}, ${fit.samples} samples)`,
  ];
  if (opts.reference) {
    const d = meta["exponent_vs_reference"] as number;
    capLines.push(
      `reference fit: slope ${fmt(opts.reference.exponent)} on [${fmt(opts.reference.t0)}, ${fmt(opts.reference.t1)}]; |difference| = ${fmt(d)}`,
    );
  }
  const caption = capLines
    .map(
      (line, i) =>
        `<text x="${W / 2}" y="${H - 30 + 16 * i}" text-anchor="middle" class="caption"` +
        (i === 0 ? ` data-exponent="${String(fit.exponent)}"` : "") +
        `>${escapeXml(line)}</text>`,
    )
    .join("\n");
  return { svg: svgDocument(W, H, panel + "\n" + caption), warnings, meta };
}
