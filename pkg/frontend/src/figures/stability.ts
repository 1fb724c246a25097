/**
 * Regularization-ladder figure: distance of each regularized trajectory
 * from the reference, against the ladder parameter (log-log, with the
 * estimated convergence orders) and against time.
 */

import { readFileSync } from "node:fs";
import { renderPanel, svgDocument, fmt, escapeXml, PALETTE, type Series } from "../svg.js";
import type { StabilityReport, FigureResult } from "../types.js";

export function readStabilityReport(path: string): StabilityReport {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new Error(`${path}: cannot read file: ${(err as Error).message}`);
  }
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch (err) {
    throw new Error(`${path}: malformed stability report: ${(err as Error).message}`);
  }
  const rec = obj as Record<string, unknown>;
  if (
    typeof rec !== "object" ||
    rec === null ||
    !Array.isArray(rec["ladder"]) ||
    !Array.isArray(rec["times"]) ||
    !Array.isArray(rec["sqrt_rho_distances"]) ||
    !Array.isArray(rec["Lambda_distances"])
  ) {
    throw new Error(
      `${path}: malformed stability report: needs ladder, times, sqrt_rho_distances, Lambda_distances`,
    );
  }
  if ((rec["ladder"] as unknown[]).length !== (rec["sqrt_rho_distances"] as unknown[]).length) {
    throw new Error(`${path}: malformed stability report: one distance row per ladder rung required`);
  }
  return rec as unknown as StabilityReport;
}

export function stabilityFigure(report: StabilityReport): FigureResult {
  const { ladder, times } = report;
  if (ladder.length === 0 || times.length === 0) {
    throw new Error("empty stability report: nothing to draw");
  }
  const warnings: string[] = [];
  const finalS = report.sqrt_rho_distances.map((row) => row[row.length - 1]!);
  const finalL = report.Lambda_distances.map((row) => row[row.length - 1]!);

  const W = 900;
  const H = 430;
  const panes: string[] = [];

  // pane 1: final-time distance against the ladder parameter
  {
    const series: Series[] = [
      { x: ladder, y: finalS, color: PALETTE[0]!, label: "sqrt_rho distance", markers: true },
      { x: ladder, y: finalL, color: PALETTE[1]!, label: "Lambda distance", markers: true },
    ];
    panes.push(
      renderPanel({
        x0: 70,
        y0: 40,
        w: 350,
        h: 300,
        title: `distance to ${report.reference} reference at t = ${fmt(times[times.length - 1]!)}`,
        xlabel: "ladder parameter n",
        ylabel: "distance",
        xlog: true,
        ylog: true,
        series,
        legend: "sw",
      }),
    );
  }

  // pane 2: distance against time, one line per rung
  {
    const series: Series[] = [];
    report.sqrt_rho_distances.forEach((row, i) => {
      series.push({
        x: times,
        y: row.map((v) => Math.max(v, 1e-17)),
        color: PALETTE[i % PALETTE.length]!,
        label: `n = ${ladder[i]}`,
        markers: times.length <= 30,
      });
    });
    panes.push(
      renderPanel({
        x0: 520,
        y0: 40,
        w: 350,
        h: 300,
        title: "sqrt_rho distance over time",
        xlabel: "t",
        ylabel: "distance",
        ylog: true,
        series,
        legend: "sw",
      }),
    );
  }

  const ordS = report.orders_sqrt_rho.map(fmt).join(", ");
  const ordL = report.orders_Lambda.map(fmt).join(", ");
  const caption =
    `<text x="${W / 2}" y="${H - 18}" text-anchor="middle" class="caption">` +
    escapeXml(
      `ladder [${ladder.join(", ")}]; convergence orders: sqrt_rho [${ordS}], Lambda [${ordL}]; ` +
        `localized fraction ${fmt(report.loc_fraction)}`,
    ) +
    `</text>`;
  const meta: Record<string, number | string> = {
    rungs: ladder.length,
    reference: report.reference,
  };
  if (report.orders_sqrt_rho.length > 0) {
    meta["order_sqrt_rho_last"] = report.orders_sqrt_rho[report.orders_sqrt_rho.length - 1]!;
  }
  if (report.orders_Lambda.length > 0) {
    meta["order_Lambda_last"] = report.orders_Lambda[report.orders_Lambda.length - 1]!;
  }
  return { svg: svgDocument(W, H, panes.join("\n") + "\n" + caption), warnings, meta };
}
