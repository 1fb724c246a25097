/** Reader for diag.ndjson: one JSON diagnostics record per line. */

import { readFileSync } from "node:fs";
import type { DiagnosticsRow } from "./types.js";

const NUMERIC_KEYS = [
  "t",
  "mass",
  "energy",
  "kinetic",
  "quantum",
  "internal",
  "I_value",
  "I_wave_value",
] as const;

const NULLABLE_KEYS = [
  "V_value",
  "V_form2_value",
  "H_value",
  "variance",
] as const;

function isFiniteNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

function checkRow(obj: Record<string, unknown>): string | null {
  for (const key of NUMERIC_KEYS) {
    if (!isFiniteNumber(obj[key])) {
      return `field ${key} must be a finite number`;
    }
  }
  for (const key of NULLABLE_KEYS) {
    const v = obj[key];
    if (v !== null && v !== undefined && !isFiniteNumber(v)) {
      return `field ${key} must be a finite number or null`;
    }
  }
  const circ = obj["circulation"];
  if (circ !== undefined && circ !== null && !Array.isArray(circ)) {
    return "field circulation must be an array or null";
  }
  return null;
}

/**
 * Parse a diag.ndjson file. Raises on any malformed line, naming the file
 * and 1-based line number.
 */
export function readDiagnostics(path: string): DiagnosticsRow[] {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new Error(`${path}: cannot read file: ${(err as Error).message}`);
  }
  const rows: DiagnosticsRow[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = (lines[i] ?? "").trim();
    if (line === "") continue;
    let obj: unknown;
    try {
      obj = JSON.parse(line);
    } catch (err) {
      throw new Error(
        `${path}:${i + 1}: malformed NDJSON record: ${(err as Error).message}`,
      );
    }
    if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
      throw new Error(`${path}:${i + 1}: malformed NDJSON record: not an object`);
    }
    const why = checkRow(obj as Record<string, unknown>);
    if (why !== null) {
      throw new Error(`${path}:${i + 1}: malformed NDJSON record: ${why}`);
    }
    rows.push(obj as unknown as DiagnosticsRow);
  }
  return rows;
}

/** Extraction options for derived columns. */
export interface ColumnOptions {
  /** Adiabatic exponent, needed only for the int_rho_gamma column. */
  gamma?: number;
}

type Extractor = (row: DiagnosticsRow, opts: ColumnOptions) => number | null;

const DIRECT: Record<string, Extractor> = {
  t: (r) => r.t,
  mass: (r) => r.mass,
  energy: (r) => r.energy,
  kinetic: (r) => r.kinetic,
  quantum: (r) => r.quantum,
  internal: (r) => r.internal,
  I_value: (r) => r.I_value,
  I_wave_value: (r) => r.I_wave_value,
  V_value: (r) => r.V_value,
  V_form2_value: (r) => r.V_form2_value,
  H_value: (r) => r.H_value,
  variance: (r) => r.variance,
  pressure_norm: (r) => r.morawetz_norms?.pressure_norm ?? null,
  capillary_norm: (r) => r.morawetz_norms?.capillary_norm ?? null,
  irrotationality: (r) => r.residuals?.irrotationality ?? null,
  xi_consistency: (r) => r.residuals?.xi_consistency ?? null,
  energy_flux: (r) => r.residuals?.energy_flux ?? null,
  grad_sqrt_rho: (r) => Math.sqrt(2.0 * r.quantum),
  int_rho_gamma: (r, opts) => {
    if (opts.gamma === undefined) {
      throw new Error(
        "column int_rho_gamma is gamma * internal; pass the run's gamma (--gamma)",
      );
    }
    return opts.gamma * r.internal;
  },
};

/** Names accepted by extractColumn, for error messages and CLI help. */
export function availableColumns(): string[] {
  return Object.keys(DIRECT);
}

/**
 * Pull one named column out of the rows as parallel (times, values) arrays.
 * Rows where the column is null are skipped and counted.
 */
export function extractColumn(
  rows: DiagnosticsRow[],
  name: string,
  opts: ColumnOptions = {},
): { times: number[]; values: number[]; skipped: number } {
  const fn = DIRECT[name];
  if (fn === undefined) {
    throw new Error(
      `unknown quantity ${JSON.stringify(name)}; available columns: ${availableColumns().join(", ")}`,
    );
  }
  const times: number[] = [];
  const values: number[] = [];
  let skipped = 0;
  for (const row of rows) {
    const v = fn(row, opts);
    if (v === null || v === undefined) {
      skipped += 1;
      continue;
    }
    times.push(row.t);
    values.push(v);
  }
  return { times, values, skipped };
}
