/** Reader for decay-fit JSON summaries. */

import { readFileSync } from "node:fs";
import type { DecayFit } from "./types.js";

const NUMBER_FIELDS = ["t0", "t1", "exponent", "residual_95", "sigma_theory"] as const;

/** Read and validate a DecayFit JSON file. */
export function readDecayFit(path: string): DecayFit {
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
    throw new Error(`${path}: malformed fit JSON: ${(err as Error).message}`);
  }
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    throw new Error(`${path}: malformed fit JSON: not an object`);
  }
  const rec = obj as Record<string, unknown>;
  if (typeof rec["quantity"] !== "string") {
    throw new Error(`${path}: malformed fit JSON: field quantity must be a string`);
  }
  for (const key of NUMBER_FIELDS) {
    if (typeof rec[key] !== "number" || !Number.isFinite(rec[key] as number)) {
      throw new Error(`${path}: malformed fit JSON: field ${key} must be a finite number`);
    }
  }
  if (typeof rec["samples"] !== "number" || !Number.isInteger(rec["samples"])) {
    throw new Error(`${path}: malformed fit JSON: field samples must be an integer`);
  }
  return rec as unknown as DecayFit;
}
