#!/usr/bin/env node
/**
 * qhdplot: render SVG figures from qhdlab run outputs.
 *
 *   qhdplot drift     <diag.ndjson> -o fig.svg
 *   qhdplot decay     <diag.ndjson> --quantity <name> [--fit fit.json]
 *                     [--window T0 T1] [--gamma G] [--sigma S] -o fig.svg
 *   qhdplot vortex    <diag.ndjson> [--snapshot state.qhdf] -o fig.svg
 *   qhdplot panel     <diag.ndjson> -o fig.svg
 *   qhdplot stability <report.json> -o fig.svg
 *
 * Exit codes: 0 success, 1 malformed or unusable input, 2 usage error.
 */

import { writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { readDiagnostics } from "./ndjson.js";
import { readQhdf } from "./qhdf.js";
import { readDecayFit } from "./decayfit.js";
import { driftFigure } from "./figures/drift.js";
import { decayFigure, type DecayFigureOptions } from "./figures/decay.js";
import { vortexFigure } from "./figures/vortex.js";
import { panelFigure } from "./figures/panel.js";
import { stabilityFigure, readStabilityReport } from "./figures/stability.js";
import type { FigureResult } from "./types.js";

export interface CliIO {
  out: (line: string) => void;
  err: (line: string) => void;
}

const KINDS = ["drift", "decay", "vortex", "panel", "stability"] as const;
type Kind = (typeof KINDS)[number];

const USAGE = `usage: qhdplot <kind> <input> [options] -o <out.svg>
kinds: ${KINDS.join(", ")}
options:
  -o, --out FILE        output SVG path (required)
  --quantity NAME       diagnostics column to fit (decay)
  --fit FILE            reference fit JSON to overlay (decay)
  --window T0 T1        fit window (decay; default late-time window)
  --gamma G             adiabatic exponent for the int_rho_gamma column
  --sigma S             theoretical decay rate guide line (decay)
  --snapshot FILE       QHDF density backdrop (vortex)`;

interface ParsedArgs {
  kind: Kind;
  inputs: string[];
  out?: string;
  quantity?: string;
  fit?: string;
  window?: [number, number];
  gamma?: number;
  sigma?: number;
  snapshot?: string;
}

class UsageError extends Error {}

function parseNumber(name: string, raw: string | undefined): number {
  if (raw === undefined) throw new UsageError(`option ${name} needs a value`);
  const v = Number(raw);
  if (!Number.isFinite(v)) throw new UsageError(`option ${name} needs a number, got ${raw}`);
  return v;
}

function parseArgs(argv: string[]): ParsedArgs {
  if (argv.includes("-h") || argv.includes("--help")) throw new UsageError("help");
  if (argv.length === 0) throw new UsageError("missing figure kind");
  const kind = argv[0]!;
  if (!(KINDS as readonly string[]).includes(kind)) {
    throw new UsageError(`unknown figure kind ${JSON.stringify(kind)}; kinds: ${KINDS.join(", ")}`);
  }
  const parsed: ParsedArgs = { kind: kind as Kind, inputs: [] };
  let i = 1;
  while (i < argv.length) {
    const arg = argv[i]!;
    switch (arg) {
      case "-o":
      case "--out":
        parsed.out = argv[i + 1];
        if (parsed.out === undefined) throw new UsageError("option -o needs a value");
        i += 2;
        break;
      case "--quantity":
        parsed.quantity = argv[i + 1];
        if (parsed.quantity === undefined) throw new UsageError("option --quantity needs a value");
        i += 2;
        break;
      case "--fit":
        parsed.fit = argv[i + 1];
        if (parsed.fit === undefined) throw new UsageError("option --fit needs a value");
        i += 2;
        break;
      case "--snapshot":
        parsed.snapshot = argv[i + 1];
        if (parsed.snapshot === undefined) throw new UsageError("option --snapshot needs a value");
        i += 2;
        break;
      case "--gamma":
        parsed.gamma = parseNumber("--gamma", argv[i + 1]);
        i += 2;
        break;
      case "--sigma":
        parsed.sigma = parseNumber("--sigma", argv[i + 1]);
        i += 2;
        break;
      case "--window":
        parsed.window = [
          parseNumber("--window", argv[i + 1]),
          parseNumber("--window", argv[i + 2]),
        ];
        i += 3;
        break;
      case "-h":
      case "--help":
        throw new UsageError("help");
      default:
        if (arg.startsWith("-")) throw new UsageError(`unknown option ${arg}`);
        parsed.inputs.push(arg);
        i += 1;
    }
  }
  if (parsed.inputs.length !== 1) {
    throw new UsageError(`${kind} needs exactly one input file, got ${parsed.inputs.length}`);
  }
  if (parsed.out === undefined) {
    throw new UsageError("missing required option -o <out.svg>");
  }
  return parsed;
}

function buildFigure(args: ParsedArgs): FigureResult {
  const input = args.inputs[0]!;
  switch (args.kind) {
    case "drift":
      return driftFigure(readDiagnostics(input));
    case "decay": {
      if (args.quantity === undefined) {
        throw new UsageError("decay needs --quantity <column name>");
      }
      const opts: DecayFigureOptions = {};
      if (args.window) opts.window = args.window;
      if (args.gamma !== undefined) opts.gamma = args.gamma;
      if (args.sigma !== undefined) opts.sigmaTheory = args.sigma;
      if (args.fit) opts.reference = readDecayFit(args.fit);
      return decayFigure(readDiagnostics(input), args.quantity, opts);
    }
    case "vortex": {
      const snapshot = args.snapshot ? readQhdf(args.snapshot) : undefined;
      return vortexFigure(readDiagnostics(input), snapshot);
    }
    case "panel":
      return panelFigure(readDiagnostics(input));
    case "stability":
      return stabilityFigure(readStabilityReport(input));
  }
}

/** Run the CLI; returns the process exit code. */
export function run(argv: string[], io?: CliIO): number {
  const out = io?.out ?? ((line: string) => process.stdout.write(line + "\n"));
  const err = io?.err ?? ((line: string) => process.stderr.write(line + "\n"));
  let args: ParsedArgs;
  try {
    args = parseArgs(argv);
  } catch (e) {
    if (e instanceof UsageError && e.message === "help") {
      out(USAGE);
      return 0;
    }
    err(`usage error: ${(e as Error).message}`);
    err(USAGE);
    return 2;
  }
  let fig: FigureResult;
  try {
    fig = buildFigure(args);
  } catch (e) {
    if (e instanceof UsageError) {
      err(`usage error: ${e.message}`);
      return 2;
    }
    err(`error: ${(e as Error).message}`);
    return 1;
  }
  for (const w of fig.warnings) err(`warning: ${w}`);
  try {
    writeFileSync(args.out!, fig.svg);
  } catch (e) {
    err(`error: cannot write ${args.out}: ${(e as Error).message}`);
    return 1;
  }
  out(`wrote ${args.out}`);
  return 0;
}

const isDirectRun =
  typeof process.argv[1] === "string" &&
  import.meta.url === pathToFileURL(process.argv[1]).href;

if (isDirectRun) {
  process.exitCode = run(process.argv.slice(2));
}
