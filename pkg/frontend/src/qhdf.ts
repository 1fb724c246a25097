/**
 * Reader for QHDF field snapshots.
 *
 * Layout, all little-endian, no padding:
 *
 *   magic   4 bytes  "QHDF"
 *   version u32      currently 1
 *   dim     u32      Cartesian spatial dimension, or ambient d for radial
 *   n       u32      nodes per axis (Cartesian) or n_r (radial)
 *   extent  f64      box side L (Cartesian) or r_max (radial)
 *   kind    u32      0 = cartesian-periodic, 1 = radial
 *   ncomp   u32      1 for scalar/complex, dim for vector
 *   cplx    u32      1 when samples are complex, else 0
 *
 * followed by float64 samples in row-major node order; vector components
 * interleaved per node, complex samples stored as (re, im) pairs.
 */

import { readFileSync } from "node:fs";
import type { QhdfField } from "./types.js";

const MAGIC = "QHDF";
const VERSION = 1;
const HEADER_BYTES = 4 + 4 + 4 + 4 + 8 + 4 + 4 + 4; // 36

/** Decode one QHDF buffer. `label` names the source in error messages. */
export function parseQhdf(buf: Uint8Array, label: string): QhdfField {
  if (buf.byteLength < HEADER_BYTES) {
    throw new Error(`${label}: not a QHDF file`);
  }
  const magic = String.fromCharCode(buf[0]!, buf[1]!, buf[2]!, buf[3]!);
  if (magic !== MAGIC) {
    throw new Error(`${label}: not a QHDF file`);
  }
  const dv = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  const version = dv.getUint32(4, true);
  if (version !== VERSION) {
    throw new Error(`${label}: unsupported QHDF version ${version}`);
  }
  const dim = dv.getUint32(8, true);
  const n = dv.getUint32(12, true);
  const extent = dv.getFloat64(16, true);
  const kindCode = dv.getUint32(24, true);
  const ncomp = dv.getUint32(28, true);
  const cplx = dv.getUint32(32, true);
  let kind: QhdfField["kind"];
  let nodes: number;
  if (kindCode === 0) {
    kind = "cartesian-periodic";
    nodes = n ** dim;
  } else if (kindCode === 1) {
    kind = "radial";
    nodes = n;
  } else {
    throw new Error(`${label}: unknown grid kind ${kindCode}`);
  }
  const scalars = nodes * ncomp * (cplx ? 2 : 1);
  const bodyBytes = buf.byteLength - HEADER_BYTES;
  if (bodyBytes !== scalars * 8) {
    throw new Error(
      `${label}: expected ${nodes * ncomp} samples, found ${Math.floor(bodyBytes / (cplx ? 16 : 8))}`,
    );
  }
  const data = new Float64Array(scalars);
  for (let i = 0; i < scalars; i++) {
    data[i] = dv.getFloat64(HEADER_BYTES + 8 * i, true);
  }
  return { version, dim, n, extent, kind, ncomp, complex: cplx === 1, data };
}

/** Read and decode a QHDF file from disk. */
export function readQhdf(path: string): QhdfField {
  let buf: Buffer;
  try {
    buf = readFileSync(path);
  } catch (err) {
    throw new Error(`${path}: cannot read file: ${(err as Error).message}`);
  }
  return parseQhdf(buf, path);
}

/**
 * Pointwise density |psi|^2 of a complex Cartesian snapshot, row-major,
 * plus the grid geometry needed to draw it.
 */
export function densityImage(field: QhdfField): {
  n: number;
  length: number;
  rho: Float64Array;
} {
  if (field.kind !== "cartesian-periodic" || field.dim !== 2) {
    throw new Error("density image needs a two-dimensional Cartesian snapshot");
  }
  if (!field.complex || field.ncomp !== 1) {
    throw new Error("density image needs a complex scalar snapshot");
  }
  const nodes = field.n * field.n;
  const rho = new Float64Array(nodes);
  for (let i = 0; i < nodes; i++) {
    const re = field.data[2 * i]!;
    const im = field.data[2 * i + 1]!;
    rho[i] = re * re + im * im;
  }
  return { n: field.n, length: field.extent, rho };
}
