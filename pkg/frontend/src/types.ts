/** Shared data shapes for the qhdlab on-disk formats. */

/** One circulation probe: loop integral of the velocity around a density minimum. */
export interface CirculationEntry {
  /** Loop centre [x, y] in box coordinates. */
  x: [number, number];
  /** Declared winding of the probe. */
  k: number;
  /** Raw loop integral. */
  raw: number;
  /** Nearest-integer winding measured from the loop integral. */
  winding: number;
  /** |raw / 2pi - winding|. */
  defect: number;
}

/** One line of diag.ndjson: the full diagnostics record at a snapshot time. */
export interface DiagnosticsRow {
  t: number;
  mass: number;
  energy: number;
  kinetic: number;
  quantum: number;
  internal: number;
  I_value: number;
  I_wave_value: number;
  V_value: number | null;
  V_form2_value: number | null;
  H_value: number | null;
  morawetz_norms: { pressure_norm: number; capillary_norm: number } | null;
  circulation: CirculationEntry[] | null;
  residuals: {
    irrotationality: number | null;
    xi_consistency: number | null;
    energy_flux: number | null;
  };
  variance: number | null;
}

/** Power-law fit summary as written by the Python decay-fit tool. */
export interface DecayFit {
  quantity: string;
  t0: number;
  t1: number;
  exponent: number;
  residual_95: number;
  sigma_theory: number;
  samples: number;
}

/** Regularization-ladder experiment report. */
export interface StabilityReport {
  ladder: number[];
  times: number[];
  loc_fraction: number;
  reference: string;
  sqrt_rho_distances: number[][];
  Lambda_distances: number[][];
  orders_sqrt_rho: number[];
  orders_Lambda: number[];
}

/** Decoded QHDF field snapshot. */
export interface QhdfField {
  version: number;
  /** Spatial dimension (Cartesian) or ambient dimension (radial). */
  dim: number;
  /** Nodes per axis (Cartesian) or number of radial nodes. */
  n: number;
  /** Box side length (Cartesian) or r_max (radial). */
  extent: number;
  kind: "cartesian-periodic" | "radial";
  /** Components per node: 1 for scalar/complex data, dim for vectors. */
  ncomp: number;
  complex: boolean;
  /**
   * Samples in row-major node order. Real data: n^dim * ncomp values with
   * components interleaved per node. Complex data: (re, im) pairs, so
   * 2 * n^dim values.
   */
  data: Float64Array;
}

/** A figure plus side-channel information for captions and tests. */
export interface FigureResult {
  svg: string;
  /** Non-fatal conditions encountered while building the figure. */
  warnings: string[];
  /** Figure-specific numbers surfaced for verification (e.g. fitted slope). */
  meta: Record<string, number | string>;
}
