/**
 * Power-law fits in log-log coordinates.
 *
 * The slope solves the same least-squares problem as the Python pipeline
 * (ordinary least squares of log(value) on log(t) over a window), computed
 * here in centered form so the two routes agree to well below 1e-10 for
 * any sanely conditioned window.
 */

export interface WindowFit {
  /** Fitted power-law exponent (slope in log-log coordinates). */
  exponent: number;
  /** Intercept in log-log coordinates (log of the prefactor). */
  intercept: number;
  /** Half-width of the 95% confidence band on the exponent. */
  residual95: number;
  /** Number of samples inside the window. */
  samples: number;
  t0: number;
  t1: number;
}

/**
 * Fit values ~ C t^p on [t0, t1]. Requires t0 >= 1, all values in the
 * window strictly positive, and at least 10 samples.
 */
export function logLogFit(
  times: readonly number[],
  values: readonly number[],
  t0: number,
  t1: number,
  quantity = "series",
): WindowFit {
  if (times.length !== values.length) {
    throw new Error(`${quantity}: times and values must have equal length`);
  }
  if (t0 < 1.0) {
    throw new Error(`${quantity}: fit window must start at t0 >= 1 (log-log fit)`);
  }
  const x: number[] = [];
  const y: number[] = [];
  for (let i = 0; i < times.length; i++) {
    const t = times[i]!;
    const v = values[i]!;
    if (t < t0 || t > t1) continue;
    if (!(v > 0.0)) {
      throw new Error(`${quantity}: nonpositive values in the fit window`);
    }
    x.push(Math.log(t));
    y.push(Math.log(v));
  }
  const m = x.length;
  if (m < 10) {
    throw new Error(`${quantity}: only ${m} samples in window [${t0}, ${t1}]`);
  }
  let xbar = 0;
  let ybar = 0;
  for (let i = 0; i < m; i++) {
    xbar += x[i]!;
    ybar += y[i]!;
  }
  xbar /= m;
  ybar /= m;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < m; i++) {
    const dx = x[i]! - xbar;
    sxx += dx * dx;
    sxy += dx * (y[i]! - ybar);
  }
  const slope = sxy / sxx;
  const intercept = ybar - slope * xbar;
  let ss = 0;
  for (let i = 0; i < m; i++) {
    const r = y[i]! - (slope * x[i]! + intercept);
    ss += r * r;
  }
  const dof = Math.max(m - 2, 1);
  const stderr = Math.sqrt(ss / dof / sxx);
  return {
    exponent: slope,
    intercept,
    residual95: 1.96 * stderr,
    samples: m,
    t0,
    t1,
  };
}

/** Late-time default fit window [max(5, t_end/10), 0.8 t_end]. */
export function defaultWindow(tEnd: number): [number, number] {
  return [Math.max(5.0, tEnd / 10.0), 0.8 * tEnd];
}
