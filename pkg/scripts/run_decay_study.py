#!/usr/bin/env python3
"""Long-horizon dispersion study on large boxes.

Two legs, each writing an NDJSON diagnostics stream and power-law fits:

  free        pressure disabled on a 400-box; the gradient norm must decay
              like t^-1 (the exact free rate).
  defocusing  gamma = 2 on a 240-box; one-sided bounds from the dispersion
              theory: gradient norm <= t^(-sigma + 0.15), pressure integral
              <= t^(-2 sigma + 0.3), with sigma = min(1, d (gamma - 1) / 2).

Outputs per leg: <out>/<leg>/diag.ndjson plus fit_<quantity>.json files.
The defocusing leg takes a few minutes at the default resolution.
"""
import argparse
import json
import math
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from qhdlab import ComplexField, Grid
from qhdlab.estimates import decay_fit, decay_passes, sigma_exponent
from qhdlab.evolve import SolverConfig, evolve
from qhdlab.functionals import diagnostics_record
from qhdlab.snapshots import write_ndjson


def gaussian(grid: Grid, amplitude: float, width: float) -> ComplexField:
    rsq = np.zeros(grid.shape)
    for x in grid.coords:
        rsq = rsq + x**2
    return ComplexField(grid, (amplitude * np.exp(-rsq / (2.0 * width**2))).astype(complex))


def run_leg(outdir, grid, psi0, cfg, window, sigma):
    os.makedirs(outdir, exist_ok=True)
    records = []

    def observer(t, psi):
        records.append(
            diagnostics_record(psi, t, cfg.gamma, pressure_enabled=cfg.pressure_enabled)
        )

    evolve(psi0, cfg, observers=(observer,), store_states=False)
    write_ndjson(os.path.join(outdir, "diag.ndjson"), records)

    times = np.array([r.t for r in records])
    series = {
        # quantum = (1/2) int |grad sqrt_rho|^2, so the norm is sqrt(2 quantum)
        "grad_sqrt_rho": np.sqrt(2.0 * np.array([r.quantum for r in records])),
        # internal = int rho^gamma / gamma
        "int_rho_gamma": cfg.gamma * np.array([r.internal for r in records]),
    }
    fits = {}
    for name, values in series.items():
        fit = decay_fit(times, values, name, window, sigma)
        fits[name] = fit
        with open(os.path.join(outdir, f"fit_{name}.json"), "w", encoding="utf-8") as fh:
            fh.write(fit.to_json())
            fh.write("\n")
    return fits


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs/decay")
    ap.add_argument("--t-end", type=float, default=50.0)
    ap.add_argument("--n-free", type=int, default=1024)
    ap.add_argument("--n-defocusing", type=int, default=512)
    ap.add_argument("--skip-free", action="store_true")
    ap.add_argument("--skip-defocusing", action="store_true")
    args = ap.parse_args()

    window = (5.0, args.t_end)
    sigma = sigma_exponent(2, 2.0)
    status = 0

    if not args.skip_free:
        g = Grid(dim=2, n=args.n_free, length=400.0)
        cfg = SolverConfig(
            gamma=2.0,
            dt=0.5,
            t_end=args.t_end,
            snapshot_stride=2,
            pressure_enabled=False,
        )
        fits = run_leg(
            os.path.join(args.out, "free"), g, gaussian(g, 0.8, 1.0), cfg, window, sigma
        )
        p = fits["grad_sqrt_rho"].exponent
        ok = abs(p + 1.0) <= 0.02
        status |= 0 if ok else 1
        print(f"free: grad_sqrt_rho ~ t^{p:.4f} (exact rate -1) {'ok' if ok else 'VIOLATION'}")

    if not args.skip_defocusing:
        g = Grid(dim=2, n=args.n_defocusing, length=240.0)
        cfg = SolverConfig(gamma=2.0, dt=1e-2, t_end=args.t_end, snapshot_stride=100)
        fits = run_leg(
            os.path.join(args.out, "defocusing"),
            g,
            gaussian(g, 0.8, 2.0),
            cfg,
            window,
            sigma,
        )
        for name, multiple, slack in (
            ("grad_sqrt_rho", 1.0, 0.15),
            ("int_rho_gamma", 2.0, 0.3),
        ):
            fit = fits[name]
            ok = decay_passes(fit, multiple=multiple, slack=slack)
            status |= 0 if ok else 1
            print(
                f"defocusing: {name} ~ t^{fit.exponent:.4f} "
                f"(bound {-multiple * sigma + slack:+.2f}) {'ok' if ok else 'VIOLATION'}"
            )

    return status


if __name__ == "__main__":
    raise SystemExit(main())
