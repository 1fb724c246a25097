#!/usr/bin/env python3
"""Produce the serialized artifacts the figure package consumes in its tests:
reduced but genuine runs of every kind, written through the public formats
(NDJSON diagnostics, QHDF snapshots, fit and stability reports).

Everything here is deterministic, so the exported bytes are reproducible.
Default output directory: frontend/fixtures (a few minutes to generate; the
decay fixture is a full production dispersion run).
"""
import argparse
import os
import shutil
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from qhdlab import ComplexField, Grid, ScalarField, VectorField
from qhdlab.estimates import decay_fit, sigma_exponent
from qhdlab.evolve import SolverConfig, evolve
from qhdlab.functionals import diagnostics_record
from qhdlab.polar import HydroFields
from qhdlab.runner import run_scenario, stability_experiment
from qhdlab.snapshots import write_ndjson

VORTEX_CFG = """\
name = vortex-fixture
recipe = vortex-pair
dim = 2
n = 64
length = 20.0
gamma = 2.0
dt = 1e-3
t_end = 0.2
snapshot_stride = 100
amplitude = 0.8
core_width = 1.0
vortex_1 = -2.5, 0.0, 1
vortex_2 = 2.5, 0.0, -1
track_vortices = true
morawetz_every = 1
morawetz_subsample = 24
"""

CONSERVATION_CFG = """\
name = conservation-fixture
recipe = gaussian
dim = 2
n = 64
length = 20.0
gamma = 2.0
dt = 1e-3
t_end = 0.5
snapshot_stride = 50
amplitude = 0.6
width = 1.2
floor = 0.4
morawetz_every = 1
morawetz_subsample = 24
"""


def scenario_fixture(outdir: str, text: str) -> None:
    if os.path.isdir(outdir):
        shutil.rmtree(outdir)
    os.makedirs(outdir, exist_ok=True)
    cfg = os.path.join(outdir, "scenario.cfg")
    with open(cfg, "w", encoding="utf-8") as fh:
        fh.write(text)
    status = run_scenario(cfg, outdir=outdir, force=True)
    if status != 0:
        raise SystemExit(f"fixture scenario in {outdir} failed with status {status}")


def decay_fixture(outdir: str) -> None:
    # the production long-horizon dispersion run (same protocol as
    # run_decay_study's defocusing leg)
    os.makedirs(outdir, exist_ok=True)
    grid = Grid(dim=2, n=512, length=240.0)
    rsq = np.zeros(grid.shape)
    for x in grid.coords:
        rsq = rsq + x**2
    psi0 = ComplexField(grid, (0.8 * np.exp(-rsq / 8.0)).astype(complex))
    cfg = SolverConfig(gamma=2.0, dt=1e-2, t_end=50.0, snapshot_stride=100)
    records = []

    def observer(t, psi):
        records.append(diagnostics_record(psi, t, cfg.gamma))

    evolve(psi0, cfg, observers=(observer,), store_states=False)
    write_ndjson(os.path.join(outdir, "diag.ndjson"), records)

    times = np.array([r.t for r in records])
    grads = np.sqrt(2.0 * np.array([r.quantum for r in records]))
    fit = decay_fit(
        times, grads, "grad_sqrt_rho", (5.0, 50.0), sigma_exponent(2, 2.0)
    )
    with open(os.path.join(outdir, "fit_grad_sqrt_rho.json"), "w", encoding="utf-8") as fh:
        fh.write(fit.to_json())
        fh.write("\n")


def stability_fixture(outdir: str) -> None:
    os.makedirs(outdir, exist_ok=True)
    grid = Grid(dim=2, n=32, length=20.0)
    rsq = np.zeros(grid.shape)
    for x in grid.coords:
        rsq = rsq + x**2
    s = 0.3 + 0.8 * np.exp(-rsq / (2.0 * 1.2**2))
    h = HydroFields.create(
        ScalarField(grid, s), VectorField(grid, np.zeros((2,) + grid.shape))
    )
    cfg = SolverConfig(gamma=2.0, dt=2e-3, t_end=0.2, snapshot_stride=25)
    report = stability_experiment(h, (10, 100), cfg)
    with open(os.path.join(outdir, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
        fh.write("\n")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--out",
        default=os.path.join(os.path.dirname(__file__), "..", "frontend", "fixtures"),
    )
    args = ap.parse_args()
    out = os.path.abspath(args.out)

    print("decay fixture (the slow one) ...")
    decay_fixture(os.path.join(out, "decay"))
    print("vortex fixture ...")
    scenario_fixture(os.path.join(out, "vortex"), VORTEX_CFG)
    print("conservation fixture ...")
    scenario_fixture(os.path.join(out, "conservation"), CONSERVATION_CFG)
    print("stability fixture ...")
    stability_fixture(os.path.join(out, "stability"))
    print(f"fixtures written under {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
