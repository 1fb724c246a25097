"""Command-line entry points.

Exit codes: 0 success, 1 compute error, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import ConfigError, QhdError
from .estimates import decay_fit, sigma_exponent
from .snapshots import read_field, read_ndjson, write_field


def _cmd_lift(args) -> int:
    """Read (sqrt_rho, Lambda) snapshots, lift, write the wave function."""
    from .grids import Grid
    from .lifting import lift_positive, lift_radial, lift_vortices
    from .polar import HydroFields, RadialHydro
    from .vortex_phase import VortexSet

    from .grids import ScalarField, VectorField

    sqrt_rho = read_field(args.sqrt_rho)
    Lambda = read_field(args.Lambda)
    if not isinstance(sqrt_rho, ScalarField):
        print("sqrt_rho input must be a scalar field", file=sys.stderr)
        return 2
    if isinstance(sqrt_rho.grid, Grid):
        if not isinstance(Lambda, VectorField):
            print("Lambda input must be a vector field", file=sys.stderr)
            return 2
        h = HydroFields.create(sqrt_rho, Lambda)
        if args.vortex:
            positions = np.array([[v[0], v[1]] for v in args.vortex])
            windings = np.array([int(v[2]) for v in args.vortex])
            alpha = args.alpha if args.alpha else sqrt_rho.grid.length / 8.0
            psi = lift_vortices(h, VortexSet(positions, windings, alpha))
        else:
            psi = lift_positive(h)
    else:
        if not isinstance(Lambda, ScalarField):
            print("radial Lambda input must be a scalar field", file=sys.stderr)
            return 2
        h = RadialHydro.create(sqrt_rho, Lambda)
        psi = lift_radial(h, args.n_reg)
    write_field(args.output, psi)
    print(f"wrote {args.output}")
    return 0


def _cmd_evolve(args) -> int:
    from .evolve import SolverConfig, evolve
    from .grids import ComplexField

    psi0 = read_field(args.input)
    if not isinstance(psi0, ComplexField):
        print("evolve needs a complex wave-function snapshot", file=sys.stderr)
        return 2
    config = SolverConfig(
        gamma=args.gamma,
        dt=args.dt,
        t_end=args.t_end,
        snapshot_stride=args.stride,
        pressure_enabled=not args.pressure_off,
    )
    traj = evolve(psi0, config)
    write_field(args.output, traj.states[-1])
    print(f"wrote {args.output} at t = {traj.times[-1]:g}")
    return 0


def _cmd_diagnose(args) -> int:
    from .functionals import diagnostics_record
    from .grids import ComplexField
    from .snapshots import write_ndjson

    psi = read_field(args.input)
    if not isinstance(psi, ComplexField):
        print("diagnose needs a complex wave-function snapshot", file=sys.stderr)
        return 2
    rec = diagnostics_record(psi, args.t, args.gamma)
    if args.output:
        write_ndjson(args.output, [rec])
        print(f"wrote {args.output}")
    else:
        from .snapshots import _jsonable

        json.dump(_jsonable(rec), sys.stdout, indent=2)
        print()
    return 0


def _record_value(rec: dict, path: str):
    """Fetch a possibly nested (dot-separated) value from one NDJSON record."""
    cur = rec
    for part in path.split("."):
        if not isinstance(cur, dict) or part not in cur:
            return None
        cur = cur[part]
    return cur


#: Quantities derived algebraically from stored record fields.
_DERIVED_QUANTITIES = ("grad_sqrt_rho", "int_rho_gamma")


def _cmd_decay_fit(args) -> int:
    records = read_ndjson(args.diag)
    quantity = args.quantity
    if quantity == "int_rho_gamma" and args.gamma is None:
        print("quantity 'int_rho_gamma' needs --gamma", file=sys.stderr)
        return 2
    pairs = []
    for rec in records:
        if quantity == "grad_sqrt_rho":
            quantum = rec.get("quantum")
            value = None if quantum is None else float(np.sqrt(max(2.0 * quantum, 0.0)))
        elif quantity == "int_rho_gamma":
            internal = rec.get("internal")
            value = None if internal is None else args.gamma * internal
        else:
            value = _record_value(rec, quantity)
        if value is None:
            continue
        pairs.append((rec["t"], value))
    if not pairs:
        have = sorted(set().union(*(set(r) for r in records))) if records else []
        print(
            f"quantity {quantity!r} not present; available: "
            f"{', '.join(list(_DERIVED_QUANTITIES) + have)}",
            file=sys.stderr,
        )
        return 2
    times = np.array([p[0] for p in pairs])
    values = np.array([p[1] for p in pairs])
    sigma = sigma_exponent(args.dim, args.gamma) if args.gamma else 1.0
    fit = decay_fit(times, values, quantity, (args.t0, args.t1), sigma)
    print(fit.to_json())
    return 0


def _cmd_stability(args) -> int:
    from .evolve import SolverConfig
    from .grids import Grid, ScalarField, VectorField
    from .polar import HydroFields
    from .runner import stability_experiment

    grid = Grid(dim=2, n=args.n, length=args.length)
    rsq = grid.coords[0] ** 2 + grid.coords[1] ** 2
    s = args.floor + args.amplitude * np.exp(-rsq / (2.0 * args.width**2))
    h = HydroFields.create(
        ScalarField(grid, s), VectorField(grid, np.zeros((2, *grid.shape)))
    )
    config = SolverConfig(gamma=args.gamma, dt=args.dt, t_end=args.t_end, snapshot_stride=args.stride)
    report = stability_experiment(h, tuple(args.ladder), config)
    out = report.to_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
            fh.write("\n")
        print(f"wrote {args.output}")
    else:
        print(out)
    return 0


def _cmd_scenario(args) -> int:
    from .runner import run_scenario

    return run_scenario(args.config, outdir=args.outdir, force=args.force)


def _vortex_triple(raw: str) -> tuple[float, float, int]:
    parts = raw.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected x,y,winding")
    return (float(parts[0]), float(parts[1]), int(parts[2]))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhdlab",
        description="Quantum-hydrodynamics laboratory: lift, evolve, diagnose.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lift", help="lift hydrodynamic snapshots to a wave function")
    p.add_argument("--sqrt-rho", dest="sqrt_rho", required=True)
    p.add_argument("--Lambda", dest="Lambda", required=True)
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--vortex", action="append", type=_vortex_triple, default=[],
                   metavar="X,Y,K", help="declared vortex (repeatable)")
    p.add_argument("--alpha", type=float, default=None, help="vortex separation floor")
    p.add_argument("--n-reg", type=int, default=10000, help="radial regularisation index")
    p.set_defaults(func=_cmd_lift)

    p = sub.add_parser("evolve", help="march a wave-function snapshot forward")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--stride", type=int, default=1000000000)
    p.add_argument("--pressure-off", action="store_true")
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("diagnose", help="functional diagnostics of one snapshot")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=_cmd_diagnose)

    p = sub.add_parser("decay-fit", help="log-log decay fit over an NDJSON column")
    p.add_argument("--diag", required=True)
    p.add_argument("--quantity", required=True)
    p.add_argument("--t0", type=float, required=True)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--dim", type=int, default=2)
    p.set_defaults(func=_cmd_decay_fit)

    p = sub.add_parser("stability", help="regularisation-ladder convergence experiment")
    p.add_argument("--ladder", type=int, nargs="+", required=True)
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--length", type=float, default=20.0)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--width", type=float, default=2.0)
    p.add_argument("--floor", type=float, default=0.5)
    p.add_argument("--gamma", type=float, default=2.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--t-end", type=float, default=0.5)
    p.add_argument("--stride", type=int, default=100)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("scenario", help="scenario file operations")
    scen_sub = p.add_subparsers(dest="scenario_command", required=True)
    pr = scen_sub.add_parser("run", help="execute a scenario config")
    pr.add_argument("config")
    pr.add_argument("--outdir", default=None)
    pr.add_argument("--force", action="store_true")
    pr.set_defaults(func=_cmd_scenario)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (QhdError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
