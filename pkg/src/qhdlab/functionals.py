"""Conserved quantities, monotone functionals and identity residuals.

Everything here consumes hydrodynamic data (and optionally the generating
wave function) and returns plain numbers or small records. The bookkeeping
identity energy = kinetic + quantum + internal holds to round-off because the
total is literally that sum; agreement with the wave-side energy is a property
of the discretisation and is checked in tests, not enforced here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MissingInputError, SizeLimitError, UnsupportedGridError
from .estimates import circulation as _circulation
from .evolve import dt_psi, nonlinear_power
from .grids import (
    ComplexField,
    Grid,
    RadialGrid,
    ScalarField,
    VectorField,
    integrate,
    norm_sq,
)
from .operators import (
    fractional_deriv,
    spectral_gradient_values,
    spectral_laplacian_values,
)
from .polar import HydroFields, RadialHydro, irrotationality_residual, madelung, polar_factor

#: morawetz_H refuses direct double sums beyond this many nodes.
MORAWETZ_NODE_LIMIT = 64 * 64


def internal_energy_density(rho: np.ndarray, gamma: float) -> np.ndarray:
    """f(rho) = rho^gamma / gamma."""
    return nonlinear_power(rho, gamma) * rho / gamma


def pressure(rho: np.ndarray, gamma: float) -> np.ndarray:
    """p(rho) = (gamma - 1)/gamma rho^gamma."""
    return (gamma - 1.0) / gamma * nonlinear_power(rho, gamma) * rho


def mass(h: HydroFields | RadialHydro) -> float:
    return float(np.sum(h.grid.quadrature_weights * h.sqrt_rho.values**2))


def mass_wave(psi: ComplexField) -> float:
    return norm_sq(psi)


def energy_terms(h: HydroFields | RadialHydro, gamma: float) -> tuple[float, float, float]:
    """(kinetic, quantum, internal) = (1/2||Lambda||^2, 1/2||grad sqrt_rho||^2, int f)."""
    grid = h.grid
    w = grid.quadrature_weights
    if isinstance(h, RadialHydro):
        from .operators import radial_gradient_values

        ds = radial_gradient_values(h.sqrt_rho.values, grid)
        quantum = 0.5 * float(np.sum(w * ds**2))
        kinetic = 0.5 * float(np.sum(w * h.Lambda.values**2))
    else:
        ds = spectral_gradient_values(h.sqrt_rho.values, grid).real
        quantum = 0.5 * float(np.sum(w * np.sum(ds**2, axis=0)))
        kinetic = 0.5 * float(np.sum(w * np.sum(h.Lambda.values**2, axis=0)))
    internal = float(np.sum(w * internal_energy_density(h.sqrt_rho.values**2, gamma)))
    return kinetic, quantum, internal


def energy(h: HydroFields | RadialHydro, gamma: float) -> float:
    kinetic, quantum, internal = energy_terms(h, gamma)
    return kinetic + quantum + internal


def energy_wave(psi: ComplexField, gamma: float) -> float:
    """Wave-side total 1/2 ||grad psi||^2 + (1/gamma) int |psi|^{2 gamma}."""
    grid = psi.grid
    w = grid.quadrature_weights
    if isinstance(grid, RadialGrid):
        from .operators import radial_gradient_values

        dpsi = radial_gradient_values(psi.values, grid)
        kin = 0.5 * float(np.sum(w * np.abs(dpsi) ** 2))
    else:
        dpsi = spectral_gradient_values(psi.values, grid)
        kin = 0.5 * float(np.sum(w * np.sum(np.abs(dpsi) ** 2, axis=0)))
    rho = np.abs(psi.values) ** 2
    return kin + float(np.sum(w * internal_energy_density(rho, gamma)))


def energy_density(h: HydroFields, gamma: float) -> ScalarField:
    """Pointwise e = 1/2 |grad sqrt_rho|^2 + 1/2 |Lambda|^2 + f(rho)."""
    grid = h.grid
    ds = spectral_gradient_values(h.sqrt_rho.values, grid).real
    e = 0.5 * np.sum(ds**2, axis=0) + 0.5 * np.sum(h.Lambda.values**2, axis=0)
    e = e + internal_energy_density(h.sqrt_rho.values**2, gamma)
    return ScalarField(grid, e)


def lambda_field(h: HydroFields, gamma: float) -> ScalarField:
    """lambda = -1/2 Lap sqrt_rho + |Lambda|^2 / (2 sqrt_rho) + rho^{gamma-1} sqrt_rho
    on the mask, zero on the vacuum set."""
    grid = h.grid
    if not isinstance(grid, Grid):
        raise UnsupportedGridError("lambda_field expects Cartesian data")
    s = h.sqrt_rho.values
    mask = h.mask
    lap_s = spectral_laplacian_values(s, grid).real
    lamsq = np.sum(h.Lambda.values**2, axis=0)
    out = np.zeros(grid.shape)
    rho = s**2
    np.divide(lamsq, 2.0 * s, out=out, where=mask)
    out += -0.5 * lap_s + nonlinear_power(rho, gamma) * s
    return ScalarField(grid, np.where(mask, out, 0.0))


def xi_consistency_residual(h: HydroFields, gamma: float) -> float:
    """L2 residual of sqrt_rho lambda = -Lap rho / 4 + e + p(rho) on the mask."""
    grid = h.grid
    s = h.sqrt_rho.values
    rho = s**2
    lam = lambda_field(h, gamma)
    lhs = s * lam.values
    lap_rho = spectral_laplacian_values(rho, grid).real
    rhs = -0.25 * lap_rho + energy_density(h, gamma).values + pressure(rho, gamma)
    diff = np.where(h.mask, lhs - rhs, 0.0)
    return float(np.sqrt(np.sum(diff**2) * grid.cell_volume))


def dt_sqrt_rho_from_psi(psi: ComplexField, gamma: float, pressure_enabled: bool = True) -> ScalarField:
    """dt sqrt_rho = Re(conj(phi) dt psi) for Schroedinger states."""
    pf = polar_factor(psi)
    rhs = dt_psi(psi, gamma, pressure_enabled)
    vals = np.real(np.conj(pf.phi.values) * rhs.values)
    return ScalarField(psi.grid, np.where(pf.mask, vals, 0.0))


def I_of_state(
    h: HydroFields,
    gamma: float,
    dt_sqrt_rho: ScalarField | None = None,
    psi: ComplexField | None = None,
) -> float:
    """I = int lambda^2 + (dt sqrt_rho)^2. The time derivative must be supplied,
    either directly or through the generating wave function."""
    if dt_sqrt_rho is None:
        if psi is None:
            raise MissingInputError(
                "I_of_state needs dt_sqrt_rho, or psi to derive it from"
            )
        dt_sqrt_rho = dt_sqrt_rho_from_psi(psi, gamma)
    lam = lambda_field(h, gamma)
    return float(
        np.sum((lam.values**2 + dt_sqrt_rho.values**2)) * h.grid.cell_volume
    )


def I_wave(psi: ComplexField, gamma: float, pressure_enabled: bool = True) -> float:
    """I = ||dt psi||^2 on the wave side."""
    return norm_sq(dt_psi(psi, gamma, pressure_enabled))


def dI_dt_rhs(h: HydroFields, gamma: float, dt_sqrt_rho: ScalarField) -> float:
    """Closed form of dI/dt for I = int lambda^2 + (dt sqrt_rho)^2.

    Per unit of the half-normalized functional (1/2) int rho (mu^2 + sigma^2)
    the derivative is 2 int lambda dt(sqrt_rho) p'(rho); our I is twice that
    functional, so the coefficient here is 4. p'(rho) = (gamma-1) rho^{gamma-1}.
    """
    lam = lambda_field(h, gamma)
    rho = h.sqrt_rho.values**2
    p_prime = (gamma - 1.0) * nonlinear_power(rho, gamma)
    integrand = 4.0 * lam.values * dt_sqrt_rho.values * p_prime
    return float(np.sum(integrand) * h.grid.cell_volume)


@dataclass(frozen=True)
class PseudoConformal:
    """V(t), its rarefaction form, and the balance-law residual when a
    pressure-integral history is available."""

    V: float
    V_form2: float | None
    balance_residual: float | None


def pseudo_conformal_V(
    h: HydroFields,
    t: float,
    gamma: float,
    history: tuple[np.ndarray, np.ndarray, float] | None = None,
) -> PseudoConformal:
    """V = int |x|^2/2 rho - t int x . J + t^2 E, plus the t > 0 form
    int t^2/2 |grad sqrt_rho|^2 + t^2/2 |Lambda - (x/t) sqrt_rho|^2 + t^2 f.

    `history` is (times, int rho^gamma samples, V(0)); when given, the
    balance residual |V(t) + d(1 - (1 + 2/d)/gamma) int_0^t s P(s) ds - V(0)|
    is evaluated with the trapezoid rule.
    """
    grid = h.grid
    if not isinstance(grid, Grid):
        raise UnsupportedGridError("pseudo_conformal_V expects Cartesian data")
    w = grid.cell_volume
    s = h.sqrt_rho.values
    rho = s**2
    lam = h.Lambda.values
    xsq = np.zeros(grid.shape)
    xdotJ = np.zeros(grid.shape)
    for ax, x in enumerate(grid.coords):
        xsq = xsq + x**2
        xdotJ = xdotJ + x * s * lam[ax]
    E = energy(h, gamma)
    V = float(np.sum(0.5 * xsq * rho) * w) - t * float(np.sum(xdotJ) * w) + t * t * E
    form2 = None
    if t > 0.0:
        ds = spectral_gradient_values(s, grid).real
        rare = 0.0
        for ax, x in enumerate(grid.coords):
            rare += float(np.sum((lam[ax] - (x / t) * s) ** 2) * w)
        grad_sq = float(np.sum(ds**2) * w)
        internal = float(np.sum(internal_energy_density(rho, gamma)) * w)
        form2 = 0.5 * t * t * grad_sq + 0.5 * t * t * rare + t * t * internal
    balance = None
    if history is not None:
        times, p_samples, v0 = history
        coeff = grid.dim * (1.0 - (1.0 + 2.0 / grid.dim) / gamma)
        sel = np.asarray(times) <= t + 1e-12
        ts = np.asarray(times)[sel]
        ps = np.asarray(p_samples)[sel]
        acc = float(np.trapezoid(ts * ps, ts)) if ts.size > 1 else 0.0
        balance = abs(V + coeff * acc - v0)
    return PseudoConformal(V=V, V_form2=form2, balance_residual=balance)


def variance(h: HydroFields) -> float:
    """Second moment int |x|^2 rho."""
    grid = h.grid
    if not isinstance(grid, Grid):
        raise UnsupportedGridError("variance expects Cartesian data")
    xsq = np.zeros(grid.shape)
    for x in grid.coords:
        xsq = xsq + x**2
    return float(np.sum(xsq * h.sqrt_rho.values**2) * grid.cell_volume)


def _subsample_arrays(h: HydroFields, m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Bilinear resample of (rho, J, positions) onto an m^2 quadrature lattice."""
    from .estimates import _bilinear_periodic

    grid = h.grid
    axis = -0.5 * grid.length + (grid.length / m) * np.arange(m)
    X1, X2 = np.meshgrid(axis, axis, indexing="ij")
    pts = np.stack([X1.ravel(), X2.ravel()], axis=1)
    rho = _bilinear_periodic(h.sqrt_rho.values**2, grid, pts)
    Jv = h.current.values
    J = np.stack(
        [_bilinear_periodic(Jv[0], grid, pts), _bilinear_periodic(Jv[1], grid, pts)],
        axis=1,
    )
    weight = (grid.length / m) ** 2
    return rho, J, pts, weight


def morawetz_H(h: HydroFields, subsample: int | None = None) -> float:
    """H = int int rho(y) (x - y)/|x - y| . J(x) dx dy by direct double sum.

    The kernel is zero on the diagonal. Cost is quadratic in node count, so
    grids beyond 64^2 nodes are refused; pass `subsample` to evaluate on a
    coarser bilinear quadrature lattice instead.
    """
    grid = h.grid
    if not isinstance(grid, Grid) or grid.dim != 2:
        raise UnsupportedGridError("morawetz_H is implemented for dim = 2")
    if subsample is not None:
        rho, J, pts, wgt = _subsample_arrays(h, subsample)
        if subsample * subsample > MORAWETZ_NODE_LIMIT:
            raise SizeLimitError("subsample lattice exceeds the 64^2 node limit")
    else:
        if grid.n**grid.dim > MORAWETZ_NODE_LIMIT:
            raise SizeLimitError(
                f"direct Morawetz sum refused beyond {MORAWETZ_NODE_LIMIT} nodes; "
                "pass subsample="
            )
        x1, x2 = grid.coords
        pts = np.stack([x1.ravel(), x2.ravel()], axis=1)
        rho = (h.sqrt_rho.values**2).ravel()
        Jv = h.current.values
        J = np.stack([Jv[0].ravel(), Jv[1].ravel()], axis=1)
        wgt = grid.cell_volume
    total = 0.0
    block = 2048
    npts = pts.shape[0]
    for start in range(0, npts, block):  # partitioned double sum, final reduction
        sl = slice(start, min(start + block, npts))
        delta = pts[sl, None, :] - pts[None, :, :]
        dist = np.sqrt(np.sum(delta**2, axis=-1))
        # exact zeros on the diagonal survive the division as zeros
        np.maximum(dist, 1e-300, out=dist)
        unit = delta / dist[..., None]
        total += float(np.einsum("b,abc,ac->", rho, unit, J[sl]))
    return total * wgt * wgt


def sqrt_rho_K(h: HydroFields, kappa_constant: float | None) -> np.ndarray:
    """sqrt(rho K(rho)): rho/2 for the QHD kappa = 1/(4 rho), else
    sqrt(c/2) rho^{3/2} for constant capillarity c."""
    rho = h.sqrt_rho.values**2
    if kappa_constant is None:
        return 0.5 * rho
    return np.sqrt(0.5 * kappa_constant) * rho * h.sqrt_rho.values


def morawetz_rhs_norms(
    h: HydroFields, gamma: float, kappa_constant: float | None = None
) -> dict[str, float]:
    """Squared norms of |grad|^{(1-d)/2} sqrt(rho p) and |grad|^{(3-d)/2} sqrt(rho K)."""
    grid = h.grid
    if not isinstance(grid, Grid) or grid.dim not in (2, 3):
        raise UnsupportedGridError("Morawetz norms need a Cartesian grid, dim 2 or 3")
    d = grid.dim
    rho = h.sqrt_rho.values**2
    f_p = ScalarField(grid, np.sqrt(rho * pressure(rho, gamma)))
    f_k = ScalarField(grid, sqrt_rho_K(h, kappa_constant))
    p_norm = norm_sq(fractional_deriv(f_p, (1.0 - d) / 2.0))
    k_norm = norm_sq(fractional_deriv(f_k, (3.0 - d) / 2.0))
    return {"pressure_norm": p_norm, "capillary_norm": k_norm}


def energy_flux_residual_at(
    h_prev: HydroFields,
    h_mid: HydroFields,
    h_next: HydroFields,
    dt_snap: float,
    gamma: float,
    dt_sqrt_rho: ScalarField,
) -> tuple[ScalarField, float, float]:
    """Residual of dt e + div(Lambda lambda - dt(sqrt_rho) grad sqrt_rho) = 0.

    dt e is the centered difference of the energy densities at the two
    neighbouring snapshots; everything else is evaluated at the middle one.
    Returns (residual field, its L2 norm on the mask, its integral).
    """
    grid = h_mid.grid
    e_prev = energy_density(h_prev, gamma).values
    e_next = energy_density(h_next, gamma).values
    dte = (e_next - e_prev) / (2.0 * dt_snap)
    lam = lambda_field(h_mid, gamma)
    ds = spectral_gradient_values(h_mid.sqrt_rho.values, grid).real
    flux = h_mid.Lambda.values * lam.values[None] - dt_sqrt_rho.values[None] * ds
    div_flux = np.zeros(grid.shape)
    for ax, ka in enumerate(grid.wavenumbers):
        div_flux += np.fft.ifftn(1j * ka * np.fft.fftn(flux[ax])).real
    res = dte + div_flux
    field = ScalarField(grid, np.where(h_mid.mask, res, 0.0))
    l2 = float(np.sqrt(np.sum(field.values**2) * grid.cell_volume))
    total = float(np.sum(res) * grid.cell_volume)
    return field, l2, total


def energy_flux_residual(traj, gamma: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-snapshot local conservation-law residuals along a trajectory.

    For each interior snapshot: the masked L2 norm of
    dt e + div(Lambda lambda - dt(sqrt_rho) grad sqrt_rho) with dt e by
    centered differences, and separately the full-box integral of the
    residual. Returns (interior times, L2 norms, integrals).
    """
    times = np.asarray(traj.times)
    if len(traj.states) < 3:
        raise ValueError("need at least three snapshots for centered differences")
    pressure_on = traj.config.pressure_enabled
    hs = [madelung(s) for s in traj.states]
    out_t, out_l2, out_int = [], [], []
    for k in range(1, len(hs) - 1):
        dt_snap = 0.5 * (times[k + 1] - times[k - 1])
        dts = dt_sqrt_rho_from_psi(traj.states[k], gamma, pressure_on)
        _, l2, total = energy_flux_residual_at(
            hs[k - 1], hs[k], hs[k + 1], dt_snap, gamma, dts
        )
        out_t.append(times[k])
        out_l2.append(l2)
        out_int.append(total)
    return np.array(out_t), np.array(out_l2), np.array(out_int)


def dI_dt_residual(traj, gamma: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-snapshot residual of the I-identity along a trajectory.

    dI/dt by centered differences of I(t) = ||dt psi||^2 against the
    closed-form right side 2 int lambda dt(sqrt_rho) p'(rho). Returns
    (interior times, |difference|).
    """
    times = np.asarray(traj.times)
    if len(traj.states) < 3:
        raise ValueError("need at least three snapshots for centered differences")
    pressure_on = traj.config.pressure_enabled
    I_series = [I_wave(s, gamma, pressure_on) for s in traj.states]
    out_t, out_res = [], []
    for k in range(1, len(traj.states) - 1):
        dIdt = (I_series[k + 1] - I_series[k - 1]) / (times[k + 1] - times[k - 1])
        if pressure_on:
            h = madelung(traj.states[k])
            dts = dt_sqrt_rho_from_psi(traj.states[k], gamma, pressure_on)
            rhs = dI_dt_rhs(h, gamma, dts)
        else:
            rhs = 0.0
        out_t.append(times[k])
        out_res.append(abs(dIdt - rhs))
    return np.array(out_t), np.array(out_res)


@dataclass(frozen=True)
class CirculationEntry:
    x: tuple[float, float]
    k: int
    raw: float
    winding: int
    defect: float


@dataclass(frozen=True)
class Residuals:
    irrotationality: float | None
    xi_consistency: float | None
    energy_flux: float | None


@dataclass(frozen=True)
class MorawetzNorms:
    pressure_norm: float
    capillary_norm: float


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One NDJSON line of run diagnostics; field names are the contract."""

    t: float
    mass: float
    energy: float
    kinetic: float
    quantum: float
    internal: float
    I_value: float | None
    I_wave_value: float | None
    V_value: float | None
    V_form2_value: float | None
    H_value: float | None
    morawetz_norms: MorawetzNorms | None
    circulation: list[CirculationEntry] | None
    residuals: Residuals
    variance: float | None


def diagnostics_record(
    psi: ComplexField,
    t: float,
    gamma: float,
    pressure_enabled: bool = True,
    kappa_constant: float | None = None,
    vortex_probes: list[tuple[tuple[float, float], int, float]] | None = None,
    with_morawetz_H: bool = False,
    morawetz_subsample: int | None = None,
    flux_residual: float | None = None,
) -> DiagnosticsRecord:
    """Assemble the per-snapshot record for a Cartesian wave-function state."""
    grid = psi.grid
    h = madelung(psi)
    kinetic, quantum, internal = energy_terms(h, gamma)
    rec_I = None
    if isinstance(grid, Grid):
        dt_s = dt_sqrt_rho_from_psi(psi, gamma, pressure_enabled)
        rec_I = I_of_state(h, gamma, dt_sqrt_rho=dt_s)
    rec_I_wave = I_wave(psi, gamma, pressure_enabled)
    V = V2 = None
    var = None
    if isinstance(grid, Grid):
        pc = pseudo_conformal_V(h, t, gamma)
        V, V2 = pc.V, pc.V_form2
        var = variance(h)
    H_val = None
    norms = None
    if isinstance(grid, Grid) and grid.dim in (2, 3):
        norms_d = morawetz_rhs_norms(h, gamma, kappa_constant)
        norms = MorawetzNorms(**norms_d)
        if with_morawetz_H and grid.dim == 2:
            H_val = morawetz_H(h, subsample=morawetz_subsample)
    circ = None
    if vortex_probes:
        circ = []
        for center, k, radius in vortex_probes:
            raw, winding, defect = _circulation(h, center, radius)
            circ.append(
                CirculationEntry(
                    x=(float(center[0]), float(center[1])),
                    k=int(k),
                    raw=raw,
                    winding=winding,
                    defect=defect,
                )
            )
    irr = None
    if isinstance(grid, Grid) and grid.dim >= 2:
        _, irr = irrotationality_residual(h)
    res = Residuals(
        irrotationality=irr,
        xi_consistency=xi_consistency_residual(h, gamma) if isinstance(grid, Grid) else None,
        energy_flux=flux_residual,
    )
    return DiagnosticsRecord(
        t=t,
        mass=mass(h),
        energy=kinetic + quantum + internal,
        kinetic=kinetic,
        quantum=quantum,
        internal=internal,
        I_value=rec_I,
        I_wave_value=rec_I_wave,
        V_value=V,
        V_form2_value=V2,
        H_value=H_val,
        morawetz_norms=norms,
        circulation=circ,
        residuals=res,
        variance=var,
    )
