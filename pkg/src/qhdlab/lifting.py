"""Wave-function lifts: hydrodynamic data back to psi.

Four regimes, one per data class:

* `lift_positive`: vacuum-free irrotational data, phase from a spectral
  Poisson solve of Lap S = div v (plus an integer momentum winding for the
  torus-harmonic part of v).
* `lift_vortices`: pointwise vacuum at declared vortices; the quantized part
  of the phase comes from a closed-form periodic vortex factor, the rest from
  the same Poisson solve.
* `lift_radial`: radial data with vacuum regularised away by delta_n before
  integrating the phase along r.
* `lift_planar_product`: a 2D wave function times a 1D amplitude, the
  cylindrical 3D regime.
"""
from __future__ import annotations

import numpy as np

from .errors import NotLiftableError, NotPositiveError, QuantizationError
from .estimates import circulation
from .grids import ComplexField, Grid, ScalarField
from .polar import HydroFields, RadialHydro, irrotationality_residual
from .vortex_phase import PhaseFactor, VortexSet, phase_factor

#: Default regularisation ladder for radial lifts.
N_REG_LADDER = (10, 100, 1000, 10000)


def poisson_phase(grid: Grid, velocity: np.ndarray) -> np.ndarray:
    """Solve Lap S = div velocity spectrally; S has zero mean.

    Recovers the curl-free, mean-free part of `velocity` exactly on the
    discrete torus; the constant (harmonic) part is not representable by a
    periodic phase and is handled by the callers via momentum windings.
    """
    div_hat = np.zeros(grid.shape, dtype=np.complex128)
    for ax, ka in enumerate(grid.wavenumbers):
        div_hat += 1j * ka * np.fft.fftn(velocity[ax])
    ksq = grid.k_squared
    s_hat = np.zeros_like(div_hat)
    nz = ksq > 0
    s_hat[nz] = -div_hat[nz] / ksq[nz]
    return np.fft.ifftn(s_hat).real


def _momentum_winding(grid: Grid, velocity: np.ndarray, tol: float) -> np.ndarray:
    """Round the mean velocity to the nearest torus-compatible momentum 2 pi m / L."""
    mean = velocity.reshape(grid.dim, -1).mean(axis=1)
    frac = mean * grid.length / (2.0 * np.pi)
    m = np.round(frac)
    if np.any(np.abs(frac - m) > tol):
        raise NotLiftableError(
            "mean velocity is not an integer multiple of 2 pi / L; "
            f"no periodic phase exists (offsets {frac - m})"
        )
    return m


def lift_positive(
    h: HydroFields,
    eps_pos: float | None = None,
    tol_irr: float = 1e-6,
    tol_mean: float = 1e-3,
) -> ComplexField:
    """Lift strictly positive irrotational data to psi = sqrt_rho e^{iS}."""
    grid = h.grid
    if not isinstance(grid, Grid):
        raise NotLiftableError("lift_positive expects Cartesian data")
    s = h.sqrt_rho.values
    if eps_pos is None:
        eps_pos = 1e-6 * float(s.max())
    if float(s.min()) < eps_pos:
        raise NotPositiveError(
            f"min sqrt_rho = {s.min():.3e} below positivity floor {eps_pos:.3e}"
        )
    if grid.dim >= 2:
        _, res = irrotationality_residual(h)
        if res > tol_irr:
            raise NotLiftableError(
                f"irrotationality residual {res:.3e} exceeds {tol_irr:.3e}"
            )
    v = h.Lambda.values / s[None]
    m = _momentum_winding(grid, v, tol_mean)
    carrier = np.zeros(grid.shape)
    for ax, x in enumerate(grid.coords):
        carrier = carrier + (2.0 * np.pi * m[ax] / grid.length) * x
    residual = v - np.array(
        [np.full(grid.shape, 2.0 * np.pi * mi / grid.length) for mi in m]
    )
    S = poisson_phase(grid, residual)
    return ComplexField(grid, s * np.exp(1j * (S + carrier)))


def lift_vortices(
    h: HydroFields,
    vortices: VortexSet,
    tol_circ: float = 0.1,
    tol_curl: float = 1e-2,
    tol_mean: float = 1e-3,
) -> ComplexField:
    """Lift data with quantized point vortices at declared positions.

    The declared windings are checked against loop integrals of v around each
    vortex; the residual velocity after removing the closed-form vortex field
    must be curl-free up to `tol_curl`.
    """
    grid = h.grid
    if not isinstance(grid, Grid) or grid.dim != 2:
        raise NotLiftableError("vortex lifts are two-dimensional")
    if len(vortices) == 0:
        return lift_positive(h, tol_irr=np.inf, tol_mean=tol_mean)
    vortices.validate_separation(grid.length)

    # vacuum nodes are admissible only within one cell of a declared vortex
    mask = h.mask
    if not np.all(mask):
        bad = ~mask
        x1, x2 = grid.coords
        near = np.zeros(grid.shape, dtype=bool)
        for (p1, p2) in vortices.positions:
            d1 = x1 - p1
            d1 -= grid.length * np.round(d1 / grid.length)
            d2 = x2 - p2
            d2 -= grid.length * np.round(d2 / grid.length)
            near |= np.hypot(d1, d2) <= 1.5 * grid.spacing * np.sqrt(2.0)
        if np.any(bad & ~near):
            raise NotLiftableError("vacuum nodes found away from declared vortices")

    loop_radius = max(min(vortices.alpha / 3.0, grid.length / 8.0), 5.0 * grid.spacing)
    for (p1, p2), k in zip(vortices.positions, vortices.windings):
        raw, _, _ = circulation(h, (p1, p2), loop_radius)
        if abs(raw - 2.0 * np.pi * k) > tol_circ:
            raise QuantizationError(
                f"circulation {raw:.4f} at ({p1:.3f}, {p2:.3f}) is not 2 pi k "
                f"for declared winding {k}"
            )

    pf: PhaseFactor = phase_factor(grid, vortices)
    s = h.sqrt_rho.values
    v = np.zeros_like(h.Lambda.values)
    np.divide(h.Lambda.values, s[None], out=v, where=mask[None])
    residual = np.where(mask[None], v - pf.velocity, 0.0)
    if not np.all(mask):
        # vacuum nodes carry no velocity data; a zero there would act as a
        # point source in the phase solve and pollute it globally, so fill
        # them from their neighbours instead (the residual is smooth)
        hole = ~mask
        for _ in range(12):
            acc = np.zeros_like(residual)
            cnt = np.zeros(grid.shape)
            good = ~hole
            for ax in (0, 1):
                for sh in (1, -1):
                    acc += np.where(
                        np.roll(good, sh, axis=ax)[None],
                        np.roll(residual, sh, axis=ax + 1),
                        0.0,
                    )
                    cnt += np.roll(good, sh, axis=ax)
            fillable = hole & (cnt > 0)
            residual[:, fillable] = acc[:, fillable] / cnt[fillable]
            hole = hole & ~fillable
            if not np.any(hole):
                break

    # gate on a local (central-difference) curl away from the declared cores:
    # vacuum dents at core nodes would pollute a spectral curl globally, while
    # the statement being checked is that the smooth part is irrotational
    hsp = grid.spacing
    curl_local = (
        np.roll(residual[1], -1, axis=0) - np.roll(residual[1], 1, axis=0)
        - np.roll(residual[0], -1, axis=1) + np.roll(residual[0], 1, axis=1)
    ) / (2.0 * hsp)
    x1, x2 = grid.coords
    away = np.ones(grid.shape, dtype=bool)
    for (p1, p2) in vortices.positions:
        d1 = x1 - p1
        d1 -= grid.length * np.round(d1 / grid.length)
        d2 = x2 - p2
        d2 -= grid.length * np.round(d2 / grid.length)
        away &= np.hypot(d1, d2) > 5.0 * hsp
    curl_res = float(np.sqrt(np.sum(curl_local[away] ** 2) * grid.cell_volume))
    if curl_res > tol_curl:
        raise NotLiftableError(
            f"residual velocity after vortex removal has curl {curl_res:.3e} "
            f"beyond {tol_curl:.3e}; data is not liftable with these windings"
        )

    m = _momentum_winding(grid, residual, tol_mean)
    x1, x2 = grid.coords
    carrier = (2.0 * np.pi / grid.length) * (m[0] * x1 + m[1] * x2)
    residual = residual - np.array(
        [np.full(grid.shape, 2.0 * np.pi * mi / grid.length) for mi in m]
    )
    S = poisson_phase(grid, residual)
    return ComplexField(grid, s * pf.unit * np.exp(1j * (S + carrier)))


def delta_reg(r: np.ndarray, n_reg: int) -> np.ndarray:
    """Gaussian vacuum regulariser delta_n = (1/n) e^{-r^2/2}."""
    if n_reg < 1:
        raise ValueError("n_reg must be a positive integer")
    return np.exp(-0.5 * r**2) / float(n_reg)


def lift_radial(h: RadialHydro, n_reg: int) -> ComplexField:
    """Radial lift psi_n = (sqrt_rho + delta_n) e^{i S_n}.

    S_n is the cumulative trapezoid integral from the first node of
    v_n = Lambda sqrt_rho / (sqrt_rho + delta_n)^2, the velocity of the
    regularised state; |Lambda_n| <= |Lambda| pointwise by construction.
    """
    grid = h.grid
    r = grid.nodes
    dn = delta_reg(r, n_reg)
    s_n = h.sqrt_rho.values + dn
    v_n = h.Lambda.values * h.sqrt_rho.values / s_n**2
    S = np.zeros_like(v_n)
    S[1:] = np.cumsum(0.5 * grid.spacing * (v_n[1:] + v_n[:-1]))
    return ComplexField(grid, s_n * np.exp(1j * S))


def regularised_radial(h: RadialHydro, n_reg: int) -> RadialHydro:
    """The pair (sqrt_rho + delta_n, Lambda sqrt_rho / (sqrt_rho + delta_n))."""
    r = h.grid.nodes
    dn = delta_reg(r, n_reg)
    s_n = h.sqrt_rho.values + dn
    lam_n = h.Lambda.values * h.sqrt_rho.values / s_n
    return RadialHydro(
        ScalarField(h.grid, s_n), ScalarField(h.grid, lam_n), h.eps_vac
    )


def lift_planar_product(psi1: ComplexField, sqrt_rho2: ScalarField) -> ComplexField:
    """Cylindrical 3D state psi(x1, x2, x3) = psi1(x1, x2) sqrt_rho2(x3)."""
    g2 = psi1.grid
    g1 = sqrt_rho2.grid
    if not isinstance(g2, Grid) or g2.dim != 2:
        raise ValueError("psi1 must live on a 2D Cartesian grid")
    if not isinstance(g1, Grid) or g1.dim != 1:
        raise ValueError("sqrt_rho2 must live on a 1D Cartesian grid")
    if g1.n != g2.n or g1.length != g2.length:
        raise ValueError("the planar and axial grids must share n and L")
    if np.any(sqrt_rho2.values < 0.0):
        raise NotPositiveError("sqrt_rho2 must be nonnegative")
    grid3 = Grid(dim=3, n=g2.n, length=g2.length)
    values = psi1.values[:, :, None] * sqrt_rho2.values[None, None, :]
    return ComplexField(grid3, values)
