"""Polar factorization: wave functions to hydrodynamic variables and residuals.

The factorization psi = sqrt_rho * phi is evaluated nodewise on the vacuum
mask |psi| >= eps_vac; off the mask phi is pinned to 1 and Lambda to 0. The
gradient of sqrt_rho is always taken as Re(conj(phi) grad psi), never by
differentiating |psi|, so vortex kinks in the modulus do not pollute the
identities.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedGridError, VacuumError
from .grids import ComplexField, Grid, RadialGrid, ScalarField, VectorField, norm_sq
from .operators import (
    curl2d,
    curl3d_values,
    gradient,
    gradient_c,
    laplacian,
    radial_gradient_values,
    spectral_gradient_values,
    spectral_laplacian_values,
)

#: Default vacuum threshold is this factor times max sqrt_rho (scale free).
EPS_VAC_FACTOR = 1e-8


def default_eps_vac(amplitude: np.ndarray) -> float:
    return EPS_VAC_FACTOR * float(np.max(amplitude))


@dataclass(frozen=True)
class HydroFields:
    """Madelung pair (sqrt_rho, Lambda) with Lambda == 0 on the vacuum set."""

    sqrt_rho: ScalarField
    Lambda: VectorField
    eps_vac: float

    def __post_init__(self):
        if self.sqrt_rho.grid != self.Lambda.grid:
            raise ValueError("sqrt_rho and Lambda must share a grid")
        if np.any(self.sqrt_rho.values < 0.0):
            raise ValueError("sqrt_rho must be nonnegative")
        off = self.sqrt_rho.values < self.eps_vac
        if np.any(self.Lambda.values[:, off] != 0.0):
            raise ValueError("Lambda must vanish identically on the vacuum set")

    @classmethod
    def create(cls, sqrt_rho: ScalarField, Lambda: VectorField, eps_vac: float | None = None) -> "HydroFields":
        """Build the pair, zeroing Lambda below the vacuum threshold."""
        if eps_vac is None:
            eps_vac = default_eps_vac(sqrt_rho.values)
        lam = Lambda.values.copy()
        lam[:, sqrt_rho.values < eps_vac] = 0.0
        return cls(sqrt_rho, VectorField(Lambda.grid, lam), eps_vac)

    @property
    def grid(self) -> Grid:
        return self.sqrt_rho.grid

    @property
    def mask(self) -> np.ndarray:
        return self.sqrt_rho.values >= self.eps_vac

    @property
    def rho(self) -> ScalarField:
        return ScalarField(self.grid, self.sqrt_rho.values**2)

    @property
    def current(self) -> VectorField:
        """Momentum density J = sqrt_rho * Lambda."""
        return VectorField(self.grid, self.sqrt_rho.values[None] * self.Lambda.values)


@dataclass(frozen=True)
class RadialHydro:
    """Rotationally symmetric Madelung pair on a radial mesh."""

    sqrt_rho: ScalarField
    Lambda: ScalarField
    eps_vac: float

    def __post_init__(self):
        if not isinstance(self.sqrt_rho.grid, RadialGrid):
            raise UnsupportedGridError("RadialHydro requires a radial grid")
        if self.sqrt_rho.grid != self.Lambda.grid:
            raise ValueError("sqrt_rho and Lambda must share a grid")
        if np.any(self.sqrt_rho.values < 0.0):
            raise ValueError("sqrt_rho must be nonnegative")

    @classmethod
    def create(cls, sqrt_rho: ScalarField, Lambda: ScalarField, eps_vac: float | None = None) -> "RadialHydro":
        if eps_vac is None:
            eps_vac = default_eps_vac(sqrt_rho.values)
        lam = Lambda.values.copy()
        lam[sqrt_rho.values < eps_vac] = 0.0
        return cls(sqrt_rho, ScalarField(Lambda.grid, lam), eps_vac)

    @property
    def grid(self) -> RadialGrid:
        return self.sqrt_rho.grid

    @property
    def mask(self) -> np.ndarray:
        return self.sqrt_rho.values >= self.eps_vac

    @property
    def rho(self) -> ScalarField:
        return ScalarField(self.grid, self.sqrt_rho.values**2)


@dataclass(frozen=True)
class PolarFactor:
    """Unit factor phi with sqrt_rho * phi = psi on the mask, phi = 1 elsewhere."""

    phi: ComplexField
    mask: np.ndarray
    eps_vac: float


def polar_factor(psi: ComplexField, eps_vac: float | None = None) -> PolarFactor:
    amp = np.abs(psi.values)
    if eps_vac is None:
        eps_vac = default_eps_vac(amp)
    mask = amp >= eps_vac
    phi = np.ones_like(psi.values)
    np.divide(psi.values, amp, out=phi, where=mask)
    return PolarFactor(ComplexField(psi.grid, phi), mask, eps_vac)


def madelung(psi: ComplexField, eps_vac: float | None = None) -> HydroFields | RadialHydro:
    """Map psi to (sqrt_rho, Lambda) = (|psi|, Im(conj(phi) grad psi))."""
    pf = polar_factor(psi, eps_vac)
    amp = np.abs(psi.values)
    if isinstance(psi.grid, RadialGrid):
        dpsi = radial_gradient_values(psi.values, psi.grid)
        lam = np.where(pf.mask, np.imag(np.conj(pf.phi.values) * dpsi), 0.0)
        return RadialHydro(
            ScalarField(psi.grid, amp), ScalarField(psi.grid, lam), pf.eps_vac
        )
    dpsi = gradient_c(psi)
    lam = np.imag(np.conj(pf.phi.values)[None] * dpsi)
    lam[:, ~pf.mask] = 0.0
    return HydroFields(
        ScalarField(psi.grid, amp), VectorField(psi.grid, lam), pf.eps_vac
    )


def grad_sqrt_rho_values(psi: ComplexField, pf: PolarFactor | None = None) -> np.ndarray:
    """Re(conj(phi) grad psi): the vacuum-safe representative of grad sqrt_rho."""
    if pf is None:
        pf = polar_factor(psi)
    dpsi = gradient_c(psi)
    out = np.real(np.conj(pf.phi.values)[None] * dpsi)
    out[:, ~pf.mask] = 0.0
    return out


def quadratic_identity_residual(psi: ComplexField, eps_vac: float | None = None) -> float:
    """Max-norm residual of Re(grad psi^bar x grad psi) = a x a + b x b on the mask,

    with a = Re(conj(phi) grad psi) and b = Im(conj(phi) grad psi).
    """
    grid = psi.grid
    if not isinstance(grid, Grid):
        raise UnsupportedGridError("quadratic identity residual needs a Cartesian grid")
    pf = polar_factor(psi, eps_vac)
    dpsi = gradient_c(psi)
    a = np.real(np.conj(pf.phi.values)[None] * dpsi)
    b = np.imag(np.conj(pf.phi.values)[None] * dpsi)
    worst = 0.0
    for i in range(grid.dim):
        for j in range(i, grid.dim):
            lhs = np.real(np.conj(dpsi[i]) * dpsi[j])
            rhs = a[i] * a[j] + b[i] * b[j]
            diff = np.abs(lhs - rhs)[pf.mask]
            if diff.size:
                worst = max(worst, float(diff.max()))
    return worst


def irrotationality_residual(h: HydroFields) -> tuple[ScalarField | VectorField, float]:
    """Residual field of curl J = 2 grad sqrt_rho ^ Lambda and its L2 norm."""
    grid = h.grid
    if not isinstance(grid, Grid) or grid.dim == 1:
        raise UnsupportedGridError("irrotationality residual needs dim 2 or 3")
    ds = spectral_gradient_values(h.sqrt_rho.values, grid).real
    lam = h.Lambda.values
    if grid.dim == 2:
        wedge = ds[0] * lam[1] - ds[1] * lam[0]
        res = ScalarField(grid, curl2d(h.current).values - 2.0 * wedge)
    else:
        wedge = np.cross(np.moveaxis(ds, 0, -1), np.moveaxis(lam, 0, -1))
        res = VectorField(
            grid, curl3d_values(h.current.values, grid) - 2.0 * np.moveaxis(wedge, -1, 0)
        )
    return res, float(np.sqrt(norm_sq(res)))


def bohm_identity_residual(rho: ScalarField, eps_vac: float | None = None) -> float:
    """Max-norm gap between (rho/2) grad(Lap sqrt_rho / sqrt_rho) and
    grad(Lap rho)/4 - div(grad sqrt_rho x grad sqrt_rho), for positive rho."""
    grid = rho.grid
    if not isinstance(grid, Grid):
        raise UnsupportedGridError("Bohm identity residual needs a Cartesian grid")
    if eps_vac is None:
        eps_vac = default_eps_vac(np.sqrt(np.abs(rho.values)))
    floor = eps_vac**2
    if np.any(rho.values < floor):
        raise VacuumError("Bohm identity requires rho bounded away from vacuum")
    s = np.sqrt(rho.values)
    lap_s = spectral_laplacian_values(s, grid).real
    lhs = 0.5 * rho.values[None] * spectral_gradient_values(lap_s / s, grid).real
    lap_rho = spectral_laplacian_values(rho.values, grid).real
    term1 = 0.25 * spectral_gradient_values(lap_rho, grid).real
    ds = spectral_gradient_values(s, grid).real
    div_tensor = np.zeros_like(lhs)
    for i in range(grid.dim):
        for j in range(grid.dim):
            dj = spectral_gradient_values(ds[i] * ds[j], grid).real[j]
            div_tensor[i] += dj
    rhs = term1 - div_tensor
    return float(np.max(np.abs(lhs - rhs)))
