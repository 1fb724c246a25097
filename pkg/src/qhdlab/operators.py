"""Differential operators: spectral on the periodic box, finite-difference radial.

All Cartesian derivatives are Fourier multipliers, so they commute exactly up
to round-off and are exact on band-limited data. The radial Laplacian is the
second-order stencil of d_rr + (d-1)/r d_r on the cell-centered mesh with an
even reflection at the axis and a homogeneous Dirichlet face at r_max.
"""
from __future__ import annotations

import numpy as np

from .errors import UnsupportedGridError
from .grids import ComplexField, Grid, RadialGrid, ScalarField, VectorField


def _require_cartesian(grid, op: str) -> Grid:
    if not isinstance(grid, Grid):
        raise UnsupportedGridError(f"{op} requires a periodic Cartesian grid")
    return grid


def spectral_gradient_values(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Gradient of raw samples, shape (dim, *grid.shape); complex in, complex out."""
    fhat = np.fft.fftn(values)
    out = np.empty((grid.dim,) + grid.shape, dtype=np.complex128)
    for ax, ka in enumerate(grid.wavenumbers):
        out[ax] = np.fft.ifftn(1j * ka * fhat)
    return out


def spectral_laplacian_values(values: np.ndarray, grid: Grid) -> np.ndarray:
    return np.fft.ifftn(-grid.k_squared * np.fft.fftn(values))


def gradient(f: ScalarField) -> VectorField:
    grid = _require_cartesian(f.grid, "gradient")
    return VectorField(grid, spectral_gradient_values(f.values, grid).real)


def gradient_c(f: ComplexField) -> np.ndarray:
    """Complex gradient values of a wave function, shape (dim, *shape)."""
    grid = _require_cartesian(f.grid, "gradient")
    return spectral_gradient_values(f.values, grid)


def laplacian(f: ScalarField) -> ScalarField:
    grid = _require_cartesian(f.grid, "laplacian")
    return ScalarField(grid, spectral_laplacian_values(f.values, grid).real)


def divergence(F: VectorField) -> ScalarField:
    grid = _require_cartesian(F.grid, "divergence")
    out = np.zeros(grid.shape, dtype=np.complex128)
    for ax, ka in enumerate(grid.wavenumbers):
        out += np.fft.ifftn(1j * ka * np.fft.fftn(F.values[ax]))
    return ScalarField(grid, out.real)


def curl2d(F: VectorField) -> ScalarField:
    """Scalar curl d_1 F_2 - d_2 F_1. Defined for dim = 2 only."""
    grid = _require_cartesian(F.grid, "curl2d")
    if grid.dim != 2:
        raise UnsupportedGridError("curl2d is defined on two-dimensional grids only")
    k1, k2 = grid.wavenumbers
    d1F2 = np.fft.ifftn(1j * k1 * np.fft.fftn(F.values[1]))
    d2F1 = np.fft.ifftn(1j * k2 * np.fft.fftn(F.values[0]))
    return ScalarField(grid, (d1F2 - d2F1).real)


def curl3d_values(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Vector curl of raw (3, n, n, n) samples."""
    k1, k2, k3 = grid.wavenumbers
    hat = [np.fft.fftn(values[i]) for i in range(3)]

    def d(ax_k, comp):
        return np.fft.ifftn(1j * ax_k * hat[comp]).real

    return np.stack(
        [
            d(k2, 2) - d(k3, 1),
            d(k3, 0) - d(k1, 2),
            d(k1, 1) - d(k2, 0),
        ]
    )


def fractional_deriv(f: ScalarField, s: float) -> ScalarField:
    """|nabla|^s as the Fourier multiplier |k|^s; the mean mode maps to 0.

    Zeroing the mean makes the family a semigroup on mean-free data for every
    s in [-2, 2], including the singular negative orders.
    """
    grid = _require_cartesian(f.grid, "fractional_deriv")
    if not (-2.0 <= s <= 2.0):
        raise ValueError(f"order s must lie in [-2, 2], got {s}")
    ksq = grid.k_squared
    mult = np.zeros(grid.shape)
    nz = ksq > 0
    mult[nz] = ksq[nz] ** (0.5 * s)
    return ScalarField(grid, np.fft.ifftn(mult * np.fft.fftn(f.values)).real)


def radial_laplacian(f: ScalarField, d: int | None = None) -> ScalarField:
    """Radial Laplacian d_rr + (d-1)/r d_r on the cell-centered mesh.

    Ghost values: even reflection across r = 0 (the mirror of the first node
    is the first node), linear reflection through zero at the r_max face. The
    boundary rows carry the reflection bias; interior rows are second order
    and exact on quadratics for d = 3.
    """
    grid = f.grid
    if not isinstance(grid, RadialGrid):
        raise UnsupportedGridError("radial_laplacian requires a radial grid")
    if d is None:
        d = grid.d
    if d not in (2, 3):
        raise ValueError(f"ambient dimension d must be 2 or 3, got {d}")
    if d != grid.d:
        raise ValueError(f"grid has ambient dimension {grid.d}, caller asked for {d}")
    h = grid.spacing
    r = grid.nodes
    v = f.values
    up = np.empty_like(v)
    down = np.empty_like(v)
    up[:-1] = v[1:]
    up[-1] = -v[-1]  # Dirichlet face half a cell beyond the last node
    down[1:] = v[:-1]
    down[0] = v[0]  # even reflection at the axis
    second = (up - 2.0 * v + down) / h**2
    first = (up - down) / (2.0 * h)
    return ScalarField(grid, second + (d - 1) / r * first)


def radial_gradient_values(values: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """Second-order d_r of radial samples; even reflection at the axis,
    one-sided stencil at the outer boundary (no Dirichlet assumption)."""
    h = grid.spacing
    out = np.empty_like(values)
    out[1:-1] = (values[2:] - values[:-2]) / (2.0 * h)
    out[0] = (values[1] - values[0]) / (2.0 * h)
    out[-1] = (3.0 * values[-1] - 4.0 * values[-2] + values[-3]) / (2.0 * h)
    return out


def radial_laplacian_bands(grid: RadialGrid) -> np.ndarray:
    """Tridiagonal bands of the conservative radial Laplacian for banded solves.

    This is the finite-volume form (1/r^{d-1}) d_r(r^{d-1} d_r .) with face
    coefficients at r = j h, zero flux through the axis and a Dirichlet ghost
    at the outer face. It is self-adjoint in the r^{d-1} dr inner product,
    which is what makes Crank-Nicolson steps conserve the radial mass exactly.
    Returned in scipy.linalg.solve_banded layout (3, n_r).
    """
    d = grid.d
    h = grid.spacing
    n = grid.n_r
    r = grid.nodes
    faces = (np.arange(n + 1) * h) ** (d - 1)  # r_{j-1/2} for j = 0..n
    w = r ** (d - 1) * h**2
    lower = faces[1:-1] / w[1:]  # coupling to j-1 at rows 1..n-1
    upper = faces[1:-1] / w[:-1]  # coupling to j+1 at rows 0..n-2
    diag = -(faces[:-1] + faces[1:]) / w
    diag[-1] -= faces[-1] / w[-1]  # Dirichlet ghost: f_n = -f_{n-1}
    bands = np.zeros((3, n))
    bands[0, 1:] = upper
    bands[1, :] = diag
    bands[2, :-1] = lower
    return bands
