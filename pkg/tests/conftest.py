"""Shared helpers for the test suite.

States meant to be periodic to machine precision need Gaussian widths with
exp(-(L/2)^2 / (2 w^2)) below round-off: width <= length/16 gives a boundary
tail < 1e-15. Wider bumps (width ~ length/10) leave a ~1e-6 periodization
kink whose spectral tail pollutes high-derivative residuals; tests that
probe those residuals must use the narrow setting. Phases are built from
exact Fourier modes of the box, so they never break periodicity.
"""
from __future__ import annotations

import numpy as np
import pytest

from qhdlab import ComplexField, Grid, HydroFields, ScalarField, VectorField


def box_phase(grid: Grid, scale: float = 0.2) -> np.ndarray:
    """A smooth, exactly periodic test phase built from low Fourier modes."""
    k = 2.0 * np.pi / grid.length
    c = grid.coords
    if grid.dim == 1:
        return scale * np.sin(k * c[0])
    if grid.dim == 2:
        return scale * np.sin(k * c[0]) * np.cos(2.0 * k * c[1])
    return scale * np.sin(k * c[0]) * np.cos(2.0 * k * c[1]) * np.cos(k * c[2])


def gaussian_bump(grid: Grid, amplitude: float = 1.0, width: float = 2.0,
                  floor: float = 0.0) -> np.ndarray:
    rsq = np.zeros(grid.shape)
    for x in grid.coords:
        rsq = rsq + x**2
    return floor + amplitude * np.exp(-rsq / (2.0 * width**2))


def gaussian_psi(grid: Grid, amplitude: float = 1.0, width: float = 2.0,
                 floor: float = 0.0, phase_scale: float = 0.0) -> ComplexField:
    amp = gaussian_bump(grid, amplitude, width, floor)
    if phase_scale:
        return ComplexField(grid, amp * np.exp(1j * box_phase(grid, phase_scale)))
    return ComplexField(grid, amp.astype(np.complex128))


def band_limited_random(grid: Grid, kcut: int, seed: int,
                        mean_offset: float = 0.0) -> np.ndarray:
    """Random real field with Fourier support |k_i| <= kcut (complex output
    requested via mean_offset=None is not needed; callers combine two draws)."""
    rng = np.random.default_rng(seed)
    coef = np.zeros(grid.shape, dtype=np.complex128)
    idx = np.arange(grid.n)
    low = (idx <= kcut) | (idx >= grid.n - kcut)
    sel = np.ix_(*([np.where(low)[0]] * grid.dim))
    block_shape = tuple(2 * kcut + 1 for _ in range(grid.dim))
    coef[sel] = rng.standard_normal(block_shape) + 1j * rng.standard_normal(block_shape)
    field = np.fft.ifftn(coef).real
    field = field / max(np.max(np.abs(field)), 1e-300)
    return field + mean_offset


def positive_hydro(grid: Grid, amplitude: float = 1.0, width: float = 2.0,
                   floor: float = 0.5, lam_scale: float = 0.2) -> HydroFields:
    """Vacuum-free hydrodynamic data with an irrotational velocity part."""
    s = gaussian_bump(grid, amplitude, width, floor)
    phase = box_phase(grid, lam_scale)
    from qhdlab.operators import spectral_gradient_values

    grad_phase = spectral_gradient_values(phase, grid).real
    Lam = s[None] * grad_phase
    return HydroFields.create(ScalarField(grid, s), VectorField(grid, Lam))


def require_close(actual, expected, tol, label=""):
    gap = abs(actual - expected)
    assert gap <= tol, f"{label}: |{actual} - {expected}| = {gap} > {tol}"


@pytest.fixture(scope="session")
def grid64():
    return Grid(dim=2, n=64, length=20.0)


@pytest.fixture(scope="session")
def grid128():
    return Grid(dim=2, n=128, length=20.0)
