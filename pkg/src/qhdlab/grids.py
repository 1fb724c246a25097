"""Grids and immutable field containers.

Two grid kinds are supported: a periodic Cartesian box [-L/2, L/2)^dim with
the same power-of-two node count on every axis, and a cell-centered radial
mesh for rotationally symmetric states in ambient dimension d in {2, 3}.
Fields are frozen value objects; every public constructor normalises dtype,
checks shape, rejects non-finite entries and locks the buffer.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

# Surface measure of the unit sphere boundary, |S^{d-1}|.
SPHERE_AREA = {2: 2.0 * np.pi, 3: 4.0 * np.pi}


@dataclass(frozen=True)
class Grid:
    """Periodic Cartesian box with nodes x_i = -L/2 + i*h per axis."""

    dim: int
    n: int
    length: float

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.n < 2 or (self.n & (self.n - 1)) != 0:
            raise ValueError(f"n must be a power of two >= 2, got {self.n}")
        if not (self.length > 0.0 and np.isfinite(self.length)):
            raise ValueError(f"length must be positive and finite, got {self.length}")

    @property
    def kind(self) -> str:
        return "cartesian-periodic"

    @property
    def spacing(self) -> float:
        return self.length / self.n

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        return -0.5 * self.length + self.spacing * np.arange(self.n)

    @cached_property
    def coords(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays of full grid shape, one per axis."""
        return tuple(np.meshgrid(*([self.axis] * self.dim), indexing="ij"))

    @cached_property
    def wavenumbers(self) -> tuple[np.ndarray, ...]:
        """Angular wavenumbers per axis, broadcastable to the grid shape."""
        k = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)
        out = []
        for ax in range(self.dim):
            shape = [1] * self.dim
            shape[ax] = self.n
            out.append(k.reshape(shape))
        return tuple(out)

    @cached_property
    def k_squared(self) -> np.ndarray:
        ksq = np.zeros(self.shape)
        for ka in self.wavenumbers:
            ksq = ksq + ka**2
        return ksq

    @cached_property
    def quadrature_weights(self) -> np.ndarray:
        return np.full(self.shape, self.cell_volume)


@dataclass(frozen=True)
class RadialGrid:
    """Cell-centered radial mesh r_j = (j + 1/2) h on (0, r_max), ambient dim d."""

    d: int
    r_max: float
    n_r: int

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ValueError(f"ambient dimension d must be 2 or 3, got {self.d}")
        if self.n_r < 4:
            raise ValueError(f"n_r must be at least 4, got {self.n_r}")
        if not (self.r_max > 0.0 and np.isfinite(self.r_max)):
            raise ValueError(f"r_max must be positive and finite, got {self.r_max}")

    @property
    def kind(self) -> str:
        return "radial"

    @property
    def dim(self) -> int:
        return 1

    @property
    def spacing(self) -> float:
        return self.r_max / self.n_r

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_r,)

    @cached_property
    def nodes(self) -> np.ndarray:
        return (np.arange(self.n_r) + 0.5) * self.spacing

    @cached_property
    def quadrature_weights(self) -> np.ndarray:
        # L^2(r^{d-1} dr) midpoint weights including the sphere-area factor.
        return SPHERE_AREA[self.d] * self.spacing * self.nodes ** (self.d - 1)


AnyGrid = Grid | RadialGrid


def _prepare(values: np.ndarray, grid: AnyGrid, dtype, shape: tuple[int, ...], what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    if arr.shape != shape:
        raise ValueError(f"{what}: expected shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise FloatingPointError(f"{what}: non-finite entries")
    arr = arr.copy() if not arr.flags.owndata or arr.flags.writeable else arr
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ScalarField:
    """Real scalar samples on a grid."""

    grid: AnyGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "values", _prepare(self.values, self.grid, np.float64, self.grid.shape, "ScalarField")
        )

    @classmethod
    def from_func(cls, grid: AnyGrid, func) -> "ScalarField":
        pts = grid.coords if isinstance(grid, Grid) else (grid.nodes,)
        return cls(grid, func(*pts))


@dataclass(frozen=True)
class VectorField:
    """Real vector samples, component-major layout (dim, *grid.shape)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        shape = (self.grid.dim,) + self.grid.shape
        object.__setattr__(
            self, "values", _prepare(self.values, self.grid, np.float64, shape, "VectorField")
        )

    def component(self, i: int) -> ScalarField:
        return ScalarField(self.grid, self.values[i])


@dataclass(frozen=True)
class ComplexField:
    """Complex scalar samples on a grid."""

    grid: AnyGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "values", _prepare(self.values, self.grid, np.complex128, self.grid.shape, "ComplexField")
        )

    @classmethod
    def from_func(cls, grid: AnyGrid, func) -> "ComplexField":
        pts = grid.coords if isinstance(grid, Grid) else (grid.nodes,)
        return cls(grid, func(*pts))


Field = ScalarField | VectorField | ComplexField


def integrate(f: ScalarField) -> float:
    """Quadrature of the samples: box sums h^d Sigma, radial C(d) h Sigma r^{d-1}."""
    if not isinstance(f, ScalarField):
        raise TypeError("integrate expects a real ScalarField")
    return float(np.sum(f.grid.quadrature_weights * f.values))


def norm_sq(f: Field) -> float:
    """Squared discrete L^2 norm. Vector fields sum over components."""
    w = f.grid.quadrature_weights
    v = f.values
    if isinstance(f, VectorField):
        return float(np.sum(w * np.sum(np.abs(v) ** 2, axis=0)))
    return float(np.sum(w * np.abs(v) ** 2))


def norm(f: Field) -> float:
    return float(np.sqrt(norm_sq(f)))


def inner(a: Field, b: Field) -> complex:
    if a.grid != b.grid:
        raise ValueError("inner product requires a common grid")
    w = a.grid.quadrature_weights
    if isinstance(a, VectorField) and isinstance(b, VectorField):
        return complex(np.sum(w * np.sum(np.conj(a.values) * b.values, axis=0)))
    return complex(np.sum(w * np.conj(a.values) * b.values))
