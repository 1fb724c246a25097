"""Periodic vortex phase factors on the square torus.

A single vortex has no periodic phase; a neutral family (windings summing to
zero) does. We build it from the odd Jacobi theta function theta_1(v | tau=i),
whose simple zeros sit on the period lattice. Holomorphic factors carry
positive windings, conjugated ones negative windings. Quasi-periodicity of
theta_1 leaves a constant phase multiplier per period translation, measured
numerically and cancelled by a linear phase, after which the unit factor is
exactly periodic on the grid.

All evaluations are mesh-free, so vortex positions need not sit on nodes, and
the phase gradient is available in closed form through theta_1'/theta_1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import QuantizationError
from .grids import Grid

_NOME = np.exp(-np.pi)  # q = e^{i pi tau} at tau = i
_NTERMS = 6


@dataclass(frozen=True)
class VortexSet:
    """Point vortices on the torus: positions (m, 2) and integer windings (m,).

    Windings must be nonzero, positions pairwise at least `alpha` apart
    (shortest periodic distance), and the windings must sum to zero, the
    torus having no room for net circulation.
    """

    positions: np.ndarray
    windings: np.ndarray
    alpha: float

    def __post_init__(self):
        pos = np.atleast_2d(np.asarray(self.positions, dtype=np.float64))
        win = np.atleast_1d(np.asarray(self.windings, dtype=np.int64))
        if pos.ndim != 2 or pos.shape[1] != 2:
            raise ValueError("positions must have shape (m, 2)")
        if win.shape != (pos.shape[0],):
            raise ValueError("need one winding per position")
        if np.any(win == 0):
            raise ValueError("windings must be nonzero integers")
        if int(win.sum()) != 0:
            raise QuantizationError(
                "windings must sum to zero on a periodic box (no net circulation)"
            )
        if not (self.alpha > 0.0):
            raise ValueError("separation alpha must be positive")
        pos = pos.copy()
        pos.setflags(write=False)
        win = win.copy()
        win.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "windings", win)

    def validate_separation(self, length: float) -> None:
        pos = self.positions
        m = pos.shape[0]
        for a in range(m):
            for b in range(a + 1, m):
                delta = pos[a] - pos[b]
                delta -= length * np.round(delta / length)
                if float(np.hypot(*delta)) < self.alpha:
                    raise ValueError(
                        f"vortices {a} and {b} closer than alpha = {self.alpha}"
                    )

    def __len__(self) -> int:
        return int(self.windings.shape[0])


def _reduce(v: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split v = v0 + m + p*tau with Re v0, Im v0 in [-1/2, 1/2), tau = i."""
    m = np.round(v.real)
    p = np.round(v.imag)
    return (v.real - m) + 1j * (v.imag - p), m, p


def _theta1_series(v0: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v0, dtype=np.complex128)
    for n in range(_NTERMS):
        coeff = (-1.0) ** n * _NOME ** ((n + 0.5) ** 2)
        out += coeff * np.sin((2 * n + 1) * np.pi * v0)
    return 2.0 * out


def _dtheta1_series(v0: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v0, dtype=np.complex128)
    for n in range(_NTERMS):
        coeff = (-1.0) ** n * _NOME ** ((n + 0.5) ** 2) * (2 * n + 1) * np.pi
        out += coeff * np.cos((2 * n + 1) * np.pi * v0)
    return 2.0 * out


def theta1_phase_logmod(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unit phase and log-modulus of theta_1(v), stable for any Im v.

    theta_1(v0 + m + p tau) = (-1)^{m+p} q^{-p^2} e^{-2 pi i p v0} theta_1(v0).
    """
    v0, m, p = _reduce(v)
    t0 = _theta1_series(v0)
    mod0 = np.abs(t0)
    phase = np.where(mod0 > 0.0, t0 / np.where(mod0 > 0.0, mod0, 1.0), 1.0 + 0.0j)
    sign = np.where((m + p) % 2 == 0, 1.0, -1.0)
    phase = phase * sign * np.exp(-2j * np.pi * p * v0.real)
    # at an exact lattice zero the modulus is zero: report -inf, not log(1)
    logmod = np.where(mod0 > 0.0, np.log(np.where(mod0 > 0.0, mod0, 1.0)), -np.inf)
    logmod = logmod + np.pi * p**2 + 2.0 * np.pi * p * v0.imag
    return phase, logmod


def theta1_logderiv(v: np.ndarray) -> np.ndarray:
    """theta_1'/theta_1 (v); poles at lattice points return inf."""
    v0, _, p = _reduce(v)
    t0 = _theta1_series(v0)
    d0 = _dtheta1_series(v0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(t0 != 0.0, d0 / np.where(t0 != 0.0, t0, 1.0), np.inf + 0j)
    return ratio - 2j * np.pi * p


def _complex_coords(grid: Grid) -> np.ndarray:
    x1, x2 = grid.coords
    return x1 + 1j * x2


@dataclass(frozen=True)
class PhaseFactor:
    """Periodic unit vortex factor and its closed-form velocity field."""

    unit: np.ndarray  # complex, |unit| = 1, grid shape
    velocity: np.ndarray  # (2, n, n); zeroed at nodes that sit on a vortex
    momentum_shift: np.ndarray  # the constant velocity of the compensating phase


def _translation_phase(vortices: VortexSet, length: float, shift: complex) -> float:
    """Phase multiplier picked up by the raw theta product under z -> z + shift."""
    probe = np.array([0.137 + 0.411j, 0.613 + 0.229j]) * length  # generic points
    vals = []
    for z in probe:
        total = 0.0
        for (x1, x2), k in zip(vortices.positions, vortices.windings):
            zj = complex(x1, x2)
            ph_a, _ = theta1_phase_logmod(np.array([(z + shift - zj) / length]))
            ph_b, _ = theta1_phase_logmod(np.array([(z - zj) / length]))
            ratio = ph_a[0] / ph_b[0] if k > 0 else np.conj(ph_a[0] / ph_b[0])
            total += abs(k) * np.angle(ratio)
        vals.append(total)
    if abs(np.exp(1j * vals[0]) - np.exp(1j * vals[1])) > 1e-9:
        raise AssertionError("translation multiplier is not constant; theta bookkeeping bug")
    return vals[0]


def phase_factor(grid: Grid, vortices: VortexSet) -> PhaseFactor:
    """Exactly periodic unit factor carrying the requested windings."""
    if grid.dim != 2:
        raise ValueError("vortex phase factors are two-dimensional")
    L = grid.length
    vortices.validate_separation(L)
    z = _complex_coords(grid)
    phase = np.ones(grid.shape, dtype=np.complex128)
    w = np.zeros(grid.shape, dtype=np.complex128)  # sum k_j theta'/theta
    on_core = np.zeros(grid.shape, dtype=bool)
    for (x1, x2), k in zip(vortices.positions, vortices.windings):
        v = (z - complex(x1, x2)) / L
        ph, _ = theta1_phase_logmod(v)
        with np.errstate(invalid="ignore", divide="ignore"):
            ld = theta1_logderiv(v) / L
        core = ~np.isfinite(ld)
        on_core |= core
        ld = np.where(core, 0.0, ld)
        if k > 0:
            phase = phase * ph**k
        else:
            phase = phase * np.conj(ph) ** (-k)
        w = w + k * ld
    # cancel the constant translation multipliers with a linear phase
    a1 = _translation_phase(vortices, L, complex(L, 0.0))
    a2 = _translation_phase(vortices, L, complex(0.0, L))
    x1g, x2g = grid.coords
    phase = phase * np.exp(-1j * (a1 * x1g + a2 * x2g) / L)
    shift = np.array([-a1 / L, -a2 / L])
    velocity = np.stack([w.imag + shift[0], w.real + shift[1]])
    velocity[:, on_core] = 0.0
    phase[on_core] = 1.0
    # renormalise: powers of unit complexes drift at round-off level
    phase = phase / np.abs(phase)
    return PhaseFactor(phase, velocity, shift)


def core_profile(grid: Grid, vortices: VortexSet, width: float) -> np.ndarray:
    """Periodic amplitude in [0, 1) vanishing linearly at each vortex.

    Built from the periodic core distance D_j = |theta_1| e^{-pi Im(v)^2},
    combined as prod_j (D_j^2 / (D_j^2 + width^2))^{|k_j|/2}; the product with
    `phase_factor` is then a smooth wave function.
    """
    if grid.dim != 2:
        raise ValueError("core profiles are two-dimensional")
    if not (width > 0.0):
        raise ValueError("core width must be positive")
    L = grid.length
    z = _complex_coords(grid)
    amp = np.ones(grid.shape)
    wsq = (width / L) ** 2
    for (x1, x2), k in zip(vortices.positions, vortices.windings):
        v = (z - complex(x1, x2)) / L
        _, logmod = theta1_phase_logmod(v)
        dsq = np.exp(2.0 * (logmod - np.pi * v.imag**2))
        amp = amp * (dsq / (dsq + wsq)) ** (abs(int(k)) / 2.0)
    return amp
