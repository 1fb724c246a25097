"""Dispersive decay fits and circulation measurements.

The theory predicts power-law decay with exponent sigma = min(1, d(gamma-1)/2)
for the gradient part and 2*sigma for the quadratic quantities; fits happen in
log-log coordinates and acceptance is one-sided (measured decay at least as
fast as predicted, up to slack).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedGridError, VacuumError
from .grids import Grid, ScalarField

#: Fitted exponents may sit this far above the theoretical -sigma and still pass.
DECAY_SLACK = 0.15


def sigma_exponent(d: int, gamma: float) -> float:
    """Decay rate sigma = min(1, d(gamma-1)/2) for admissible (d, gamma)."""
    if d not in (2, 3):
        raise ValueError(f"dimension d must be 2 or 3, got {d}")
    if d == 2 and not gamma > 1.0:
        raise ValueError(f"gamma must exceed 1 in dimension 2, got {gamma}")
    if d == 3 and not (1.0 < gamma < 3.0):
        raise ValueError(f"gamma must lie in (1, 3) in dimension 3, got {gamma}")
    return min(1.0, 0.5 * d * (gamma - 1.0))


@dataclass(frozen=True)
class DecayFit:
    """Least-squares power-law fit of a positive time series on [t0, t1]."""

    quantity: str
    t0: float
    t1: float
    exponent: float
    residual_95: float
    sigma_theory: float
    samples: int

    def __post_init__(self):
        if self.t0 < 1.0:
            raise ValueError("fit window must start at t0 >= 1 (log-log fit)")
        if self.samples < 10:
            raise ValueError("fit needs at least 10 samples in the window")

    def to_json(self) -> str:
        return json.dumps(
            {
                "quantity": self.quantity,
                "t0": self.t0,
                "t1": self.t1,
                "exponent": self.exponent,
                "residual_95": self.residual_95,
                "sigma_theory": self.sigma_theory,
                "samples": self.samples,
            }
        )


def default_window(t_end: float) -> tuple[float, float]:
    """Late-time fit window [max(5, t_end/10), 0.8 t_end]."""
    return max(5.0, t_end / 10.0), 0.8 * t_end


def decay_fit(
    times: np.ndarray,
    values: np.ndarray,
    quantity: str,
    window: tuple[float, float],
    sigma_theory: float,
) -> DecayFit:
    """Fit values ~ C t^p on the window; returns the fitted p with a 95% band."""
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if t.shape != v.shape or t.ndim != 1:
        raise ValueError("times and values must be matching 1D arrays")
    t0, t1 = window
    sel = (t >= t0) & (t <= t1)
    t, v = t[sel], v[sel]
    if np.any(v <= 0.0):
        raise ValueError(f"{quantity}: nonpositive values in the fit window")
    if t.size < 10:
        raise ValueError(f"{quantity}: only {t.size} samples in window [{t0}, {t1}]")
    x = np.log(t)
    y = np.log(v)
    slope, intercept = np.polyfit(x, y, 1)
    fit = slope * x + intercept
    dof = max(t.size - 2, 1)
    sigma_sq = float(np.sum((y - fit) ** 2)) / dof
    denom = float(np.sum((x - x.mean()) ** 2))
    stderr = np.sqrt(sigma_sq / denom)
    return DecayFit(
        quantity=quantity,
        t0=float(t0),
        t1=float(t1),
        exponent=float(slope),
        residual_95=float(1.96 * stderr),
        sigma_theory=float(sigma_theory),
        samples=int(t.size),
    )


def decay_passes(fit: DecayFit, multiple: float = 1.0, slack: float = DECAY_SLACK) -> bool:
    """One-sided acceptance: exponent <= -multiple * sigma + slack."""
    return fit.exponent <= -multiple * fit.sigma_theory + slack


def _bilinear_periodic(values: np.ndarray, grid: Grid, pts: np.ndarray) -> np.ndarray:
    """Bilinear interpolation on the periodic box at points (m, 2)."""
    h = grid.spacing
    u = (pts + 0.5 * grid.length) / h
    i0 = np.floor(u).astype(int)
    frac = u - i0
    i0 %= grid.n
    i1 = (i0 + 1) % grid.n
    f1, f2 = frac[:, 0], frac[:, 1]
    v00 = values[i0[:, 0], i0[:, 1]]
    v10 = values[i1[:, 0], i0[:, 1]]
    v01 = values[i0[:, 0], i1[:, 1]]
    v11 = values[i1[:, 0], i1[:, 1]]
    return (
        v00 * (1 - f1) * (1 - f2)
        + v10 * f1 * (1 - f2)
        + v01 * (1 - f1) * f2
        + v11 * f1 * f2
    )


def circulation(
    h, center: tuple[float, float], radius: float, segments: int = 256
) -> tuple[float, int, float]:
    """Loop integral of v = Lambda / sqrt_rho around a circle.

    Lambda and sqrt_rho are interpolated separately (bilinear, periodic) and
    divided at the sample points. Returns (raw integral, nearest integer
    winding, quantization defect |raw/2pi - winding|).
    """
    grid = h.grid
    if not isinstance(grid, Grid) or grid.dim != 2:
        raise UnsupportedGridError("circulation loops are two-dimensional")
    if segments < 64:
        raise ValueError("use at least 64 segments for the loop")
    if not (radius > 0.0):
        raise ValueError("loop radius must be positive")
    theta = 2.0 * np.pi * (np.arange(segments) + 0.5) / segments
    pts = np.stack(
        [center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)],
        axis=1,
    )
    s = _bilinear_periodic(h.sqrt_rho.values, grid, pts)
    if np.any(s < h.eps_vac):
        raise VacuumError("circulation loop passes through vacuum")
    lam1 = _bilinear_periodic(h.Lambda.values[0], grid, pts)
    lam2 = _bilinear_periodic(h.Lambda.values[1], grid, pts)
    v1, v2 = lam1 / s, lam2 / s
    # midpoint rule with the exact tangent
    tangent = np.stack([-np.sin(theta), np.cos(theta)], axis=1)
    dl = 2.0 * np.pi * radius / segments
    raw = float(np.sum((v1 * tangent[:, 0] + v2 * tangent[:, 1]) * dl))
    winding = int(np.round(raw / (2.0 * np.pi)))
    defect = abs(raw / (2.0 * np.pi) - winding)
    return raw, winding, defect


def kinetic_profile_distance(h, t: float) -> float:
    """L2 distance of Lambda from the rarefaction profile (x/t) sqrt_rho."""
    grid = h.grid
    if not isinstance(grid, Grid):
        raise UnsupportedGridError("profile distance expects Cartesian data")
    if not (t > 0.0):
        raise ValueError("profile distance is defined for t > 0")
    total = 0.0
    for ax, x in enumerate(grid.coords):
        diff = h.Lambda.values[ax] - (x / t) * h.sqrt_rho.values
        total += float(np.sum(diff**2))
    return float(np.sqrt(total * grid.cell_volume))


def locate_minima(rho: ScalarField, count: int, min_separation: float) -> np.ndarray:
    """Positions of the `count` deepest local density minima, sub-grid refined.

    A quadratic fit through the 3x3 neighbourhood of each discrete minimum
    sharpens the location to O(h^2). Used for tracking vortex cores.
    """
    grid = rho.grid
    if not isinstance(grid, Grid) or grid.dim != 2:
        raise UnsupportedGridError("minima location is two-dimensional")
    v = rho.values
    n = grid.n
    is_min = np.ones(grid.shape, dtype=bool)
    for s1 in (-1, 0, 1):
        for s2 in (-1, 0, 1):
            if s1 == 0 and s2 == 0:
                continue
            is_min &= v <= np.roll(np.roll(v, s1, axis=0), s2, axis=1)
    idx = np.argwhere(is_min)
    order = np.argsort(v[is_min])
    found: list[np.ndarray] = []
    for q in order:
        i, j = idx[q]
        pos = _refine_minimum(v, grid, int(i), int(j))
        ok = True
        for p in found:
            delta = pos - p
            delta -= grid.length * np.round(delta / grid.length)
            if float(np.hypot(*delta)) < min_separation:
                ok = False
                break
        if ok:
            found.append(pos)
        if len(found) == count:
            break
    if len(found) < count:
        raise ValueError(f"found only {len(found)} of {count} requested minima")
    return np.array(found)


def _refine_minimum(v: np.ndarray, grid: Grid, i: int, j: int) -> np.ndarray:
    n = grid.n
    h = grid.spacing

    def at(di, dj):
        return v[(i + di) % n, (j + dj) % n]

    d1 = 0.5 * (at(1, 0) - at(-1, 0))
    d2 = 0.5 * (at(0, 1) - at(0, -1))
    d11 = at(1, 0) - 2 * at(0, 0) + at(-1, 0)
    d22 = at(0, 1) - 2 * at(0, 0) + at(0, -1)
    d12 = 0.25 * (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1))
    hess = np.array([[d11, d12], [d12, d22]])
    rhs = -np.array([d1, d2])
    try:
        shift = np.linalg.solve(hess, rhs)
    except np.linalg.LinAlgError:
        shift = np.zeros(2)
    shift = np.clip(shift, -1.0, 1.0)
    base = np.array([grid.axis[i], grid.axis[j]])
    pos = base + h * shift
    pos = (pos + 0.5 * grid.length) % grid.length - 0.5 * grid.length
    return pos
