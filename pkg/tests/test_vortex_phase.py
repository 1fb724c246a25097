"""Periodic vortex phase factors: unit modulus, quantized circulation,
translation consistency, and core-profile geometry."""
import numpy as np
import pytest

from qhdlab import Grid
from qhdlab.errors import QuantizationError
from qhdlab.vortex_phase import VortexSet, core_profile, phase_factor


def pair(length=20.0, alpha=5.0):
    return VortexSet(
        np.array([[-length / 8, 0.0], [length / 8, 0.0]]), np.array([1, -1]), alpha
    )


def loop_circulation(velocity, grid, center, radius, segments=720):
    """Independent circulation oracle: trapezoid over a circle with nearest-node
    sampling refined by bilinear interpolation done by hand."""
    thetas = np.linspace(0.0, 2.0 * np.pi, segments, endpoint=False)
    pts = np.stack(
        [center[0] + radius * np.cos(thetas), center[1] + radius * np.sin(thetas)]
    )
    h = grid.spacing
    idx = (pts + 0.5 * grid.length) / h
    i0 = np.floor(idx).astype(int)
    frac = idx - i0
    total = 0.0
    for comp, tangent in ((0, -np.sin(thetas)), (1, np.cos(thetas))):
        v = velocity[comp]
        a = i0 % grid.n
        b = (i0 + 1) % grid.n
        vals = (
            v[a[0], a[1]] * (1 - frac[0]) * (1 - frac[1])
            + v[b[0], a[1]] * frac[0] * (1 - frac[1])
            + v[a[0], b[1]] * (1 - frac[0]) * frac[1]
            + v[b[0], b[1]] * frac[0] * frac[1]
        )
        total += np.sum(vals * tangent) * radius * (2.0 * np.pi / segments)
    return total


class TestVortexSet:
    def test_rejects_nonzero_total_winding(self):
        with pytest.raises(QuantizationError):
            VortexSet(np.array([[0.0, 0.0]]), np.array([1]), 1.0)

    def test_rejects_zero_winding(self):
        with pytest.raises(ValueError):
            VortexSet(np.array([[0.0, 0.0], [1.0, 1.0]]), np.array([0, 0]), 1.0)

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            VortexSet(np.array([1.0, 2.0, 3.0]), np.array([1, -1]), 1.0)

    def test_separation_validation(self):
        vs = VortexSet(np.array([[0.0, 0.0], [0.5, 0.0]]), np.array([1, -1]), 2.0)
        with pytest.raises(ValueError):
            vs.validate_separation(20.0)

    def test_periodic_distance_used_for_separation(self):
        # points at x = -9.9 and +9.9 on a 20-box are only 0.2 apart
        vs = VortexSet(np.array([[-9.9, 0.0], [9.9, 0.0]]), np.array([1, -1]), 1.0)
        with pytest.raises(ValueError):
            vs.validate_separation(20.0)


class TestPhaseFactor:
    def test_unit_modulus_off_cores(self):
        g = Grid(dim=2, n=128, length=20.0)
        pf = phase_factor(g, pair())
        finite = np.isfinite(pf.velocity).all(axis=0)
        assert np.max(np.abs(np.abs(pf.unit[finite]) - 1.0)) < 1e-12

    def test_circulation_is_quantized(self):
        g = Grid(dim=2, n=256, length=20.0)
        vs = pair()
        pf = phase_factor(g, vs)
        for (cx, cy), k in zip(vs.positions, vs.windings):
            raw = loop_circulation(pf.velocity, g, (cx, cy), radius=1.5)
            assert raw / (2.0 * np.pi) == pytest.approx(k, abs=5e-3), (cx, cy, k)

    def test_loop_around_both_vortices_winds_zero(self):
        g = Grid(dim=2, n=256, length=20.0)
        pf = phase_factor(g, pair())
        raw = loop_circulation(pf.velocity, g, (0.0, 0.0), radius=5.0)
        assert abs(raw) / (2.0 * np.pi) < 2e-2

    def test_translation_equivariance_across_boundary(self):
        # translating every vortex by one grid spacing must cycle the samples,
        # up to a constant phase and an integer plane-wave mode (the uniform
        # compensating flow on a box is only defined modulo the 2*pi/L
        # momentum lattice); the wrap across the boundary is only consistent
        # because the sampled function is exactly periodic
        g = Grid(dim=2, n=64, length=20.0)
        vs = VortexSet(
            np.array([[-2.47, 0.11], [2.47, 0.11]]), np.array([1, -1]), 2.0
        )
        pf = phase_factor(g, vs)
        moved = VortexSet(vs.positions + [g.spacing, 0.0], vs.windings, vs.alpha)
        pf2 = phase_factor(g, moved)
        ratio = pf2.unit / np.roll(pf.unit, 1, axis=0)
        ratio = ratio / ratio[0, 0]
        modes = []
        for axis, probe in ((0, ratio[1, 0]), (1, ratio[0, 1])):
            m_float = np.angle(probe) * g.n / (2.0 * np.pi)
            m = int(round(m_float))
            assert abs(m_float - m) < 1e-6, "lattice mode must be integral"
            modes.append(m)
        i_idx = np.arange(g.n).reshape(-1, 1)
        j_idx = np.arange(g.n).reshape(1, -1)
        wave = np.exp(2j * np.pi * (modes[0] * i_idx + modes[1] * j_idx) / g.n)
        assert np.max(np.abs(ratio / wave - 1.0)) < 1e-9
        # the momentum shifts of the two constructions differ by that mode
        np.testing.assert_allclose(
            pf2.momentum_shift - pf.momentum_shift,
            2.0 * np.pi * np.array(modes) / g.length,
            atol=1e-12,
        )

    def test_circulation_independent_of_loop_radius(self):
        g = Grid(dim=2, n=512, length=20.0)
        vs = pair()
        pf = phase_factor(g, vs)
        for radius in (0.5, 0.25):
            raw = loop_circulation(pf.velocity, g, tuple(vs.positions[0]), radius)
            assert raw / (2.0 * np.pi) == pytest.approx(1.0, abs=2e-2), radius

    def test_velocity_matches_phase_increments(self):
        # arg(u[i+1]/u[i]) ~ trapezoid of the closed-form velocity over the
        # segment, away from the cores
        g = Grid(dim=2, n=512, length=20.0)
        pf = phase_factor(g, pair())
        i, j = 64, 380  # a node far from both cores
        inc = np.angle(pf.unit[i + 1, j] / pf.unit[i, j])
        pred = 0.5 * (pf.velocity[0, i, j] + pf.velocity[0, i + 1, j]) * g.spacing
        assert inc == pytest.approx(pred, abs=1e-6)

    def test_rejects_three_dimensional_grid(self):
        g = Grid(dim=3, n=16, length=10.0)
        with pytest.raises(ValueError):
            phase_factor(g, pair())
        with pytest.raises(ValueError):
            core_profile(g, pair(), width=1.0)


class TestCoreProfile:
    def test_vanishes_at_cores_and_saturates_far(self):
        g = Grid(dim=2, n=256, length=20.0)
        vs = pair()
        prof = core_profile(g, vs, width=1.0)
        assert prof.min() >= 0.0
        assert prof.max() <= 1.0
        # nearest node to each core carries a near-zero profile
        for cx, cy in vs.positions:
            i = int(round((cx + 10.0) / g.spacing)) % g.n
            j = int(round((cy + 10.0) / g.spacing)) % g.n
            assert prof[i, j] < 0.1
        # far from both cores it approaches 1
        far = prof[0, g.n // 2]
        assert far > 0.9

    def test_linear_vanishing_rate(self):
        g = Grid(dim=2, n=512, length=20.0)
        vs = pair()
        prof = core_profile(g, vs, width=2.0)
        cx, cy = vs.positions[0]
        i = int(round((cx + 10.0) / g.spacing)) % g.n
        j = int(round((cy + 10.0) / g.spacing)) % g.n
        # one node out vs two nodes out: profile ratio approaches 2 for a
        # simple zero (|k| = 1)
        p1 = prof[i + 1, j]
        p2 = prof[i + 2, j]
        assert p2 / p1 == pytest.approx(2.0, rel=0.1)

    def test_higher_winding_flattens_core(self):
        g = Grid(dim=2, n=256, length=40.0)
        vs2 = VortexSet(np.array([[-5.0, 0.0], [5.0, 0.0]]), np.array([2, -2]), 5.0)
        prof = core_profile(g, vs2, width=2.0)
        cx, cy = -5.0, 0.0
        i = int(round((cx + 20.0) / g.spacing)) % g.n
        j = int(round((cy + 20.0) / g.spacing)) % g.n
        p1 = prof[i + 1, j]
        p2 = prof[i + 2, j]
        # |k| = 2 gives a quadratic zero: ratio ~ 4
        assert p2 / p1 == pytest.approx(4.0, rel=0.2)
