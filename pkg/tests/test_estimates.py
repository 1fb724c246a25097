"""Decay-exponent fits, circulation loops, rarefaction-profile distances, and
density-minimum tracking."""
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhdlab import Grid, RadialGrid, ScalarField, VectorField
from qhdlab.errors import UnsupportedGridError, VacuumError
from qhdlab.estimates import (
    DECAY_SLACK,
    DecayFit,
    circulation,
    decay_fit,
    decay_passes,
    default_window,
    kinetic_profile_distance,
    locate_minima,
    sigma_exponent,
)
from qhdlab.functionals import variance
from qhdlab.operators import gradient
from qhdlab.polar import HydroFields, RadialHydro
from qhdlab.vortex_phase import VortexSet, core_profile, phase_factor

from conftest import box_phase, gaussian_bump, positive_hydro


class TestSigmaExponent:
    @pytest.mark.parametrize(
        "d, gamma, expected",
        [
            (2, 2.0, 1.0),
            (2, 3.0, 1.0),
            (2, 1.5, 0.5),
            (2, 1.1, pytest.approx(0.1)),
            (3, 4.0 / 3.0, pytest.approx(0.5)),
            (3, 2.0, 1.0),
            (3, 1.2, pytest.approx(0.3)),
        ],
    )
    def test_closed_forms(self, d, gamma, expected):
        assert sigma_exponent(d, gamma) == expected

    @pytest.mark.parametrize(
        "d, gamma",
        [(1, 2.0), (4, 2.0), (2, 1.0), (2, 0.5), (3, 1.0), (3, 3.0), (3, 3.5)],
    )
    def test_rejects_out_of_range(self, d, gamma):
        with pytest.raises(ValueError):
            sigma_exponent(d, gamma)

    @settings(max_examples=50, deadline=None)
    @given(
        d=st.sampled_from((2, 3)),
        g1=st.floats(1.0001, 2.9999),
        g2=st.floats(1.0001, 2.9999),
    )
    def test_clamped_and_monotone(self, d, g1, g2):
        lo, hi = sorted((g1, g2))
        s_lo, s_hi = sigma_exponent(d, lo), sigma_exponent(d, hi)
        assert 0.0 < s_lo <= 1.0
        assert s_lo == min(1.0, 0.5 * d * (lo - 1.0))
        assert s_lo <= s_hi  # faster pressure, faster decay


class TestDefaultWindow:
    def test_late_time_window(self):
        assert default_window(50.0) == (5.0, 40.0)
        assert default_window(200.0) == (20.0, 160.0)
        # short runs are floored at t0 = 5 so log-log fits stay late-time
        assert default_window(10.0) == (5.0, 8.0)


class TestDecayFit:
    def exact_series(self, p=-0.85, c=3.7):
        t = np.linspace(2.0, 50.0, 200)
        return t, c * t**p

    def test_exact_power_law_recovered(self):
        t, v = self.exact_series()
        fit = decay_fit(t, v, "gradient", (2.0, 50.0), sigma_theory=0.85)
        assert fit.exponent == pytest.approx(-0.85, abs=1e-10)
        assert fit.residual_95 < 1e-10
        assert fit.samples == t.size
        assert fit.quantity == "gradient"
        assert fit.sigma_theory == 0.85

    def test_window_masks_outside_samples(self):
        t, v = self.exact_series()
        spoiled = v.copy()
        spoiled[t < 5.0] = 1e6
        spoiled[t > 30.0] = 1e-12
        fit = decay_fit(t, spoiled, "q", (5.0, 30.0), sigma_theory=1.0)
        assert fit.exponent == pytest.approx(-0.85, abs=1e-10)
        assert fit.samples == int(np.sum((t >= 5.0) & (t <= 30.0)))

    def test_scaling_values_shifts_only_the_intercept(self):
        t, v = self.exact_series()
        f1 = decay_fit(t, v, "q", (2.0, 50.0), 1.0)
        f2 = decay_fit(t, 10.0 * v, "q", (2.0, 50.0), 1.0)
        assert f2.exponent == pytest.approx(f1.exponent, abs=1e-12)

    def test_nonpositive_values_rejected(self):
        t, v = self.exact_series()
        v[50] = 0.0
        with pytest.raises(ValueError, match="nonpositive"):
            decay_fit(t, v, "grad", (2.0, 50.0), 1.0)

    def test_too_few_samples_rejected(self):
        t, v = self.exact_series()
        with pytest.raises(ValueError, match="samples"):
            decay_fit(t[:5], v[:5], "q", (1.0, 100.0), 1.0)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            decay_fit(np.arange(10.0), np.arange(9.0), "q", (1.0, 9.0), 1.0)
        with pytest.raises(ValueError):
            decay_fit(np.ones((3, 3)), np.ones((3, 3)), "q", (1.0, 9.0), 1.0)

    def test_window_must_start_late_enough(self):
        t, v = self.exact_series()
        with pytest.raises(ValueError, match="t0"):
            decay_fit(t, v, "q", (0.5, 50.0), 1.0)

    def test_direct_construction_validates(self):
        with pytest.raises(ValueError):
            DecayFit("q", 1.0, 9.0, -1.0, 0.0, 1.0, samples=5)

    def test_json_round_trip(self):
        t, v = self.exact_series()
        fit = decay_fit(t, v, "gradient", (2.0, 50.0), 0.85)
        data = json.loads(fit.to_json())
        assert data == {
            "quantity": fit.quantity,
            "t0": fit.t0,
            "t1": fit.t1,
            "exponent": fit.exponent,
            "residual_95": fit.residual_95,
            "sigma_theory": fit.sigma_theory,
            "samples": fit.samples,
        }

    def test_one_sided_acceptance(self):
        def fit_with(exponent, sigma):
            return DecayFit("q", 5.0, 40.0, exponent, 0.0, sigma, 20)

        assert decay_passes(fit_with(-1.0, 1.0))
        # boundary: exactly sigma minus the slack still passes
        assert decay_passes(fit_with(-1.0 + DECAY_SLACK, 1.0))
        assert not decay_passes(fit_with(-1.0 + DECAY_SLACK + 1e-9, 1.0))
        # quadratic quantities decay twice as fast
        assert not decay_passes(fit_with(-1.0, 1.0), multiple=2.0)
        assert decay_passes(fit_with(-2.0, 1.0), multiple=2.0)

    @settings(max_examples=25, deadline=None)
    @given(p=st.floats(-3.0, -0.05), c=st.floats(0.1, 10.0))
    def test_recovers_any_exact_exponent(self, p, c):
        t = np.linspace(2.0, 40.0, 120)
        fit = decay_fit(t, c * t**p, "q", (2.0, 40.0), sigma_theory=-p)
        assert fit.exponent == pytest.approx(p, abs=1e-9)
        # a series exactly on the theoretical slope is accepted
        assert decay_passes(fit)


def vortex_pair_hydro(grid, width=1.5):
    vs = VortexSet(np.array([[-2.5, 0.0], [2.5, 0.0]]), np.array([1, -1]), 5.0)
    pf = phase_factor(grid, vs)
    prof = core_profile(grid, vs, width)
    s = (0.4 + gaussian_bump(grid, amplitude=0.6, width=1.2, floor=0.0)) * prof
    grad_S = gradient(ScalarField(grid, box_phase(grid, 0.1))).values
    lam = s[None] * (pf.velocity + grad_S)
    return HydroFields.create(ScalarField(grid, s), VectorField(grid, lam))


class TestCirculation:
    def test_gradient_velocity_has_zero_circulation(self, grid128):
        h = positive_hydro(grid128, lam_scale=0.2)
        raw, winding, defect = circulation(h, (0.0, 0.0), 2.0)
        assert winding == 0
        assert abs(raw) < 1e-12

    def test_pair_windings_and_defects(self, grid128):
        h = vortex_pair_hydro(grid128)
        for center, expected in [((-2.5, 0.0), 1), ((2.5, 0.0), -1)]:
            raw, winding, defect = circulation(h, center, 1.5)
            assert winding == expected
            assert defect < 1e-3
        # a loop away from both cores, and one enclosing both, see net zero
        _, winding, defect = circulation(h, (0.0, 6.0), 1.5)
        assert winding == 0 and defect < 1e-4
        _, winding, defect = circulation(h, (0.0, 0.0), 6.0)
        assert winding == 0 and defect < 1e-12

    def test_winding_is_homotopy_invariant(self, grid128):
        h = vortex_pair_hydro(grid128)
        for radius in (1.0, 1.8, 2.6):
            _, winding, defect = circulation(h, (-2.5, 0.0), radius)
            assert winding == 1
            assert defect < 5e-3

    def test_segment_refinement_converges(self, grid128):
        h = vortex_pair_hydro(grid128)
        _, _, d_coarse = circulation(h, (-2.5, 0.0), 1.5, segments=64)
        _, _, d_fine = circulation(h, (-2.5, 0.0), 1.5, segments=1024)
        assert d_fine <= d_coarse + 1e-6

    def test_loop_through_vacuum_is_refused(self, grid128):
        h = vortex_pair_hydro(grid128)
        hv = HydroFields.create(h.sqrt_rho, h.Lambda, eps_vac=0.2)
        with pytest.raises(VacuumError):
            circulation(hv, (-2.5, 0.0), 0.2)

    def test_input_validation(self, grid128):
        h = positive_hydro(grid128)
        with pytest.raises(ValueError):
            circulation(h, (0.0, 0.0), -1.0)
        with pytest.raises(ValueError):
            circulation(h, (0.0, 0.0), 2.0, segments=32)
        rg = RadialGrid(d=3, n_r=64, r_max=10.0)
        hr = RadialHydro(
            ScalarField(rg, np.exp(-rg.nodes)),
            ScalarField(rg, np.zeros(rg.n_r)),
            1e-10,
        )
        with pytest.raises(UnsupportedGridError):
            circulation(hr, (0.0, 0.0), 2.0)


class TestKineticProfileDistance:
    def test_exact_rarefaction_profile_has_zero_distance(self, grid64):
        t = 2.5
        s = gaussian_bump(grid64, amplitude=0.8, width=1.5, floor=0.1)
        lam = np.stack([(x / t) * s for x in grid64.coords])
        h = HydroFields.create(
            ScalarField(grid64, s), VectorField(grid64, lam)
        )
        assert kinetic_profile_distance(h, t) == 0.0

    def test_zero_current_distance_is_scaled_second_moment(self, grid64):
        t = 4.0
        h = positive_hydro(grid64, lam_scale=0.0, floor=0.0, width=1.2)
        expected = np.sqrt(variance(h)) / t
        assert kinetic_profile_distance(h, t) == pytest.approx(
            expected, rel=1e-12
        )

    def test_validation(self, grid64):
        h = positive_hydro(grid64)
        with pytest.raises(ValueError):
            kinetic_profile_distance(h, 0.0)
        rg = RadialGrid(d=3, n_r=64, r_max=10.0)
        hr = RadialHydro(
            ScalarField(rg, np.exp(-rg.nodes)),
            ScalarField(rg, np.zeros(rg.n_r)),
            1e-10,
        )
        with pytest.raises(UnsupportedGridError):
            kinetic_profile_distance(hr, 1.0)


class TestLocateMinima:
    def dips(self, grid, a=(1.23, -2.41), b=(-4.57, 3.89)):
        x1, x2 = grid.coords
        rho = (
            1.0
            - 0.7 * np.exp(-((x1 - a[0]) ** 2 + (x2 - a[1]) ** 2) / 1.28)
            - 0.4 * np.exp(-((x1 - b[0]) ** 2 + (x2 - b[1]) ** 2) / 1.28)
        )
        return ScalarField(grid, rho)

    def test_finds_depth_ordered_subgrid_positions(self, grid128):
        rho = self.dips(grid128)
        pos = locate_minima(rho, 2, min_separation=2.0)
        # deepest dip first; quadratic refinement beats the spacing by far
        assert np.max(np.abs(pos[0] - [1.23, -2.41])) < 2e-3
        assert np.max(np.abs(pos[1] - [-4.57, 3.89])) < 2e-3
        assert grid128.spacing > 0.15  # the gate above is sub-grid by 50x

    def test_wraps_around_the_periodic_boundary(self, grid128):
        x1, x2 = grid128.coords
        d1 = np.minimum(np.abs(x1 - 9.9), 20.0 - np.abs(x1 - 9.9))
        rho = 1.0 - 0.5 * np.exp(-(d1**2 + x2**2) / 1.28)
        pos = locate_minima(ScalarField(grid128, rho), 1, min_separation=2.0)
        assert abs(pos[0, 0] - 9.9) < 2e-2 or abs(pos[0, 0] + 10.1) < 2e-2
        assert abs(pos[0, 1]) < 2e-2

    def test_too_many_requested_minima(self, grid128):
        # a separation beyond the periodic diameter merges every candidate
        # into the first, so a second minimum cannot exist
        rho = self.dips(grid128)
        with pytest.raises(ValueError, match="1 of 2"):
            locate_minima(rho, 2, min_separation=15.0)

    def test_separation_merges_nearby_candidates(self, grid128):
        # a single wide dip shows one refined minimum even if discrete
        # neighbours tie; a huge separation still returns the deepest one
        rho = self.dips(grid128)
        pos = locate_minima(rho, 1, min_separation=15.0)
        assert np.max(np.abs(pos[0] - [1.23, -2.41])) < 2e-3

    def test_rejects_radial_data(self):
        rg = RadialGrid(d=3, n_r=64, r_max=10.0)
        with pytest.raises(UnsupportedGridError):
            locate_minima(ScalarField(rg, np.exp(-rg.nodes)), 1, 1.0)
