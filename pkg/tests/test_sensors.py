"""The weak-sensor filtering method."""

import numpy as np
import pytest

from mollow import (
    DimensionBudgetError,
    RFParams,
    SensorSpec,
    VanishingPopulationError,
    attach_sensors,
    dressed_structure,
    filtered_g2,
    filtered_g2_tau,
    filtered_gn,
    filtered_spectrum,
    liouvillian,
    rf_model,
    sensor_populations,
    spectrum_qrt,
    steady_state,
)
from mollow.sensors import epsilon_default, epsilon_max, sensor_number_ops
from conftest import pumped_2ls_model, thermal_mode_model

from oracles import lorentzian_convolve, mc_correlator, thermal_factorial_moment

WP20 = dressed_structure(RFParams(20.0)).splitting


class TestSensorSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            SensorSpec(0.0, -1.0)
        with pytest.raises(ValueError):
            SensorSpec(0.0, 1.0, epsilon=0.0)

    def test_epsilon_policy(self):
        specs = [SensorSpec(0.0, 0.5), SensorSpec(1.0, 2.0)]
        assert epsilon_default(specs) == pytest.approx(1e-3 * 0.5)
        assert epsilon_max(specs) == pytest.approx(1e-2 * 0.5)

    def test_epsilon_ceiling_enforced(self):
        model = rf_model(RFParams(5.0))
        too_strong = SensorSpec(0.0, 0.5, epsilon=0.1)
        with pytest.raises(ValueError):
            attach_sensors(model, [too_strong])


class TestAttachSensors:
    def test_structural(self):
        model = attach_sensors(rf_model(RFParams(5.0)), [SensorSpec(0.0, 1.0)])
        assert [d for _, d in model.layout.subsystems] == [2, 2]
        L = liouvillian(model)
        assert L.matrix.shape == (16, 16)
        assert L.max_trace_violation() < 1e-10

    def test_budget(self):
        specs = [SensorSpec(float(i), 1.0) for i in range(4)]
        with pytest.raises(DimensionBudgetError):
            attach_sensors(rf_model(RFParams(5.0)), specs)

    def test_dark_emitter_dark_sensor(self):
        # nothing drives the emitter, so the sensor sees nothing
        pops = sensor_populations(pumped_2ls_model(0.0), [SensorSpec(0.0, 1.0)])
        assert abs(pops[0]) < 1e-15

    def test_emission_op_preserved(self):
        base = rf_model(RFParams(5.0))
        model = attach_sensors(base, [SensorSpec(0.0, 1.0)])
        want = np.kron(base.emission_op.matrix, np.eye(2))
        np.testing.assert_array_equal(model.emission_op.matrix, want)


class TestFilteredSpectrum:
    def test_three_peaks_narrow_filter(self):
        grid = np.linspace(-1.5 * WP20, 1.5 * WP20, 301)
        res = filtered_spectrum(rf_model(RFParams(20.0)), 0.2, grid)
        s = res.values
        peaks = [i for i in range(1, len(s) - 1) if s[i] > s[i - 1] and s[i] > s[i + 1]]
        step = grid[1] - grid[0]
        assert len(peaks) == 3
        np.testing.assert_allclose(grid[peaks], [-WP20, 0.0, WP20], atol=step)

    def test_huge_filter_sees_its_own_lineshape(self):
        # Gamma = 100 gamma: the triplet structure washes out and the output
        # flattens toward the filter's own Lorentzian
        gamma_filter = 100.0
        grid = np.linspace(-80.0, 80.0, 161)
        res = filtered_spectrum(rf_model(RFParams(20.0)), gamma_filter, grid)
        s = res.values
        peaks = [i for i in range(1, len(s) - 1) if s[i] > s[i - 1] and s[i] > s[i + 1]]
        assert len(peaks) == 1
        lorentz = (gamma_filter / (2 * np.pi)) / (grid**2 + (gamma_filter / 2) ** 2)
        lorentz /= np.trapezoid(lorentz, grid)
        assert np.abs(s - lorentz).max() / lorentz.max() < 0.10

    def test_matches_convolution_oracle(self):
        gamma_filter = 1.0
        model = rf_model(RFParams(20.0))
        grid = np.linspace(-1.5 * WP20, 1.5 * WP20, 201)
        got = filtered_spectrum(model, gamma_filter, grid)
        ext = np.arange(grid[0] - 60.0, grid[-1] + 60.0, 0.025)
        raw = spectrum_qrt(model, ext)
        # raw.values are unit-area (the inelastic intensity); express the
        # elastic weight in the same units before convolving
        coherent = raw.coherent_weight / _inelastic_intensity(model)
        conv = lorentzian_convolve(
            ext, raw.values, coherent, gamma_filter / 2.0, grid
        )
        conv /= np.trapezoid(conv, grid)
        mask = got.values > 0.01 * got.values.max()
        rel = np.abs(got.values - conv)[mask] / conv[mask]
        assert rel.max() < 0.02


def _inelastic_intensity(model) -> float:
    rho = steady_state(liouvillian(model))
    from mollow import expval

    n = expval(rho, model.emission_op.dag() @ model.emission_op).real
    elastic = abs(expval(rho, model.emission_op)) ** 2
    return n - elastic


class TestFilteredG2:
    def test_central_satellite_antibunched(self):
        res = filtered_g2(
            rf_model(RFParams(20.0)),
            SensorSpec(WP20, 0.5),
            SensorSpec(0.0, 0.5),
        )
        assert res.value < 1.0

    def test_central_antidiagonal_bunched(self):
        res = filtered_g2(
            rf_model(RFParams(20.0)),
            SensorSpec(WP20 / 2.0, 0.5),
            SensorSpec(-WP20 / 2.0, 0.5),
        )
        assert res.value > 1.0

    def test_exchange_symmetry(self):
        model = rf_model(RFParams(20.0))
        s1 = SensorSpec(WP20, 0.5)
        s2 = SensorSpec(0.3, 0.5)
        a = filtered_g2(model, s1, s2).value
        b = filtered_g2(model, s2, s1).value
        assert abs(a - b) < 1e-10

    def test_drift_recorded_and_small(self):
        res = filtered_g2(
            rf_model(RFParams(20.0)), SensorSpec(0.0, 0.5), SensorSpec(0.0, 0.5)
        )
        assert np.isfinite(res.epsilon_drift)
        assert res.epsilon_drift < 0.01

    def test_wide_filter_recovers_color_blind_antibunching(self):
        res = filtered_g2(
            rf_model(RFParams(5.0)), SensorSpec(0.0, 30.0), SensorSpec(0.0, 30.0)
        )
        assert res.value < 0.1

    def test_far_detuned_sensor_is_an_error(self):
        with pytest.raises(VanishingPopulationError):
            filtered_g2(
                rf_model(RFParams(5.0)),
                SensorSpec(1e8, 0.5),
                SensorSpec(0.0, 0.5),
            )


class TestFilteredG2Tau:
    def test_zero_delay_matches_filtered_g2(self):
        model = rf_model(RFParams(20.0))
        s1 = SensorSpec(WP20, 0.5)
        s2 = SensorSpec(0.0, 0.5)
        zero_delay = filtered_g2(model, s1, s2).value
        curve = filtered_g2_tau(model, s1, s2, [0.0, 1.0])
        assert abs(curve.values[0] - zero_delay) < 1e-8

    def test_long_delay_factorizes(self):
        model = rf_model(RFParams(20.0))
        curve = filtered_g2_tau(
            model,
            SensorSpec(WP20, 0.5),
            SensorSpec(-WP20, 0.5),
            np.linspace(0.0, 50.0, 26),
        )
        assert abs(curve.values[-1] - 1.0) < 0.05

    def test_symmetric_peaks_smooth_and_nonnegative(self):
        model = rf_model(RFParams(20.0))
        taus = np.linspace(0.0, 4.0, 81)
        curve = filtered_g2_tau(
            model, SensorSpec(WP20, 0.5), SensorSpec(-WP20, 0.5), taus
        )
        assert curve.values.min() > -1e-9
        assert np.all(np.isfinite(curve.values))
        # smooth: bounded second difference relative to the curve scale
        second = np.abs(np.diff(curve.values, 2)).max()
        assert second < 0.1 * max(1.0, curve.values.max())

    def test_matches_trajectory_sampling(self):
        # the regression propagator is checked against an unnormalized
        # trajectory-sampling estimate of G(tau) on the augmented system
        from mollow import embed, expval, sigma_minus, vec
        from mollow.dynamics import evolve_vec

        model = rf_model(RFParams(20.0))
        eps = epsilon_default([SensorSpec(0.0, 0.5)])
        specs = [SensorSpec(WP20, 0.5, eps), SensorSpec(-WP20, 0.5, eps)]
        augmented = attach_sensors(model, specs)
        n1_op, n2_op = sensor_number_ops(augmented, 2)
        s1_op = embed(sigma_minus(), augmented.layout, augmented.layout.labels[-2])
        taus = [0.0, 1.0, 3.0]

        L = liouvillian(augmented)
        rho = steady_state(L)
        v0 = vec(s1_op.matrix @ rho.matrix @ s1_op.dag().matrix)
        exact_G = (evolve_vec(L, v0, taus) @ vec(n2_op.matrix.T)).real

        G, se, _, _ = mc_correlator(
            augmented.hamiltonian.matrix,
            [(r, c.matrix) for r, c in augmented.collapses],
            s1_op.matrix,
            n2_op.matrix,
            taus,
            n_traj=3000,
            seed=7,
        )
        assert np.all(np.abs(G - exact_G) < 3.0 * se)
        # and the public curve at the same coupling matches the raw ratio
        curve = filtered_g2_tau(model, specs[0], specs[1], taus)
        ratio = exact_G / (expval(rho, n1_op).real * expval(rho, n2_op).real)
        np.testing.assert_allclose(curve.values, ratio, rtol=0.01)


class TestFilteredGn:
    def test_n2_reduces_to_filtered_g2(self):
        model = rf_model(RFParams(20.0))
        s1 = SensorSpec(WP20 / 2, 0.5)
        s2 = SensorSpec(-WP20 / 2, 0.5)
        assert filtered_gn(model, [s1, s2]) == pytest.approx(
            filtered_g2(model, s1, s2).value, abs=1e-12
        )

    def test_thermal_wide_filters_give_six(self):
        # three wide filters on a thermal mode: full factorial bunching 3!
        pump = 0.05
        model = thermal_mode_model(pump, dim=6)
        specs = [SensorSpec(0.0, 30.0) for _ in range(3)]
        value = filtered_gn(model, specs)
        nbar = pump / (1.0 - pump)
        oracle = thermal_factorial_moment(nbar, 3) / nbar**3
        assert abs(oracle - 6.0) < 1e-10
        assert abs(value - oracle) / oracle < 0.10

    def test_permutation_invariance(self):
        model = rf_model(RFParams(20.0))
        specs = [
            SensorSpec(WP20, 0.5),
            SensorSpec(0.0, 0.5),
            SensorSpec(-WP20, 0.5),
        ]
        base = filtered_gn(model, specs)
        rotated = filtered_gn(model, [specs[2], specs[0], specs[1]])
        assert abs(base - rotated) < 1e-10


class TestEpsilonScaling:
    def test_populations_scale_quadratically(self):
        model = rf_model(RFParams(20.0))
        for omega in (0.0, WP20, WP20 / 2):
            eps = epsilon_default([SensorSpec(omega, 0.5)])
            big = sensor_populations(model, [SensorSpec(omega, 0.5, eps)])
            small = sensor_populations(model, [SensorSpec(omega, 0.5, eps / 2)])
            ratio = big[0] / small[0]
            assert abs(ratio - 4.0) < 0.04

    def test_filtered_value_stable_under_halving(self):
        model = rf_model(RFParams(20.0))
        eps = epsilon_default([SensorSpec(0.0, 0.5)])
        values = []
        for e in (eps, eps / 2):
            res = filtered_g2(
                model,
                SensorSpec(WP20 / 2, 0.5, e),
                SensorSpec(-WP20 / 2, 0.5, e),
            )
            values.append(res.value)
        assert abs(values[0] - values[1]) / values[1] < 0.01
