"""Model builders and dressed-ladder predictors."""

import numpy as np
import pytest

from mollow import (
    BundleParams,
    RFParams,
    RegimeError,
    SensorSpec,
    bundle_model,
    bundle_reference_model,
    dressed_structure,
    embed,
    expval,
    filtered_g2,
    g2_tau_unfiltered,
    leapfrog_lines,
    liouvillian,
    rf_model,
    sigma_minus,
    spectrum_qrt,
    steady_state,
)
from mollow.models import check_truncation, truncation_tail

from oracles import bloch_steady_excited


class TestRFModel:
    def test_zero_drive_zero_detuning_gives_zero_hamiltonian(self):
        model = rf_model(RFParams(0.0, 0.0))
        assert np.abs(model.hamiltonian.matrix).max() == 0.0

    def test_structure(self):
        model = rf_model(RFParams(5.0, 1.0))
        assert model.layout.labels == ("2LS",)
        assert model.hamiltonian.is_hermitian()
        assert len(model.collapses) == 1
        assert model.collapses[0][0] == 1.0
        assert liouvillian(model).max_trace_violation() < 1e-10

    def test_steady_population_matches_bloch(self):
        model = rf_model(RFParams(1.0))
        rho = steady_state(liouvillian(model))
        ne = expval(rho, model.emission_op.dag() @ model.emission_op).real
        assert abs(ne - bloch_steady_excited(1.0)) < 1e-12

    def test_rejects_negative_rabi(self):
        with pytest.raises(ValueError):
            RFParams(-1.0)


class TestDressedStructure:
    def test_splitting_tracks_rabi_when_strong(self):
        s = dressed_structure(RFParams(20.0))
        assert abs(s.splitting - 20.0) / 20.0 < 0.01

    def test_positions_match_spectrum_peaks(self):
        # 401 points: one grid step also covers the slight pull of the
        # satellite maxima toward the centre by the central peak's tail
        for rabi in (10.0, 20.0, 40.0):
            s = dressed_structure(RFParams(rabi))
            grid = np.linspace(-1.5 * s.splitting, 1.5 * s.splitting, 401)
            step = grid[1] - grid[0]
            vals = spectrum_qrt(rf_model(RFParams(rabi)), grid).values
            peaks = grid[
                [
                    i
                    for i in range(1, len(vals) - 1)
                    if vals[i] > vals[i - 1] and vals[i] > vals[i + 1]
                ]
            ]
            np.testing.assert_allclose(peaks, s.line_positions, atol=step)

    def test_overdamped_raises(self):
        with pytest.raises(RegimeError):
            dressed_structure(RFParams(0.1))

    def test_splitting_monotone_in_rabi(self):
        rabis = np.linspace(2.0, 50.0, 25)
        values = [dressed_structure(RFParams(r)).splitting for r in rabis]
        assert np.all(np.diff(values) > 0)

    def test_structural_identities(self):
        s = dressed_structure(RFParams(20.0))
        assert s.line_positions == (-s.splitting, 0.0, s.splitting)
        assert s.leapfrog_sums == s.line_positions


class TestLeapfrogLines:
    def test_sums_are_the_line_positions(self):
        s = dressed_structure(RFParams(20.0))
        assert leapfrog_lines(RFParams(20.0)) == (-s.splitting, 0.0, s.splitting)

    def test_sums_symmetric_under_exchange(self):
        # the locus w1 + w2 = s is invariant when (w1, w2) -> (w2, w1)
        sums = leapfrog_lines(RFParams(20.0))
        for s in sums:
            w1 = 0.3 * s + 1.0
            w2 = s - w1
            assert (w2 + w1) == pytest.approx(s)

    def test_central_line_off_peak_points_bunched(self):
        params = RFParams(20.0)
        model = rf_model(params)
        wp = dressed_structure(params).splitting
        for x in (0.3, 0.45, 0.6, 0.75, 1.2):
            res = filtered_g2(
                model,
                SensorSpec(x * wp, 0.5),
                SensorSpec(-x * wp, 0.5),
            )
            assert res.value > 1.0, f"central-line point {x} not bunched"


class TestBundleModel:
    PARAMS = RFParams(20.0)

    def test_invariant_validation(self):
        with pytest.raises(ValueError):
            BundleParams(1, 0.05, 0.1, 8)
        with pytest.raises(ValueError):
            BundleParams(2, 0.05, 0.1, 5)  # below 2n+2
        with pytest.raises(ValueError):
            BundleParams(2, 0.05, -0.1, 8)

    def test_decoupled_cavity_is_empty_and_emitter_unchanged(self):
        bundle = bundle_model(self.PARAMS, BundleParams(2, 0.0, 0.1, 6))
        rho = steady_state(liouvillian(bundle))
        a = bundle.emission_op
        assert abs(expval(rho, a.dag() @ a)) < 1e-12
        sm = embed(sigma_minus(), bundle.layout, "2LS")
        ne_bundle = expval(rho, sm.dag() @ sm).real
        plain = rf_model(self.PARAMS)
        ne_plain = expval(
            steady_state(liouvillian(plain)),
            plain.emission_op.dag() @ plain.emission_op,
        ).real
        assert abs(ne_bundle - ne_plain) < 1e-10

    def test_two_photon_placement_enhances_bunching(self):
        b = BundleParams(2, 0.05, 0.1, 8)
        g2_half = g2_tau_unfiltered(bundle_model(self.PARAMS, b), [0.0]).values[0]
        g2_peak = g2_tau_unfiltered(
            bundle_reference_model(self.PARAMS, b), [0.0]
        ).values[0]
        assert g2_half > g2_peak

    def test_truncation_doubling_stable(self):
        def population(truncation):
            model = bundle_model(self.PARAMS, BundleParams(2, 0.05, 0.1, truncation))
            rho = steady_state(liouvillian(model))
            return expval(rho, model.emission_op.dag() @ model.emission_op).real

        small, big = population(8), population(16)
        assert abs(small - big) / big < 1e-3

    def test_truncation_tail_checked(self):
        good = bundle_model(self.PARAMS, BundleParams(2, 0.05, 0.1, 8))
        assert check_truncation(good) < 1e-6
        # a hot cavity crammed into the minimum Fock space must be caught
        from mollow import TruncationError

        hot = bundle_model(RFParams(3.0), BundleParams(2, 1.5, 0.05, 6))
        assert truncation_tail(hot) > 1e-6
        with pytest.raises(TruncationError):
            check_truncation(hot)
