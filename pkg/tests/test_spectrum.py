import math

import numpy as np
import pytest

from fluxgate import device as dev
from fluxgate import spectrum as spc
from fluxgate.errors import DomainError

#: Published locations of the five avoided crossings for the default device.
REFERENCE_CROSSINGS = {
    "A2": 0.5815988,
    "A5": 0.6951558,
    "A3": 0.7145798,
    "A1": 0.7334230,
    "A4": 0.8241256,
}


class TestTracking:
    def test_decoupled_curves_are_bare_sums(self, tracked_g0, decoupled_params):
        bare = dev.bare_energies(decoupled_params, tracked_g0.phi_grid)
        for k, label in enumerate(dev.BASIS_LABELS):
            idx = tracked_g0._index(label)
            assert np.max(np.abs(tracked_g0.energies[idx] - bare[:, k])) == 0.0

    def test_decoupled_sum_rule(self, tracked_g0):
        # omega_ij = omega_i0 + omega_0j exactly when the coupling is off.
        for i in range(3):
            for j in range(3):
                combined = tracked_g0.energies[tracked_g0._index((i, j))]
                split = (
                    tracked_g0.energies[tracked_g0._index((i, 0))]
                    + tracked_g0.energies[tracked_g0._index((0, j))]
                )
                assert np.max(np.abs(combined - split)) <= 1e-12

    def test_idle_point_labels_are_bare_like(self, tracked):
        overlaps = np.abs(np.diagonal(tracked.vectors[0]))
        assert overlaps.min() >= 0.99

    def test_assignment_is_bijection(self, tracked):
        for k in (0, len(tracked.phi_grid) // 2, -1):
            vecs = tracked.vectors[k]
            gram = np.abs(vecs.conj().T @ vecs)
            assert np.max(np.abs(gram - np.eye(dev.DIM))) <= 1e-12

    def test_orthonormality_across_grid(self, tracked):
        eye = np.eye(dev.DIM)
        gram = np.einsum("kiv,kiw->kvw", tracked.vectors, tracked.vectors)
        assert np.max(np.abs(gram - eye)) <= 1e-12

    def test_refinement_leaves_samples_unchanged(self, params):
        coarse = spc.track_spectrum(params, phi_max=0.7, steps=301)
        fine = spc.track_spectrum(params, phi_max=0.7, steps=601)
        for label in ((1, 1), (2, 0), (0, 2), (1, 0)):
            ci = coarse._index(label)
            fi = fine._index(label)
            assert np.max(np.abs(coarse.energies[ci] - fine.energies[fi][::2])) <= 1e-9

    def test_dispersive_shift_second_order(self, tracked, params):
        # Second-order perturbation oracle for the |1,1> level at idle.
        delta = params.detuning
        shift = (
            -2.0 * params.g**2 / (delta + params.alpha1)
            + 2.0 * params.g**2 / (delta - params.alpha2)
        )
        predicted = params.omega1 + params.omega2 + shift
        actual = tracked.energies[tracked._index((1, 1)), 0]
        assert actual == pytest.approx(predicted, abs=5e-5 * dev.TWO_PI)

    def test_bad_arguments(self, params):
        with pytest.raises(DomainError):
            spc.track_spectrum(params, phi_max=2.0)
        with pytest.raises(DomainError):
            spc.track_spectrum(params, steps=1)


class TestDeviationFunctions:
    def test_delta_zero_at_idle(self, tracked):
        for label in ((0, 1), (1, 0), (1, 1)):
            assert tracked.delta_ij(label, 0.0) == 0.0

    def test_delta_nonnegative(self, tracked, a2):
        grid = np.linspace(0.0, a2, 400)
        for label in ((0, 1), (1, 0), (1, 1)):
            assert np.min(tracked.delta_ij(label, grid)) >= -1e-12

    def test_decoupled_delta_closed_form(self, tracked_g0, decoupled_params):
        grid = np.linspace(0.0, 0.6, 200)
        expected = (decoupled_params.omega1 - decoupled_params.alpha1) * (
            1.0 - np.sqrt(np.cos(grid))
        )
        assert np.max(np.abs(tracked_g0.delta_ij((1, 0), grid) - expected)) <= 1e-8
        assert np.max(np.abs(tracked_g0.delta_ij((0, 1), grid))) <= 1e-12

    def test_unknown_label_and_extrapolation(self, tracked):
        with pytest.raises(DomainError):
            tracked.delta_ij((3, 0), 0.1)
        with pytest.raises(DomainError):
            tracked.delta_ij((1, 1), tracked.phi_max + 0.1)

    def test_zeta_vanishes_at_idle_and_when_decoupled(self, tracked, tracked_g0):
        assert tracked.zeta(0.0) == 0.0
        grid = np.linspace(0.0, 0.6, 200)
        assert np.max(np.abs(tracked_g0.zeta(grid))) <= 1e-12

    def test_zeta_positive_and_increasing_below_crossing(self, tracked, a2):
        grid = np.linspace(1e-3, a2, 500)
        values = tracked.zeta(grid)
        assert np.all(values > 0.0)
        assert np.all(np.diff(values) > 0.0)

    def test_dzeta_flat_at_origin(self, tracked):
        with pytest.warns(UserWarning):
            slope = tracked.dzeta_dphi(0.0)
        assert abs(slope) <= 2e-3

    def test_dzeta_decoupled_is_zero(self, tracked_g0):
        assert abs(tracked_g0.dzeta_dphi(0.3)) <= 1e-9

    def test_dzeta_positive_below_crossing(self, tracked, a2):
        grid = np.linspace(0.05, a2 - 0.01, 50)
        assert np.all(tracked.dzeta_dphi(grid) > 0.0)

    def test_dzeta_richardson_oracle(self, tracked):
        # Richardson extrapolation of central differences at two steps.
        phi, h = 0.3, 2e-3
        d_h = (tracked.zeta(phi + h) - tracked.zeta(phi - h)) / (2.0 * h)
        d_h2 = (tracked.zeta(phi + h / 2) - tracked.zeta(phi - h / 2)) / h
        oracle = (4.0 * d_h2 - d_h) / 3.0
        assert tracked.dzeta_dphi(phi) == pytest.approx(oracle, rel=1e-6)


class TestCrossings:
    def test_reference_locations(self, crossings):
        for name, phi_ref in REFERENCE_CROSSINGS.items():
            assert name in crossings.locations
            assert crossings.locations[name] == pytest.approx(phi_ref, abs=5e-3)

    def test_ordering(self, crossings):
        assert crossings.ordered_names() == ["A2", "A5", "A3", "A1", "A4"]

    def test_gaps_positive(self, crossings):
        assert all(gap > 0.0 for gap in crossings.gaps.values())

    def test_gate_crossing_gap_two_level_oracle(self, crossings, params):
        # The |1,1>/|2,0> exchange element is g*sqrt(2), so the minimal
        # splitting of the two-level model is twice that.
        oracle = 2.0 * math.sqrt(2.0) * params.g
        assert crossings.gaps["A2"] == pytest.approx(oracle, rel=0.02)

    def test_location_stability(self, params, crossings):
        rerun = spc.find_crossings(params, coarse_steps=900)
        for name in crossings.locations:
            assert rerun.locations[name] == pytest.approx(
                crossings.locations[name], abs=1e-7
            )

    def test_attribute_access(self, crossings):
        assert crossings.A2 == crossings.locations["A2"]
