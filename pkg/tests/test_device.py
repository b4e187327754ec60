import json
import math

import mpmath
import numpy as np
import pytest

from conftest import random_device
from fluxgate import device as dev
from fluxgate.device import TWO_PI
from fluxgate.errors import ConfigError, DomainError


class TestQubitFrequency:
    def test_zero_flux_is_idle_frequency(self, params):
        assert dev.qubit_frequency(params, 0.0) == pytest.approx(params.omega1, rel=1e-15)

    def test_closed_form_against_high_precision(self, params):
        # Independent arbitrary-precision evaluation of the same closed form.
        phi = math.pi / 3.0
        with mpmath.workdps(50):
            w1 = mpmath.mpf(params.omega1)
            a1 = mpmath.mpf(params.alpha1)
            expected = float((w1 - a1) * mpmath.sqrt(mpmath.cos(mpmath.mpf(phi))) + a1)
        assert dev.qubit_frequency(params, phi) == pytest.approx(expected, rel=1e-14)
        assert dev.qubit_frequency(params, phi) == pytest.approx(TWO_PI * 4.0692, abs=2e-4 * TWO_PI)

    def test_monotone_decrease(self, params):
        grid = np.linspace(0.0, 0.5 * math.pi - 0.01, 1000)
        values = dev.qubit_frequency(params, grid)
        assert np.all(np.diff(values) < 0.0)
        assert dev.qubit_frequency(params, 0.3) > dev.qubit_frequency(params, 0.4)

    @pytest.mark.parametrize("phi", [-0.1, 0.5 * math.pi, 2.0])
    def test_domain_error(self, params, phi):
        with pytest.raises(DomainError):
            dev.qubit_frequency(params, phi)


class TestLevelFrequency:
    def test_ground_level_is_zero(self, params):
        assert dev.level_frequency(params, 1, 0, 0.3) == 0.0
        assert dev.level_frequency(params, 2, 0, 0.3) == 0.0

    def test_second_level_matches_transition_sum(self, params):
        # omega_2 must equal the 0-1 plus 1-2 transition frequencies.
        direct = dev.level_frequency(params, 1, 2, 0.0)
        w01 = dev.qubit_frequency(params, 0.0)
        w12 = w01 + params.alpha1
        assert direct == pytest.approx(w01 + w12, rel=1e-14)
        assert direct == pytest.approx(2.0 * params.omega1 + params.alpha1, rel=1e-14)

    def test_static_transmon_ignores_flux(self, params):
        values = [dev.level_frequency(params, 2, 1, phi) for phi in (0.0, 0.3, 0.5)]
        assert all(v == pytest.approx(TWO_PI * 5.031, rel=1e-14) for v in values)

    def test_invalid_indices(self, params):
        with pytest.raises(DomainError):
            dev.level_frequency(params, 3, 1, 0.0)
        with pytest.raises(DomainError):
            dev.level_frequency(params, 1, 3, 0.0)


class TestHamiltonian:
    def test_decoupled_is_diagonal_bare_sums(self, decoupled_params):
        ham = dev.build_hamiltonian(decoupled_params, 0.0)
        assert np.all(ham == np.diag(np.diag(ham)))
        idx = dev.BASIS_LABELS.index((1, 1))
        expected = decoupled_params.omega1 + decoupled_params.omega2
        assert ham[idx, idx] == pytest.approx(expected, rel=1e-15)

    def test_exchange_matrix_elements(self, params):
        ham = dev.build_hamiltonian(params, 0.0)
        i10 = dev.BASIS_LABELS.index((1, 0))
        i01 = dev.BASIS_LABELS.index((0, 1))
        i20 = dev.BASIS_LABELS.index((2, 0))
        i11 = dev.BASIS_LABELS.index((1, 1))
        assert ham[i10, i01] == pytest.approx(params.g, rel=1e-15)
        assert ham[i20, i11] == pytest.approx(params.g * math.sqrt(2.0), rel=1e-15)

    @pytest.mark.parametrize("corner", [(0, 0), (2, 2)])
    def test_interaction_avoids_corner_states(self, corner):
        h_int = dev.interaction_matrix()
        k = dev.BASIS_LABELS.index(corner)
        assert np.all(h_int[k, :] == 0.0)
        assert np.all(h_int[:, k] == 0.0)

    def test_hermiticity_random_instances(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            p = random_device(rng)
            ham = dev.build_hamiltonian(p, rng.uniform(0.0, 1.4))
            scale = np.linalg.norm(ham)
            assert np.max(np.abs(ham - ham.conj().T)) <= 1e-12 * scale

    def test_decoupled_eigenvalues_are_bare_sums(self, decoupled_params):
        for phi in (0.0, 0.4):
            ham = dev.build_hamiltonian(decoupled_params, phi)
            eigs = np.linalg.eigvalsh(ham)
            bare = np.sort(dev.bare_energies(decoupled_params, phi))
            assert np.max(np.abs(eigs - bare)) <= 1e-12


class TestBlockStructure:
    def test_default_device(self, params):
        ok, deviation = dev.check_block_structure(params)
        assert ok
        assert deviation <= 1e-12

    def test_decoupled_gives_zero_blocks(self, decoupled_params):
        ok, deviation = dev.check_block_structure(decoupled_params)
        assert ok
        assert deviation == 0.0

    def test_linear_in_coupling(self, params):
        order = dev.coupled_block_basis(params)
        idx = [dev.BASIS_LABELS.index(lab) for lab in order]
        single = (params.g * dev.interaction_matrix())[np.ix_(idx, idx)]
        doubled_params = dev.DeviceParams(
            omega1=params.omega1,
            omega2=params.omega2,
            alpha1=params.alpha1,
            alpha2=params.alpha2,
            g=2.0 * params.g,
        )
        doubled = (doubled_params.g * dev.interaction_matrix())[np.ix_(idx, idx)]
        assert np.array_equal(doubled, 2.0 * single)
        assert dev.check_block_structure(doubled_params)[0]

    def test_random_devices(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            ok, deviation = dev.check_block_structure(random_device(rng))
            assert ok, f"block deviation {deviation}"


class TestDeviceConfig:
    def _write(self, tmp_path, payload):
        path = tmp_path / "device.json"
        path.write_text(json.dumps(payload))
        return path

    def test_round_trip(self, tmp_path):
        path = self._write(
            tmp_path,
            {
                "omega1_ghz": 5.889,
                "omega2_ghz": 5.031,
                "alpha1_mhz": -324.3,
                "alpha2_mhz": -234.7,
                "g_mhz": 24.7,
                "t1_us": [25.5, 48.8],
                "t2_us": 13.3,
            },
        )
        loaded = dev.load_device(path)
        reference = dev.default_device()
        assert loaded.omega1 == pytest.approx(reference.omega1, rel=1e-15)
        assert loaded.alpha2 == pytest.approx(reference.alpha2, rel=1e-15)
        assert loaded.g == pytest.approx(reference.g, rel=1e-15)
        assert loaded.t1_us == (25.5, 48.8)
        assert loaded.t2_us == (13.3, 13.3)

    def test_unknown_key_rejected(self, tmp_path):
        path = self._write(
            tmp_path,
            {
                "omega1_ghz": 5.889,
                "omega2_ghz": 5.031,
                "alpha1_mhz": -324.3,
                "alpha2_mhz": -234.7,
                "g_mhz": 24.7,
                "flux_offset": 0.1,
            },
        )
        with pytest.raises(ConfigError, match="unknown device keys"):
            dev.load_device(path)

    def test_missing_key_rejected(self, tmp_path):
        path = self._write(tmp_path, {"omega1_ghz": 5.889})
        with pytest.raises(ConfigError, match="missing device keys"):
            dev.load_device(path)

    def test_invariants_enforced(self):
        base = dict(
            omega1=TWO_PI * 5.889,
            omega2=TWO_PI * 5.031,
            alpha1=-TWO_PI * 0.3243,
            alpha2=-TWO_PI * 0.2347,
            g=TWO_PI * 0.0247,
        )
        with pytest.raises(ConfigError):
            dev.DeviceParams(**{**base, "omega2": TWO_PI * 6.0})
        with pytest.raises(ConfigError):
            dev.DeviceParams(**{**base, "alpha1": TWO_PI * 0.3})
        with pytest.raises(ConfigError):
            dev.DeviceParams(**{**base, "g": TWO_PI * 1.0})
        with pytest.raises(ConfigError):
            dev.DeviceParams(**{**base, "levels_per_transmon": 4})
