"""Flux-dependent model of two capacitively coupled tunable transmons.

Each transmon is truncated to three levels, so the coupled system lives in a
9-dimensional Hilbert space spanned by ``|i,j> = |i>_1 (x) |j>_2`` with
``i, j in {0, 1, 2}`` in lexicographic order.  Transmon 1 is the
flux-tunable, higher-frequency qubit; transmon 2 is static.

Units contract: every frequency stored in :class:`DeviceParams` and returned
by functions in this module is angular, in rad/ns.  Times are in ns and the
reduced external flux ``phi`` is in radians on ``[0, pi/2)``.  Configuration
files use lab units (GHz, MHz) and are converted once at the boundary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

TWO_PI = 2.0 * math.pi

#: Number of retained levels per transmon.  The block-structure analysis and
#: the 9-state basis below assume exactly this truncation.
LEVELS_PER_TRANSMON = 3

DIM = LEVELS_PER_TRANSMON**2

#: Pauli X and the two Gell-Mann matrices that appear in the restricted
#: interaction block.  lambda_1 couples the first two qutrit levels,
#: lambda_6 the last two; lambda_2 / lambda_7 are their imaginary partners
#: (used by the rotating-frame generator in :mod:`fluxgate.metrics`).
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
LAMBDA_1 = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
LAMBDA_2 = np.array([[0.0, -1.0j, 0.0], [1.0j, 0.0, 0.0], [0.0, 0.0, 0.0]])
LAMBDA_6 = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]])
LAMBDA_7 = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0j], [0.0, 1.0j, 0.0]])

#: Bare product states in tensor order, as (i, j) pairs.
BASIS_LABELS = [(i, j) for i in range(3) for j in range(3)]

_DEVICE_KEYS_REQUIRED = {"omega1_ghz", "omega2_ghz", "alpha1_mhz", "alpha2_mhz", "g_mhz"}
_DEVICE_KEYS_OPTIONAL = {"t1_us", "t2_us"}


@dataclass(frozen=True)
class DeviceParams:
    """Static parameters of the coupled two-transmon device.

    Attributes
    ----------
    omega1, omega2:
        Angular qubit frequencies at zero flux (rad/ns), ``omega1 > omega2``.
    alpha1, alpha2:
        Anharmonicities (rad/ns), negative for transmons.
    g:
        Capacitive coupling strength (rad/ns).  ``g = 0`` is admitted for
        decoupled diagnostics even though a physical device has ``g > 0``.
    t1_us, t2_us:
        Coherence times in microseconds.  Parsed from configuration files for
        completeness but unused: the model is closed (no decoherence).
    """

    omega1: float
    omega2: float
    alpha1: float
    alpha2: float
    g: float
    levels_per_transmon: int = LEVELS_PER_TRANSMON
    t1_us: tuple[float, float] | None = None
    t2_us: tuple[float, float] | None = None

    def __post_init__(self):
        if self.levels_per_transmon != LEVELS_PER_TRANSMON:
            raise ConfigError(
                f"levels_per_transmon is fixed at {LEVELS_PER_TRANSMON}, "
                f"got {self.levels_per_transmon}"
            )
        if not (self.omega1 > self.omega2 > 0.0):
            raise ConfigError("require omega1 > omega2 > 0")
        if self.alpha1 >= 0.0 or self.alpha2 >= 0.0:
            raise ConfigError("anharmonicities must be negative")
        if self.g < 0.0:
            raise ConfigError("coupling strength must be nonnegative")
        if self.g >= abs(self.omega1 - self.omega2):
            raise ConfigError("require g < |omega1 - omega2| (dispersive idle point)")

    @property
    def detuning(self) -> float:
        """Qubit-frequency detuning Delta = omega1 - omega2 at zero flux."""
        return self.omega1 - self.omega2


def default_device() -> DeviceParams:
    """Device parameters used throughout: 5.889/5.031 GHz qubits,
    -324.3/-234.7 MHz anharmonicities, 24.7 MHz coupling."""
    return DeviceParams(
        omega1=TWO_PI * 5.889,
        omega2=TWO_PI * 5.031,
        alpha1=-TWO_PI * 0.3243,
        alpha2=-TWO_PI * 0.2347,
        g=TWO_PI * 0.0247,
        t1_us=(25.5, 48.8),
        t2_us=(13.3, 28.4),
    )


def load_device(path) -> DeviceParams:
    """Load device parameters from a JSON file.

    Expected keys: ``omega1_ghz``, ``omega2_ghz``, ``alpha1_mhz``,
    ``alpha2_mhz``, ``g_mhz``; optional ``t1_us``, ``t2_us`` (scalar or
    two-element list, accepted and ignored by the physics).  Parsing is
    strict: unknown keys raise :class:`ConfigError`.
    """
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read device file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"device file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("device file must contain a JSON object")

    unknown = set(raw) - _DEVICE_KEYS_REQUIRED - _DEVICE_KEYS_OPTIONAL
    if unknown:
        raise ConfigError(f"unknown device keys: {sorted(unknown)}")
    missing = _DEVICE_KEYS_REQUIRED - set(raw)
    if missing:
        raise ConfigError(f"missing device keys: {sorted(missing)}")

    def _coherence(key):
        if key not in raw:
            return None
        val = raw[key]
        if isinstance(val, (int, float)):
            return (float(val), float(val))
        return (float(val[0]), float(val[1]))

    return DeviceParams(
        omega1=TWO_PI * float(raw["omega1_ghz"]),
        omega2=TWO_PI * float(raw["omega2_ghz"]),
        alpha1=TWO_PI * float(raw["alpha1_mhz"]) / 1000.0,
        alpha2=TWO_PI * float(raw["alpha2_mhz"]) / 1000.0,
        g=TWO_PI * float(raw["g_mhz"]) / 1000.0,
        t1_us=_coherence("t1_us"),
        t2_us=_coherence("t2_us"),
    )


def validate_flux(phi) -> np.ndarray:
    """Check that all flux values lie in [0, pi/2) and return them as an array."""
    arr = np.asarray(phi, dtype=float)
    if np.any(arr < 0.0) or np.any(arr >= 0.5 * math.pi):
        raise DomainError("reduced flux must lie in [0, pi/2)")
    return arr


def qubit_frequency(params: DeviceParams, phi):
    """Flux-dependent 0-1 transition frequency of transmon 1 (rad/ns).

    The tuned qubit follows ``(omega1 - alpha1) * sqrt(cos(phi)) + alpha1``,
    the standard junction-energy square-root law with the anharmonicity held
    fixed.  It equals ``omega1`` at ``phi = 0`` and decreases strictly on
    the domain.  Accepts scalars or arrays.
    """
    arr = validate_flux(phi)
    out = (params.omega1 - params.alpha1) * np.sqrt(np.cos(arr)) + params.alpha1
    return float(out) if np.isscalar(phi) else out


def level_frequency(params: DeviceParams, transmon_index: int, level: int, phi):
    """Bare energy of ``level`` on one transmon (rad/ns), relative to its ground state.

    Duffing ladder: ``omega_j = j*omega_q + (alpha/2) * j * (j-1)``.  Only
    transmon 1 (index 1) is flux-tuned; transmon 2 ignores ``phi``.
    """
    if transmon_index not in (1, 2):
        raise DomainError("transmon_index must be 1 or 2")
    if level not in (0, 1, 2):
        raise DomainError("level index must be 0, 1 or 2")
    if transmon_index == 1:
        omega_q = qubit_frequency(params, phi)
        alpha = params.alpha1
    else:
        validate_flux(phi)
        base = np.zeros_like(np.asarray(phi, dtype=float)) + params.omega2
        omega_q = float(base) if np.isscalar(phi) else base
        alpha = params.alpha2
    return level * omega_q + 0.5 * alpha * level * (level - 1)


def bare_energies(params: DeviceParams, phi) -> np.ndarray:
    """Uncoupled level-sum energies of the 9 product states at flux ``phi``.

    Returns shape (9,) for scalar input or (n, 9) when ``phi`` is an array,
    ordered like :data:`BASIS_LABELS`.
    """
    arr = validate_flux(phi)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    omega_q1 = (params.omega1 - params.alpha1) * np.sqrt(np.cos(arr)) + params.alpha1
    levels_1 = np.stack(
        [np.zeros_like(arr), omega_q1, 2.0 * omega_q1 + params.alpha1], axis=-1
    )
    levels_2 = np.array(
        [0.0, params.omega2, 2.0 * params.omega2 + params.alpha2]
    )
    energies = levels_1[:, :, None] + levels_2[None, None, :]
    energies = energies.reshape(arr.shape[0], DIM)
    return energies[0] if scalar else energies


def interaction_matrix() -> np.ndarray:
    """The exchange coupling ``a (x) a^dag + a^dag (x) a`` on the truncated space."""
    a = np.diag(np.sqrt([1.0, 2.0]), k=1)
    return np.kron(a, a.T) + np.kron(a.T, a)


_H_INT = interaction_matrix()


def build_hamiltonian(params: DeviceParams, phi) -> np.ndarray:
    """Coupled 9x9 Hamiltonian at flux ``phi`` (rad/ns), Hermitian and real.

    Diagonal part is the bare level sums; off-diagonal part is the
    excitation-swapping coupling ``g (a (x) a^dag + a^dag (x) a)``.  For an
    array of fluxes, returns a stacked array of shape (n, 9, 9).
    """
    energies = bare_energies(params, phi)
    if energies.ndim == 1:
        return np.diag(energies) + params.g * _H_INT
    out = np.zeros((energies.shape[0], DIM, DIM))
    idx = np.arange(DIM)
    out[:, idx, idx] = energies
    out += params.g * _H_INT
    return out


def coupled_block_basis(params: DeviceParams) -> list[tuple[int, int]]:
    """The seven interacting product states, ordered by bare energy at phi=0.

    Drops ``|0,0>`` and ``|2,2>``, which the exchange coupling never
    connects to anything in the truncated space.
    """
    energies = bare_energies(params, 0.0)
    keep = [k for k, lab in enumerate(BASIS_LABELS) if lab not in ((0, 0), (2, 2))]
    keep.sort(key=lambda k: energies[k])
    return [BASIS_LABELS[k] for k in keep]


def check_block_structure(params: DeviceParams) -> tuple[bool, float]:
    """Verify the interaction's block-diagonal form on the 7 coupled states.

    In the bare-energy ordering of :func:`coupled_block_basis`, the coupling
    must equal ``diag(g*sigma_x, g*sqrt(2)*(lambda_1 + lambda_6), 2g*sigma_x)``:
    a single-excitation swap block, the three-state ladder around ``|1,1>``,
    and the double-excitation swap block.  Returns ``(ok, max_deviation)``
    with ``ok`` true when the maximum absolute entry deviation is <= 1e-12.
    """
    order = coupled_block_basis(params)
    idx = [BASIS_LABELS.index(lab) for lab in order]
    restricted = (params.g * _H_INT)[np.ix_(idx, idx)]

    expected = np.zeros((7, 7))
    expected[0:2, 0:2] = params.g * SIGMA_X
    expected[2:5, 2:5] = params.g * math.sqrt(2.0) * (LAMBDA_1 + LAMBDA_6).real
    expected[5:7, 5:7] = 2.0 * params.g * SIGMA_X

    deviation = float(np.max(np.abs(restricted - expected)))
    return deviation <= 1e-12, deviation
