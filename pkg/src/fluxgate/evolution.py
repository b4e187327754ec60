"""Direct time-dependent simulation of the 9-level system under a flux pulse.

The lab-frame propagator is a time-ordered product of exact step
exponentials evaluated at interval midpoints (second-order accurate).  Gate
matrices are reported in the rotating frame of the idle-point bare
Hamiltonian, on the eight interacting-plus-ground basis states ordered by
bare energy.  The distance to an ideal CZ is the largest singular value of
the difference, computed raw, after single-qubit Z corrections, and after
an additional global-phase optimization, on three nested subspaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import minimize_scalar
from scipy.stats import kendalltau

from . import device as dev
from .errors import DomainError, FluxgateError
from .metrics import MetricConfig, n_norm
from .spectrum import TrackedSpectrum
from .trajectories import Trajectory, TrajectoryParams, calibrate_amplitude, peak_trajectory

FIDELITY_MODES = ("raw", "z_corrected", "phase_optimized")

#: Subspaces on which the gate distance is evaluated: the full eight-state
#: matrix with a zero-padded CZ, the four computational states, and the
#: three excited computational states (the form the gate matrices are
#: usually displayed in).
FIDELITY_SUBSPACES = ("full8", "qubit4", "ha3")

DEFAULT_DT = 1e-3
MAX_DT = 5e-3


def b8_labels(params: dev.DeviceParams) -> list[tuple[int, int]]:
    """The eight gate-relevant product states, ordered by bare energy.

    Everything except ``|2,2>``: the seven exchange-coupled states plus the
    inert ground state ``|0,0>``.
    """
    energies = dev.bare_energies(params, 0.0)
    keep = [k for k, lab in enumerate(dev.BASIS_LABELS) if lab != (2, 2)]
    keep.sort(key=lambda k: energies[k])
    return [dev.BASIS_LABELS[k] for k in keep]


@dataclass
class PropagatorResult:
    """Final-time propagators of one simulated trajectory.

    When a ``record_state`` was requested, ``populations`` holds the bare
    populations of that initial state at every step time in ``t_record``.
    """

    traj: Trajectory
    u_lab: np.ndarray
    u_rot: np.ndarray
    dt: float
    unitarity_defect: float
    record_state: tuple | None = None
    t_record: np.ndarray | None = None
    populations: np.ndarray | None = None


@dataclass
class GateReport:
    """Reconstructed gate matrix and its figures of merit.

    ``m`` is the 8x8 rotating-frame matrix ``<f|U|e>`` on :func:`b8_labels`
    order; ``m_qubit`` its restriction to the computational states.
    ``theta_adiabatic`` holds the phase integrals predicted from the tracked
    spectrum, ``theta_simulated`` the phases read off the matrix diagonal.
    ``fidelity`` maps subspace -> mode -> distance; the three headline
    fields carry the literal zero-extended eight-dimensional distances.
    """

    basis: list[tuple[int, int]]
    m: np.ndarray
    m_qubit: np.ndarray
    theta_adiabatic: dict
    theta_simulated: dict
    f_raw: float
    f_z_corrected: float
    f_phase_optimized: float
    fidelity: dict
    leakage_20: float
    unitarity_defect: float
    column_norm_max: float = field(default=0.0)


def propagate(
    traj: Trajectory,
    params: dev.DeviceParams,
    dt: float = DEFAULT_DT,
    record_state: tuple | None = None,
) -> PropagatorResult:
    """Time-ordered product of midpoint step exponentials of H(phi(t)).

    Each step is an exact Hermitian exponential via eigendecomposition, so
    unitarity is preserved to machine precision and the only error is the
    second-order midpoint commutator term.  The rotating frame is generated
    by the diagonal (uncoupled) part of H at zero flux.
    """
    if dt > MAX_DT:
        raise DomainError(f"dt = {dt} exceeds the {MAX_DT} ns step bound")
    span = float(traj.t_grid[-1] - traj.t_grid[0])
    e_max = float(np.max(np.abs(dev.bare_energies(params, 0.0))))
    if e_max * dt > 0.5:
        raise DomainError(
            f"dt too large to resolve the fastest phase: max|E|*dt = {e_max * dt:.3f} > 0.5"
        )
    n_steps = max(1, int(round(span / dt)))
    dt_eff = span / n_steps
    t_mid = traj.t_grid[0] + (np.arange(n_steps) + 0.5) * dt_eff
    phi_mid = traj.phi_at(t_mid)

    ham = dev.build_hamiltonian(params, phi_mid)
    vals, vecs = np.linalg.eigh(ham)
    phases = np.exp(-1j * vals * dt_eff)
    # V e^{-i E dt} V^T for every step (H is real symmetric).
    steps = np.einsum("kij,kj,klj->kil", vecs, phases, vecs)

    u = np.eye(dev.DIM, dtype=complex)
    populations = None
    if record_state is not None:
        psi = np.zeros(dev.DIM, dtype=complex)
        psi[dev.BASIS_LABELS.index(tuple(record_state))] = 1.0
        populations = np.empty((n_steps + 1, dev.DIM))
        populations[0] = np.abs(psi) ** 2
        for k in range(n_steps):
            u = steps[k] @ u
            psi = steps[k] @ psi
            populations[k + 1] = np.abs(psi) ** 2
    else:
        for k in range(n_steps):
            u = steps[k] @ u

    frame = np.exp(1j * dev.bare_energies(params, 0.0) * span)
    u_rot = frame[:, None] * u
    defect = float(np.linalg.norm(u.conj().T @ u - np.eye(dev.DIM), 2))
    t_record = None
    if record_state is not None:
        t_record = traj.t_grid[0] + np.arange(n_steps + 1) * dt_eff
    return PropagatorResult(
        traj=traj,
        u_lab=u,
        u_rot=u_rot,
        dt=dt_eff,
        unitarity_defect=defect,
        record_state=tuple(record_state) if record_state is not None else None,
        t_record=t_record,
        populations=populations,
    )


def adiabatic_phases(traj: Trajectory, spectrum: TrackedSpectrum) -> dict:
    """Phase integrals Theta_ij of the tracked eigenfrequency deviations (rad)."""
    out = {}
    for label in ((0, 1), (1, 0), (1, 1)):
        deltas = spectrum.delta_ij(label, traj.phi_samples)
        out[label] = float(simpson(deltas, x=traj.t_grid))
    return out


def cz_matrix(labels, subspace: str) -> np.ndarray:
    """CZ = I - 2|1,1><1,1| on the requested subspace of the given basis.

    On ``full8`` the 4x4 gate is extended with zeros on the non-qubit
    states, the literal comparison target for the 8x8 matrix.
    """
    qubit = {(0, 0), (0, 1), (1, 0), (1, 1)}
    if subspace == "full8":
        out = np.zeros((len(labels), len(labels)), dtype=complex)
        for k, lab in enumerate(labels):
            if lab in qubit:
                out[k, k] = -1.0 if lab == (1, 1) else 1.0
        return out
    keep = _subspace_indices(labels, subspace)
    out = np.eye(len(keep), dtype=complex)
    for k, idx in enumerate(keep):
        if labels[idx] == (1, 1):
            out[k, k] = -1.0
    return out


def _subspace_indices(labels, subspace: str) -> list[int]:
    if subspace == "full8":
        return list(range(len(labels)))
    if subspace == "qubit4":
        wanted = [(0, 0), (0, 1), (1, 0), (1, 1)]
    elif subspace == "ha3":
        wanted = [(0, 1), (1, 0), (1, 1)]
    else:
        raise DomainError(f"unknown fidelity subspace {subspace!r}")
    return [labels.index(lab) for lab in wanted]


def _z_correction(labels, theta: dict) -> np.ndarray:
    """Virtual-Z phases undoing the single-qubit parts of the adiabatic gate.

    Level ``i`` of transmon 1 acquires ``exp(-1j*i*Theta_10)``, level ``j``
    of transmon 2 ``exp(-1j*j*Theta_01)``; when the conditional-phase
    constraint holds this maps the adiabatic gate onto CZ exactly.
    """
    a = -theta[(1, 0)]
    b = -theta[(0, 1)]
    return np.array([np.exp(1j * (i * a + j * b)) for i, j in labels])


def fidelity_distance(
    report: GateReport, mode: str = "raw", subspace: str = "full8"
) -> float:
    """Spectral-norm distance from the reconstructed gate to the ideal CZ.

    ``raw`` compares the matrix as reconstructed; ``z_corrected`` first
    applies the adiabatic single-qubit Z corrections; ``phase_optimized``
    additionally minimizes over a global phase by a bracketed golden
    search over [0, 2*pi).
    """
    if mode not in FIDELITY_MODES:
        raise DomainError(f"unknown fidelity mode {mode!r}")
    labels = report.basis
    m_full = report.m.copy()
    if mode in ("z_corrected", "phase_optimized"):
        m_full = _z_correction(labels, report.theta_adiabatic)[:, None] * m_full
    idx = _subspace_indices(labels, subspace)
    m_sub = m_full[np.ix_(idx, idx)]
    target = cz_matrix(labels, subspace)

    def distance(theta: float) -> float:
        return float(
            np.linalg.norm(np.exp(1j * theta) * m_sub - target, 2)
        )

    if mode != "phase_optimized":
        return distance(0.0)

    thetas = np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
    values = [distance(th) for th in thetas]
    k = int(np.argmin(values))
    span = 2.0 * math.pi / 64
    res = minimize_scalar(
        distance,
        bracket=(thetas[k] - span, thetas[k], thetas[k] + span),
        method="golden",
        options={"xtol": 1e-12},
    )
    return float(min(res.fun, min(values)))


def reconstruct_gate(prop: PropagatorResult, spectrum: TrackedSpectrum) -> GateReport:
    """Build the gate matrix on the eight-state basis and score it.

    Initial and final states are the bare product vectors, which
    approximate the idle-point eigenstates in the weak-coupling regime.

    The bare rotating frame runs fast by the idle-point dispersive shifts
    (the difference between bare level sums and the coupled eigenvalues at
    zero flux), a constant rate that accumulates over the whole gate
    regardless of the pulse.  Those offsets are removed from the matrix
    here so its diagonal phases are directly comparable with the
    deviation integrals; with the coupling off the correction vanishes.
    """
    params = spectrum.params
    labels = b8_labels(params)
    idx = [dev.BASIS_LABELS.index(lab) for lab in labels]
    span = float(prop.traj.t_grid[-1] - prop.traj.t_grid[0])
    bare = dev.bare_energies(params, 0.0)
    offsets = np.array(
        [bare[dev.BASIS_LABELS.index(lab)] - spectrum.energy(lab, 0.0) for lab in labels]
    )
    m = np.exp(-1j * offsets * span)[:, None] * prop.u_rot[np.ix_(idx, idx)]
    qubit_idx = _subspace_indices(labels, "qubit4")
    m_qubit = m[np.ix_(qubit_idx, qubit_idx)]

    theta_adb = adiabatic_phases(prop.traj, spectrum)
    theta_sim = {
        lab: float(np.angle(m[labels.index(lab), labels.index(lab)]))
        for lab in ((0, 1), (1, 0), (1, 1))
    }
    leakage = float(abs(m[labels.index((2, 0)), labels.index((1, 1))]) ** 2)

    report = GateReport(
        basis=labels,
        m=m,
        m_qubit=m_qubit,
        theta_adiabatic=theta_adb,
        theta_simulated=theta_sim,
        f_raw=0.0,
        f_z_corrected=0.0,
        f_phase_optimized=0.0,
        fidelity={},
        leakage_20=leakage,
        unitarity_defect=prop.unitarity_defect,
        column_norm_max=float(np.linalg.norm(m, axis=0).max()),
    )
    report.fidelity = {
        sub: {mode: fidelity_distance(report, mode, sub) for mode in FIDELITY_MODES}
        for sub in FIDELITY_SUBSPACES
    }
    report.f_raw = report.fidelity["full8"]["raw"]
    report.f_z_corrected = report.fidelity["full8"]["z_corrected"]
    report.f_phase_optimized = report.fidelity["full8"]["phase_optimized"]
    return report


def simulate_gate(
    tp: TrajectoryParams,
    spectrum: TrackedSpectrum,
    dt: float = DEFAULT_DT,
    amplitude_mode: str = "pi",
    k: int = 0,
) -> GateReport:
    """End-to-end helper: prepare the trajectory, propagate, reconstruct.

    ``amplitude_mode`` is ``"pi"`` for phase calibration or ``"peak"`` for
    the maximal admissible amplitude.
    """
    if amplitude_mode == "pi":
        traj = calibrate_amplitude(tp, spectrum, k=k)
    elif amplitude_mode == "peak":
        traj = peak_trajectory(tp, spectrum)
    else:
        raise DomainError(f"unknown amplitude mode {amplitude_mode!r}")
    prop = propagate(traj, spectrum.params, dt=dt)
    return reconstruct_gate(prop, spectrum)


@dataclass
class RankReport:
    """Norm-versus-distance concordance table over a trajectory sample set."""

    rows: list
    kendall_tau: float | None
    n_pairs: int
    n_concordant: int
    n_discordant: int
    n_ties: int
    excluded: list
    fid_mode: str
    fid_subspace: str


def rank_check(
    samples: list[TrajectoryParams],
    spectrum: TrackedSpectrum,
    config: MetricConfig | None = None,
    amplitude_mode: str = "peak",
    dt: float = DEFAULT_DT,
    fid_mode: str = "z_corrected",
    fid_subspace: str = "qubit4",
    k: int = 0,
) -> RankReport:
    """Empirical test of the norm/fidelity order correspondence.

    For every sample the diabaticity norm and the simulated gate distance
    are computed; the report carries the full table, Kendall's tau between
    the two rankings, and explicit pair counts.  No pass/fail judgment is
    made: whether the two orders agree is exactly the open question this
    harness probes.  Samples whose preparation fails (unreachable
    calibration, degenerate shape) are excluded and reported.
    """
    if len(samples) < 2:
        raise DomainError("rank check needs at least 2 samples")
    config = config or MetricConfig()
    rows, excluded = [], []
    for tp in samples:
        try:
            if amplitude_mode == "pi":
                traj = calibrate_amplitude(tp, spectrum, k=k)
            else:
                traj = peak_trajectory(tp, spectrum)
            norm = n_norm(traj, spectrum, config)
            prop = propagate(traj, spectrum.params, dt=dt)
            report = reconstruct_gate(prop, spectrum)
        except FluxgateError as exc:
            excluded.append({"params": tp, "reason": str(exc)})
            continue
        rows.append(
            {
                "family": tp.family,
                "sigma": tp.sigma,
                "mu": tp.mu,
                "tau": tp.tau,
                "amplitude": traj.amplitude,
                "n_norm": norm,
                "fidelity_distance": report.fidelity[fid_subspace][fid_mode],
                "leakage_20": report.leakage_20,
            }
        )

    norms = np.array([r["n_norm"] for r in rows])
    fvals = np.array([r["fidelity_distance"] for r in rows])
    n_conc = n_disc = n_tie = 0
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            dn = norms[i] - norms[j]
            df = fvals[i] - fvals[j]
            if dn == 0.0 or df == 0.0:
                n_tie += 1
            elif (dn > 0) == (df > 0):
                n_conc += 1
            else:
                n_disc += 1
    if len(rows) >= 2 and np.ptp(norms) > 0 and np.ptp(fvals) > 0:
        tau_val = float(kendalltau(norms, fvals).statistic)
    else:
        tau_val = None

    order = np.argsort(norms)
    rows = [rows[k] for k in order]
    return RankReport(
        rows=rows,
        kendall_tau=tau_val,
        n_pairs=n_conc + n_disc + n_tie,
        n_concordant=n_conc,
        n_discordant=n_disc,
        n_ties=n_tie,
        excluded=excluded,
        fid_mode=fid_mode,
        fid_subspace=fid_subspace,
    )
