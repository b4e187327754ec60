"""Diabaticity measures: the trajectory semi-norm, the stationarity
residual, and the two-level interaction-subspace propagator.

The semi-norm integrates the tuned qubit's frequency deviation and the
square of its time derivative, so it penalizes both how far and how fast a
trajectory detunes the qubit.  The residual operator measures, pointwise in
time, how far a trajectory sits from the constrained variational optimum.
Both rank trajectories without any quantum simulation; the two-level
propagator is the cheap diagnostic for the main leakage channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from . import device as dev
from .errors import DomainError
from .spectrum import TrackedSpectrum
from .trajectories import Trajectory

#: Sources for the deviation function used inside the norm.
DELTA_SOURCES = ("closed_form", "coupled")


@dataclass(frozen=True)
class MetricConfig:
    """Weights and numerical knobs for the diabaticity measures.

    ``upsilon`` weighs the deviation term, ``kappa`` the squared-derivative
    term, ``lam`` the constraint term inside the stationarity residual.
    The defaults leave all three at 1: only relative comparisons between
    trajectories are meaningful.  ``delta_source`` selects the closed-form
    single-transmon deviation (default) or the coupled-spectrum deviation
    of the ``|1,1>`` level for sensitivity studies.
    """

    upsilon: float = 1.0
    kappa: float = 1.0
    lam: float = 1.0
    fd_step: float | None = None
    delta_source: str = "closed_form"

    def __post_init__(self):
        if self.kappa <= 0.0:
            raise DomainError("kappa must be positive")
        if self.fd_step is not None and self.fd_step <= 0.0:
            raise DomainError("fd_step must be positive")
        if self.delta_source not in DELTA_SOURCES:
            raise DomainError(f"delta_source must be one of {DELTA_SOURCES}")


@dataclass
class ResidualReport:
    """Sampled stationarity residual D(t) and its L2 magnitude."""

    t_grid: np.ndarray
    values: np.ndarray
    masked: np.ndarray
    l2: float
    n_masked: int


@dataclass
class MetricReport:
    """All non-simulative figures of merit for one trajectory."""

    n_norm: float
    constraint_value: float
    residual: ResidualReport
    leakage_estimate: float


def delta_q(params: dev.DeviceParams, phi):
    """Closed-form deviation of the tuned qubit frequency (rad/ns)."""
    return (params.omega1 - params.alpha1) * (1.0 - np.sqrt(np.cos(phi)))


def ddelta_dphi(params: dev.DeviceParams, phi):
    """Flux derivative of :func:`delta_q`."""
    return (params.omega1 - params.alpha1) * np.sin(phi) / (2.0 * np.sqrt(np.cos(phi)))


def _check_uniform(traj: Trajectory):
    steps = np.diff(traj.t_grid)
    if np.max(np.abs(steps - steps[0])) > 1e-9 * steps[0]:
        raise DomainError("metrics require a uniform time grid")


def _deviation_terms(traj: Trajectory, spectrum: TrackedSpectrum, config: MetricConfig):
    """delta(phi(t)) and its time derivative along the trajectory."""
    phi = traj.phi_samples
    phi_dot = np.gradient(phi, traj.dt, edge_order=2)
    if config.delta_source == "closed_form":
        delta = delta_q(spectrum.params, phi)
        slope = ddelta_dphi(spectrum.params, phi)
    else:
        interp = spectrum._energy_interp(spectrum._index((1, 1)))
        delta = spectrum.energies[spectrum._index((1, 1)), 0] - interp(phi)
        slope = -interp.derivative()(phi)
    return delta, slope * phi_dot


def n_norm(traj: Trajectory, spectrum: TrackedSpectrum, config: MetricConfig | None = None):
    """Diabaticity semi-norm: integral of upsilon*delta + kappa*delta_dot^2.

    Larger values mean the trajectory detunes the qubit further or faster,
    i.e. is more diabatic.  Composite Simpson on the trajectory grid.
    """
    config = config or MetricConfig()
    _check_uniform(traj)
    delta, delta_dot = _deviation_terms(traj, spectrum, config)
    integrand = config.upsilon * delta + config.kappa * delta_dot**2
    return float(simpson(integrand, x=traj.t_grid))


def el_residual(
    traj: Trajectory, spectrum: TrackedSpectrum, config: MetricConfig | None = None
) -> ResidualReport:
    """Pointwise distance from the constrained variational optimum.

    Evaluates, with central finite differences for the flux derivatives,

        D(t) = lam * cos(phi) * cot(phi) * dzeta/dphi
               - 2 * (upsilon/kappa) * sqrt(cos^3(phi))
               + (1 + cos^2(phi)) * phi_dot^2
               - sin(2*phi) * phi_ddot.

    The cotangent is singular at phi = 0, which is why trajectories start
    at a small positive epsilon; samples at phi <= 1e-6 strictly inside the
    pulse support are masked out of the L2 summary and counted.
    """
    config = config or MetricConfig()
    _check_uniform(traj)
    phi = traj.phi_samples.copy()
    phi_dot = np.gradient(phi, traj.dt, edge_order=2)
    phi_ddot = np.gradient(phi_dot, traj.dt, edge_order=2)

    tiny = phi <= 1e-6
    interior = np.zeros_like(tiny)
    if np.any(~tiny):
        lo, hi = np.nonzero(~tiny)[0][[0, -1]]
        interior[lo : hi + 1] = True
    masked = tiny & interior

    safe_phi = np.where(tiny, 1.0, phi)
    cos_phi = np.cos(safe_phi)
    dzeta = np.zeros_like(phi)
    if np.any(~tiny):
        dzeta[~tiny] = spectrum.dzeta_dphi(np.clip(phi[~tiny], 0.0, spectrum.phi_max))
    values = (
        config.lam * cos_phi * (cos_phi / np.sin(safe_phi)) * dzeta
        - 2.0 * (config.upsilon / config.kappa) * np.sqrt(cos_phi**3)
        + (1.0 + cos_phi**2) * phi_dot**2
        - np.sin(2.0 * safe_phi) * phi_ddot
    )
    values = np.where(tiny & ~interior, 0.0, values)
    values = np.where(masked, 0.0, values)

    l2 = float(math.sqrt(simpson(values**2, x=traj.t_grid)))
    return ResidualReport(
        t_grid=traj.t_grid,
        values=values,
        masked=masked,
        l2=l2,
        n_masked=int(masked.sum()),
    )


def interaction_frame_generator(params: dev.DeviceParams, phi: float, t: float):
    """Rotating-frame generator on the two-excitation ladder, 3x3 Hermitian.

    Basis order (|0,2>, |1,1>, |2,0>) by bare energy.  The off-diagonal
    carrier phases advance at ``Delta - alpha2`` and ``Delta + alpha1``;
    the diagonal carries the accumulated flux detuning 0, delta, 2*delta.
    The returned matrix is normalized by the coupling ``g*sqrt(2)``.
    """
    delta = float(delta_q(params, phi))
    det = params.detuning
    a = (det - params.alpha2) * t
    b = (det + params.alpha1) * t
    return (
        math.cos(a) * dev.LAMBDA_1
        + math.sin(a) * dev.LAMBDA_2
        + math.cos(b) * dev.LAMBDA_6
        + math.sin(b) * dev.LAMBDA_7
        - np.diag([0.0, delta, 2.0 * delta]).astype(complex)
    )


def interaction_propagator(
    traj: Trajectory,
    params: dev.DeviceParams,
    steps: int | None = None,
    coupling: float | None = None,
):
    """Two-level propagator on span{|1,1>, |2,0>} and the transfer probability.

    Time-ordered product of midpoint step exponentials of

        [[-delta(t),        c * exp(-i*w*t)],
         [c * exp(+i*w*t),  -2*delta(t)   ]],      w = Delta + alpha1,

    with the physical coupling ``c = g*sqrt(2)`` by default.  Returns
    ``(U, p)`` where ``p = |<2,0| U |1,1>|^2`` estimates the leakage out of
    the computational subspace through the dominant channel.
    """
    if steps is None:
        steps = traj.params.n_samples - 1
    w = params.detuning + params.alpha1
    span = traj.t_grid[-1] - traj.t_grid[0]
    dt = span / steps
    if abs(w) * dt > 0.1:
        raise DomainError(
            f"step too coarse to resolve the carrier phase: |w|*dt = {abs(w) * dt:.3f} > 0.1"
        )
    c = params.g * math.sqrt(2.0) if coupling is None else float(coupling)

    t_mid = traj.t_grid[0] + (np.arange(steps) + 0.5) * dt
    delta = delta_q(params, traj.phi_at(t_mid))
    # Decompose each generator as a*I + b.sigma for a closed-form exponential.
    a_coef = -1.5 * delta
    bx = c * np.cos(w * t_mid)
    by = c * np.sin(w * t_mid)
    bz = 0.5 * delta
    norm_b = np.sqrt(bx**2 + by**2 + bz**2)
    cos_term = np.cos(norm_b * dt)
    sinc = np.where(norm_b > 0.0, np.sin(norm_b * dt) / np.where(norm_b > 0, norm_b, 1.0), dt)
    phase = np.exp(-1j * a_coef * dt)

    u = np.eye(2, dtype=complex)
    for k in range(steps):
        step = phase[k] * np.array(
            [
                [cos_term[k] - 1j * sinc[k] * bz[k], -1j * sinc[k] * (bx[k] - 1j * by[k])],
                [-1j * sinc[k] * (bx[k] + 1j * by[k]), cos_term[k] + 1j * sinc[k] * bz[k]],
            ]
        )
        u = step @ u
    transfer = float(abs(u[1, 0]) ** 2)
    return u, transfer


def assemble_metric_report(
    traj: Trajectory, spectrum: TrackedSpectrum, config: MetricConfig | None = None
) -> MetricReport:
    """Bundle norm, residual, constraint integral and leakage estimate."""
    config = config or MetricConfig()
    constraint = float(simpson(spectrum.zeta(traj.phi_samples), x=traj.t_grid))
    _, transfer = interaction_propagator(traj, spectrum.params)
    return MetricReport(
        n_norm=n_norm(traj, spectrum, config),
        constraint_value=constraint,
        residual=el_residual(traj, spectrum, config),
        leakage_estimate=transfer,
    )
