"""Parametric flux-trajectory families and amplitude calibration.

Five shape families are supported, all peak-normalized to 1 before the
physical flux amplitude is applied:

* ``gaussian``: endpoint-zeroed Gaussian centered at ``tau/2``.
* ``mollifier``: compactly supported bump whose derivatives all vanish at
  the support boundary.
* ``mollified_gaussian``: numerical convolution of the two, shifted by the
  mollifier center ``mu``.
* ``prepulsed_gaussian``: main Gaussian plus a 1/3-weight Gaussian prepulse
  at ``mu``.
* ``mollifier_prepulsed_gaussian``: main Gaussian plus a 1/6-weight
  mollifier prepulse at ``mu``.

A trajectory is a shape sampled on a uniform grid over ``[epsilon, tau]``
(ns) scaled by an amplitude in radians.  The amplitude is either set
directly (capped by the gate-driving crossing location) or calibrated so
the accumulated conditional phase hits ``pi`` modulo ``2*pi``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq

from .errors import CalibrationError, DomainError
from .spectrum import TrackedSpectrum

FAMILIES = (
    "gaussian",
    "mollifier",
    "mollified_gaussian",
    "prepulsed_gaussian",
    "mollifier_prepulsed_gaussian",
)

#: Families whose second parameter ``mu`` is meaningful.
TWO_PARAMETER_FAMILIES = FAMILIES[2:]

#: Relative prepulse heights fixed by the family definitions.
GAUSSIAN_PREPULSE_WEIGHT = 1.0 / 3.0
MOLLIFIER_PREPULSE_WEIGHT = 1.0 / 6.0

DEFAULT_EPSILON = 1e-3
DEFAULT_SAMPLES = 4001
CONVOLUTION_NODES = 2001

#: Endpoint residue above which a composite shape counts as clipped by the
#: gate window (fraction of peak).
_CLIP_THRESHOLD = 1e-6


@dataclass(frozen=True)
class TrajectoryParams:
    """Identity and parameters of one flux trajectory.

    ``sigma`` and ``mu`` are in ns; ``amplitude`` is the peak flux in rad
    and stays ``None`` until set by calibration or an explicit choice.
    """

    family: str
    sigma: float
    tau: float
    mu: float | None = None
    epsilon: float = DEFAULT_EPSILON
    amplitude: float | None = None
    n_samples: int = DEFAULT_SAMPLES

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown trajectory family {self.family!r}")
        if self.sigma <= 0.0:
            raise DomainError("sigma must be positive")
        if self.epsilon < 0.0 or self.tau <= 2.0 * self.epsilon:
            raise DomainError("require 0 <= epsilon and tau > 2*epsilon")
        if self.family in TWO_PARAMETER_FAMILIES and self.mu is None:
            raise DomainError(f"family {self.family!r} requires mu")
        if self.n_samples < 3:
            raise DomainError("need at least 3 samples")

    @property
    def center(self) -> float:
        return 0.5 * self.tau


@dataclass
class Trajectory:
    """A sampled flux curve phi(t) on a uniform grid over [epsilon, tau]."""

    params: TrajectoryParams
    t_grid: np.ndarray
    phi_samples: np.ndarray
    clipped: bool = False
    calibration_residual: float | None = None
    branch: int = 0
    _shape_cache: dict = field(default_factory=dict, repr=False)

    @property
    def dt(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])

    @property
    def amplitude(self) -> float:
        return float(self.params.amplitude)

    def phi_at(self, t) -> np.ndarray:
        """Evaluate phi at arbitrary times from the underlying shape."""
        return self.amplitude * evaluate_shape(self.params, t)


def shape_gaussian(t, sigma, center, tau):
    """Gaussian shape, shifted so it vanishes at t = 0 and renormalized.

    The subtraction constant is the raw Gaussian's value at t = 0; for a
    pulse centered at ``tau/2`` this zeroes both window endpoints.  Widths
    so large that the window holds no pulse (subtraction cancels the peak)
    are rejected.
    """
    z = math.exp(-0.5 * (center / sigma) ** 2)
    if 1.0 - z < 1e-12:
        raise DomainError("degenerate gaussian width: endpoint normalizer cancels peak")
    raw = np.exp(-0.5 * ((np.asarray(t, dtype=float) - center) / sigma) ** 2)
    return (raw - z) / (1.0 - z)


def shape_mollifier(t, sigma, center):
    """Compactly supported bump on [center - sigma, center + sigma], peak 1.

    All derivatives vanish at the support boundary, which is the family's
    selling point: the pulse joins the idle level smoothly to every order.
    """
    x = (np.asarray(t, dtype=float) - center) / sigma
    inside = np.abs(x) < 1.0
    out = np.zeros_like(x)
    arg = np.where(inside, x * x - 1.0, -1.0)
    out[inside] = np.exp(1.0 + 1.0 / arg[inside])
    return out


def _convolve_window(times, sigma, tau, mu, m_sigma, nodes):
    """Gaussian-times-bump quadrature, Simpson in the integration variable.

    The bump is placed so the smoothed lobe lands at ``mu``: its argument
    is the distance from ``t - t'`` to the shift ``mu - tau/2``.
    """
    tp = np.linspace(0.0, tau, nodes)
    gauss = shape_gaussian(tp, sigma, 0.5 * tau, tau)
    x = (times[:, None] - tp[None, :] - (mu - 0.5 * tau)) / m_sigma
    inside = np.abs(x) < 1.0
    arg = np.where(inside, x * x - 1.0, -1.0)
    bump = np.where(inside, np.exp(1.0 + 1.0 / arg), 0.0)
    return simpson(gauss[None, :] * bump, x=tp, axis=-1)


@lru_cache(maxsize=512)
def _mollified_normalizers(sigma, tau, mu, m_sigma, nodes):
    """Peak and relative boundary residue of the convolved shape."""
    scan = np.linspace(0.0, tau, 2001)
    peak = float(_convolve_window(scan, sigma, tau, mu, m_sigma, nodes).max())
    if peak <= 0.0:
        raise DomainError("mollified gaussian support lies entirely outside the window")
    ends = _convolve_window(np.array([0.0, tau]), sigma, tau, mu, m_sigma, nodes)
    boundary = float(ends.max()) / peak
    if 1.0 - boundary < 1e-9:
        raise DomainError(
            "mollified gaussian is clipped to degeneracy: its in-window maximum "
            "sits at the gate boundary"
        )
    return peak, boundary


def shape_mollified_gaussian(
    t, sigma, tau, mu, mollifier_sigma=None, nodes: int = CONVOLUTION_NODES
):
    """Convolution of the Gaussian shape with a mollifier centered by ``mu``.

    Computed by composite Simpson quadrature over the gate window; the
    result is peak-renormalized, then endpoint-zeroed and clamped at 0.
    The smoothed lobe is centered at ``mu`` (``mu = tau/2`` reproduces a
    symmetric pulse), so off-center placements can push part of the pulse
    outside the window, where it gets clipped.  ``mollifier_sigma``
    defaults to ``sigma``; a much smaller value makes the mollifier act as
    a near-identity and the result approaches a shifted Gaussian.
    """
    if nodes < CONVOLUTION_NODES:
        raise DomainError(f"convolution requires at least {CONVOLUTION_NODES} nodes")
    if nodes % 2 == 0:
        nodes += 1  # composite Simpson needs an odd node count
    m_sigma = float(sigma if mollifier_sigma is None else mollifier_sigma)
    t = np.asarray(t, dtype=float)
    peak, boundary = _mollified_normalizers(float(sigma), float(tau), float(mu), m_sigma, nodes)
    values = _convolve_window(np.atleast_1d(t), sigma, tau, mu, m_sigma, nodes) / peak
    values = np.clip((values - boundary) / (1.0 - boundary), 0.0, None)
    return values.reshape(np.shape(t))


def shape_prepulsed(t, sigma, tau, mu, kind, weight=None):
    """Main Gaussian at ``tau/2`` plus a weighted prepulse at ``mu``, peak 1.

    ``kind`` selects the prepulse: ``"gaussian_prepulse"`` (weight 1/3) or
    ``"mollifier_prepulse"`` (weight 1/6).  ``weight`` overrides the
    family's fixed relative height; 0 recovers the pure Gaussian.
    """
    t = np.asarray(t, dtype=float)
    main = shape_gaussian(t, sigma, 0.5 * tau, tau)
    weight = _prepulse_weight(kind) if weight is None else float(weight)
    if kind == "gaussian_prepulse":
        pre = weight * shape_gaussian(t, sigma, mu, tau)
    else:
        pre = weight * shape_mollifier(t, sigma, mu)
    combined = main + pre
    peak = _composite_peak(sigma, tau, mu, kind, weight)
    return combined / peak


def _prepulse_weight(kind) -> float:
    if kind == "gaussian_prepulse":
        return GAUSSIAN_PREPULSE_WEIGHT
    if kind == "mollifier_prepulse":
        return MOLLIFIER_PREPULSE_WEIGHT
    raise DomainError(f"unknown prepulse kind {kind!r}")


def _composite_peak(sigma, tau, mu, kind, weight) -> float:
    """Peak of the unnormalized prepulsed shape, from a dense scan."""
    t_dense = np.linspace(0.0, tau, 4001)
    main = shape_gaussian(t_dense, sigma, 0.5 * tau, tau)
    if kind == "gaussian_prepulse":
        pre = weight * shape_gaussian(t_dense, sigma, mu, tau)
    else:
        pre = weight * shape_mollifier(t_dense, sigma, mu)
    return float((main + pre).max())


def _raw_shape(tp: TrajectoryParams, t):
    if tp.family == "gaussian":
        return shape_gaussian(t, tp.sigma, tp.center, tp.tau)
    if tp.family == "mollifier":
        return shape_mollifier(t, tp.sigma, tp.center)
    if tp.family == "mollified_gaussian":
        return shape_mollified_gaussian(t, tp.sigma, tp.tau, tp.mu)
    if tp.family == "prepulsed_gaussian":
        return shape_prepulsed(t, tp.sigma, tp.tau, tp.mu, "gaussian_prepulse")
    return shape_prepulsed(t, tp.sigma, tp.tau, tp.mu, "mollifier_prepulse")


def evaluate_shape(tp: TrajectoryParams, t):
    """Unitless shape in [0, 1] with exact zeros at the window endpoints.

    Applies the family formula, then subtracts whatever residue the shape
    carries at ``t = epsilon`` and ``t = tau`` and clamps at zero, so the
    trajectory invariantly starts and ends at the idle point.
    """
    raw = np.asarray(_raw_shape(tp, t), dtype=float)
    ends = _raw_shape(tp, np.array([tp.epsilon, tp.tau]))
    z = float(np.max(ends))
    if 1.0 - z < 1e-12:
        raise DomainError("shape is degenerate: endpoint residue cancels the peak")
    if z <= 0.0:
        return np.clip(raw, 0.0, 1.0)
    return np.clip((raw - z) / (1.0 - z), 0.0, 1.0)


def support_window(tp: TrajectoryParams) -> tuple[float, float] | None:
    """Mollifier support [center - sigma, center + sigma], if applicable."""
    if tp.family == "mollifier":
        return (tp.center - tp.sigma, tp.center + tp.sigma)
    if tp.family == "mollifier_prepulsed_gaussian":
        return (tp.mu - tp.sigma, tp.mu + tp.sigma)
    return None


def _check_window(tp: TrajectoryParams) -> list[str]:
    notes = []
    window = support_window(tp)
    if window is not None and (window[0] < 0.0 or window[1] > tp.tau):
        notes.append(
            f"mollifier support [{window[0]:.3f}, {window[1]:.3f}] exceeds the gate window"
        )
    return notes


def make_trajectory(tp: TrajectoryParams, amplitude: float, a2: float) -> Trajectory:
    """Sample a trajectory at a fixed peak flux ``amplitude`` (rad).

    ``a2`` is the location of the gate-driving avoided crossing, the hard
    cap on the flux codomain.
    """
    if not (0.0 < amplitude <= a2 + 1e-12):
        raise DomainError(f"amplitude must lie in (0, {a2:.6f}]")
    for note in _check_window(tp):
        warnings.warn(note, stacklevel=2)
    tp = replace(tp, amplitude=float(amplitude))
    t_grid = np.linspace(tp.epsilon, tp.tau, tp.n_samples)
    shape = evaluate_shape(tp, t_grid)
    clipped = bool(
        np.asarray(_raw_shape(tp, np.array([0.0, tp.tau]))).max() > _CLIP_THRESHOLD
    )
    return Trajectory(
        params=tp,
        t_grid=t_grid,
        phi_samples=tp.amplitude * shape,
        clipped=clipped,
    )


def phase_integral(tp: TrajectoryParams, amplitude, spectrum: TrackedSpectrum):
    """Accumulated conditional phase (rad) of the shape at a given amplitude."""
    t_grid = np.linspace(tp.epsilon, tp.tau, tp.n_samples)
    shape = evaluate_shape(tp, t_grid)
    return float(simpson(spectrum.zeta(amplitude * shape), x=t_grid))


def calibrate_amplitude(
    tp: TrajectoryParams,
    spectrum: TrackedSpectrum,
    k: int = 0,
    residual_tol: float = 1e-8,
) -> Trajectory:
    """Choose the peak flux so the conditional phase equals pi + 2*pi*k.

    The phase integral grows monotonically with amplitude, so a bracketed
    root find suffices; the shape itself is amplitude-independent and is
    sampled once.  Raises :class:`CalibrationError` when even the maximal
    admissible amplitude (the avoided-crossing location) cannot accumulate
    the target phase.
    """
    if k < 0:
        raise DomainError("branch index k must be nonnegative")
    a2 = spectrum.crossings.locations["A2"]
    target = math.pi * (1.0 + 2.0 * k)

    t_grid = np.linspace(tp.epsilon, tp.tau, tp.n_samples)
    shape = evaluate_shape(tp, t_grid)

    def phase(amp):
        return float(simpson(spectrum.zeta(amp * shape), x=t_grid))

    achieved = phase(a2)
    if achieved < target:
        raise CalibrationError(
            f"constraint unreachable: max phase {achieved:.6f} rad at amplitude "
            f"{a2:.6f} is below target {target:.6f}; increase tau or k",
            achieved_phase=achieved,
            target_phase=target,
        )

    amplitude = brentq(lambda a: phase(a) - target, 1e-9, a2, xtol=1e-15, rtol=8.9e-16)
    residual = phase(amplitude) - target
    if abs(residual) > residual_tol:
        raise CalibrationError(
            f"calibration residual {residual:.3e} exceeds tolerance {residual_tol:.1e}",
            achieved_phase=residual + target,
            target_phase=target,
        )
    traj = make_trajectory(tp, amplitude, a2)
    traj.calibration_residual = float(residual)
    traj.branch = k
    return traj


def peak_trajectory(tp: TrajectoryParams, spectrum: TrackedSpectrum) -> Trajectory:
    """Trajectory at the maximal admissible amplitude (the crossing location)."""
    a2 = spectrum.crossings.locations["A2"]
    return make_trajectory(tp, a2, a2)


def validate_trajectory(traj: Trajectory, a2: float, endpoint_tol: float = 1e-9):
    """Assert the sampled-curve invariants; raises DomainError on violation.

    Checks the flux codomain ``[0, a2]``, endpoint inaction, and that
    adjacent-sample jumps stay within a finite-difference derivative bound.
    """
    phi = traj.phi_samples
    if phi.min() < -1e-15 or phi.max() > a2 + 1e-9:
        raise DomainError("trajectory leaves the admissible flux codomain")
    if abs(phi[0]) > endpoint_tol or abs(phi[-1]) > endpoint_tol:
        raise DomainError("trajectory endpoints are not at the idle point")
    jumps = np.abs(np.diff(phi))
    bound = np.abs(np.gradient(phi, traj.dt, edge_order=2)).max() * traj.dt
    if jumps.max() > 1.5 * bound + 1e-12:
        raise DomainError("trajectory has a jump inconsistent with its derivative bound")
