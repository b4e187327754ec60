"""Parametric optimization of trajectory families over (sigma, mu) grids.

Every grid point is an independent evaluation of the diabaticity norm (and
the conditional-phase integral), so sweeps parallelize trivially; results
are assembled in grid order regardless of worker count, keeping the
emitted tables deterministic.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import CalibrationError, DomainError, FluxgateError
from .metrics import MetricConfig, n_norm
from .spectrum import TrackedSpectrum
from .trajectories import (
    DEFAULT_EPSILON,
    DEFAULT_SAMPLES,
    TWO_PARAMETER_FAMILIES,
    FAMILIES,
    TrajectoryParams,
    calibrate_amplitude,
    peak_trajectory,
)

SWEEP_MODES = ("peak_normalized", "pi_calibrated")


@dataclass(frozen=True)
class SweepSpec:
    """Grid description for one family sweep.

    Ranges are ``(lo, hi, n)``; ``mu_range`` is ignored for the
    one-parameter families.  ``mode`` selects how each grid point's
    amplitude is fixed: scaled to the crossing location
    (``peak_normalized``) or calibrated to the pi phase constraint
    (``pi_calibrated``).
    """

    family: str
    sigma_range: tuple[float, float, int]
    tau: float
    mu_range: tuple[float, float, int] | None = None
    mode: str = "peak_normalized"
    refine: bool = False
    k: int = 0
    epsilon: float = DEFAULT_EPSILON
    n_samples: int = DEFAULT_SAMPLES

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown trajectory family {self.family!r}")
        if self.mode not in SWEEP_MODES:
            raise DomainError(f"sweep mode must be one of {SWEEP_MODES}")
        _check_range(self.sigma_range, "sigma_range")
        if self.family in TWO_PARAMETER_FAMILIES:
            if self.mu_range is None:
                raise DomainError(f"family {self.family!r} requires mu_range")
            _check_range(self.mu_range, "mu_range")

    def sigma_values(self) -> np.ndarray:
        lo, hi, n = self.sigma_range
        return np.linspace(lo, hi, int(n))

    def mu_values(self) -> np.ndarray:
        if self.family not in TWO_PARAMETER_FAMILIES or self.mu_range is None:
            return np.array([np.nan])
        lo, hi, n = self.mu_range
        return np.linspace(lo, hi, int(n))


def _check_range(rng, name):
    lo, hi, n = rng
    if not (lo < hi):
        raise DomainError(f"{name}: require lo < hi")
    if int(n) < 2:
        raise DomainError(f"{name}: need at least 2 grid points")


@dataclass
class SweepResult:
    """Evaluated grid plus the best feasible point.

    ``rows`` hold dicts with keys sigma, mu, n_norm, constraint_value,
    amplitude, feasible, reason; infeasible cells keep their grid position
    with NaN values rather than disappearing.
    """

    spec: SweepSpec
    rows: list
    argmin: dict | None
    refined: dict | None = None


def _evaluate_cell(spec: SweepSpec, spectrum, config, sigma, mu):
    tp = TrajectoryParams(
        family=spec.family,
        sigma=float(sigma),
        tau=spec.tau,
        mu=None if np.isnan(mu) else float(mu),
        epsilon=spec.epsilon,
        n_samples=spec.n_samples,
    )
    row = {
        "sigma": float(sigma),
        "mu": float(mu),
        "n_norm": float("nan"),
        "constraint_value": float("nan"),
        "amplitude": float("nan"),
        "feasible": False,
        "reason": "",
    }
    try:
        if spec.mode == "pi_calibrated":
            traj = calibrate_amplitude(tp, spectrum, k=spec.k)
        else:
            traj = peak_trajectory(tp, spectrum)
    except CalibrationError as exc:
        row["reason"] = str(exc)
        if exc.achieved_phase is not None:
            row["constraint_value"] = float(exc.achieved_phase)
        return row
    except FluxgateError as exc:
        row["reason"] = str(exc)
        return row
    row["n_norm"] = n_norm(traj, spectrum, config)
    row["constraint_value"] = float(simpson(spectrum.zeta(traj.phi_samples), x=traj.t_grid))
    row["amplitude"] = traj.amplitude
    row["feasible"] = True
    return row


def _cell_worker(args):
    return _evaluate_cell(*args)


def run_sweep(
    spec: SweepSpec,
    spectrum: TrackedSpectrum,
    config: MetricConfig | None = None,
    workers: int = 1,
) -> SweepResult:
    """Evaluate the norm over the grid; optionally refine the best point.

    Infeasible cells (unreachable calibration, degenerate shapes) are
    flagged, not fatal; if every cell is infeasible an error is raised
    carrying the largest phase any cell achieved.
    """
    config = config or MetricConfig()
    # Locate the crossings once up front so worker processes inherit the
    # cached value instead of re-deriving it per cell.
    spectrum.crossings
    tasks = [
        (spec, spectrum, config, sigma, mu)
        for sigma in spec.sigma_values()
        for mu in spec.mu_values()
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_cell_worker, tasks, chunksize=4))
    else:
        rows = [_evaluate_cell(*task) for task in tasks]

    feasible = [r for r in rows if r["feasible"]]
    if not feasible:
        achieved = [r["constraint_value"] for r in rows if np.isfinite(r["constraint_value"])]
        best = max(achieved) if achieved else float("nan")
        raise CalibrationError(
            f"every sweep cell is infeasible; best achievable phase {best:.6f} rad",
            achieved_phase=best,
        )
    argmin = min(feasible, key=lambda r: r["n_norm"])
    result = SweepResult(spec=spec, rows=rows, argmin=dict(argmin))
    if spec.refine:
        result.refined = refine_optimum(result, spectrum, config)
    return result


def golden_section_min(f, lo: float, hi: float, tol: float = 1e-4):
    """Golden-section minimum of a unimodal scalar function on [lo, hi].

    Returns ``(x, f(x))``.  Deterministic and derivative-free; on a
    non-unimodal function it still converges to a local minimum inside
    the interval.
    """
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def refine_optimum(
    result: SweepResult,
    spectrum: TrackedSpectrum,
    config: MetricConfig | None = None,
    tol: float = 1e-4,
    max_rounds: int = 3,
) -> dict:
    """Golden-section coordinate descent from the grid argmin.

    Each coordinate is searched within one coarse grid cell on either side
    of the current best.  Never returns a point worse than the grid
    argmin; any non-finite evaluation aborts back to it.
    """
    if result.argmin is None:
        raise DomainError("no feasible argmin to refine")
    config = config or MetricConfig()
    spec = result.spec
    sigma_vals = spec.sigma_values()
    mu_vals = spec.mu_values()
    two_param = spec.family in TWO_PARAMETER_FAMILIES

    def objective(sigma, mu):
        row = _evaluate_cell(spec, spectrum, config, sigma, mu)
        return row["n_norm"] if row["feasible"] else float("inf")

    best = dict(result.argmin)
    sigma, mu = best["sigma"], best["mu"]
    d_sigma = sigma_vals[1] - sigma_vals[0]
    d_mu = (mu_vals[1] - mu_vals[0]) if two_param else 0.0

    try:
        for _ in range(max_rounds):
            moved = 0.0
            lo = max(sigma_vals[0], sigma - d_sigma)
            hi = min(sigma_vals[-1], sigma + d_sigma)
            new_sigma, val = golden_section_min(lambda s: objective(s, mu), lo, hi, tol)
            if not np.isfinite(val):
                return dict(result.argmin)
            moved = max(moved, abs(new_sigma - sigma))
            sigma = new_sigma
            if two_param:
                lo = max(mu_vals[0], mu - d_mu)
                hi = min(mu_vals[-1], mu + d_mu)
                new_mu, val = golden_section_min(lambda m: objective(sigma, m), lo, hi, tol)
                if not np.isfinite(val):
                    return dict(result.argmin)
                moved = max(moved, abs(new_mu - mu))
                mu = new_mu
            if moved <= tol:
                break
        final = _evaluate_cell(spec, spectrum, config, sigma, mu)
    except FluxgateError:
        return dict(result.argmin)

    if not final["feasible"] or final["n_norm"] > result.argmin["n_norm"]:
        return dict(result.argmin)
    return final
