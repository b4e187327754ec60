"""Flux-trajectory design and simulation for the adiabatic controlled-Z gate
on two capacitively coupled, flux-tunable transmons.

The package models the coupled 9-level device, tracks its spectrum across
flux, defines parametric flux-pulse families calibrated to the conditional
pi-phase constraint, ranks them by a non-simulative diabaticity norm and a
variational stationarity residual, and verifies the ranking with direct
Schrodinger propagation and spectral-norm gate distances.
"""

from .device import (
    DeviceParams,
    build_hamiltonian,
    check_block_structure,
    default_device,
    level_frequency,
    load_device,
    qubit_frequency,
)
from .errors import (
    CalibrationError,
    ConfigError,
    DomainError,
    FluxgateError,
    TrackingError,
)
from .evolution import (
    GateReport,
    PropagatorResult,
    RankReport,
    adiabatic_phases,
    fidelity_distance,
    propagate,
    rank_check,
    reconstruct_gate,
    simulate_gate,
)
from .metrics import (
    MetricConfig,
    MetricReport,
    assemble_metric_report,
    el_residual,
    interaction_frame_generator,
    interaction_propagator,
    n_norm,
)
from .spectrum import CrossingSet, TrackedSpectrum, find_crossings, track_spectrum
from .sweep import SweepResult, SweepSpec, refine_optimum, run_sweep
from .trajectories import (
    Trajectory,
    TrajectoryParams,
    calibrate_amplitude,
    make_trajectory,
    peak_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationError",
    "ConfigError",
    "CrossingSet",
    "DeviceParams",
    "DomainError",
    "FluxgateError",
    "GateReport",
    "MetricConfig",
    "MetricReport",
    "PropagatorResult",
    "RankReport",
    "SweepResult",
    "SweepSpec",
    "TrackedSpectrum",
    "TrackingError",
    "Trajectory",
    "TrajectoryParams",
    "adiabatic_phases",
    "assemble_metric_report",
    "build_hamiltonian",
    "calibrate_amplitude",
    "check_block_structure",
    "default_device",
    "el_residual",
    "fidelity_distance",
    "find_crossings",
    "interaction_frame_generator",
    "interaction_propagator",
    "level_frequency",
    "load_device",
    "make_trajectory",
    "n_norm",
    "peak_trajectory",
    "propagate",
    "qubit_frequency",
    "rank_check",
    "reconstruct_gate",
    "refine_optimum",
    "run_sweep",
    "simulate_gate",
    "track_spectrum",
]
