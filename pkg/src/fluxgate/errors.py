"""Exception types shared across the package."""


class FluxgateError(Exception):
    """Base class for all package errors."""


class DomainError(FluxgateError):
    """An input lies outside the mathematical domain of an operation."""


class ConfigError(FluxgateError):
    """A configuration file or parameter set failed validation."""


class TrackingError(FluxgateError):
    """Eigenvalue label tracking could not resolve an assignment."""


class CalibrationError(FluxgateError):
    """The flux-amplitude calibration constraint cannot be met.

    Carries the maximum phase achievable at the largest admissible
    amplitude so callers can report how far short the trajectory fell.
    """

    def __init__(self, message, achieved_phase=None, target_phase=None):
        super().__init__(message)
        self.achieved_phase = achieved_phase
        self.target_phase = target_phase
