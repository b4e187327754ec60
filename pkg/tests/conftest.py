import numpy as np
import pytest

from fluxgate import device as dev
from fluxgate import spectrum as spc
from fluxgate.device import TWO_PI


@pytest.fixture(scope="session")
def params():
    return dev.default_device()


@pytest.fixture(scope="session")
def decoupled_params():
    base = dev.default_device()
    return dev.DeviceParams(
        omega1=base.omega1,
        omega2=base.omega2,
        alpha1=base.alpha1,
        alpha2=base.alpha2,
        g=0.0,
    )


@pytest.fixture(scope="session")
def tracked(params):
    return spc.track_spectrum(params)


@pytest.fixture(scope="session")
def tracked_g0(decoupled_params):
    return spc.track_spectrum(decoupled_params)


@pytest.fixture(scope="session")
def crossings(tracked):
    return tracked.crossings


@pytest.fixture(scope="session")
def a2(crossings):
    return crossings.locations["A2"]


def random_device(rng) -> dev.DeviceParams:
    """Random parameters in the gate-compatible transmon regime.

    The regime requires the detuning to exceed the (positive) magnitude of
    the tuned transmon's anharmonicity, which is exactly the condition for
    the gate-driving crossing to exist at positive flux, plus weak coupling.
    """
    alpha1 = -rng.uniform(0.2, 0.35)
    alpha2 = -rng.uniform(0.2, 0.35)
    detuning = rng.uniform(-alpha1 + 0.05, 1.5)
    omega2 = rng.uniform(4.5, 5.3)
    g = rng.uniform(0.01, 0.04)
    return dev.DeviceParams(
        omega1=TWO_PI * (omega2 + detuning),
        omega2=TWO_PI * omega2,
        alpha1=TWO_PI * alpha1,
        alpha2=TWO_PI * alpha2,
        g=TWO_PI * g,
    )


def wrapped_diff(a, b) -> float:
    """Phase difference wrapped to (-pi, pi]."""
    return float((a - b + np.pi) % (2.0 * np.pi) - np.pi)
