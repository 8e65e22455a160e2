import numpy as np
import pytest

from triband import PeriodicCoefficients, zero_coefficients


@pytest.fixture(scope="session")
def zero_c() -> PeriodicCoefficients:
    return zero_coefficients(4)


@pytest.fixture(scope="session")
def const_c() -> PeriodicCoefficients:
    return PeriodicCoefficients.from_constants(1.0, -0.5, 64)


@pytest.fixture(scope="session")
def sin_c() -> PeriodicCoefficients:
    # smooth coefficients sampled at cell midpoints
    t = (np.arange(64) + 0.5) / 64
    return PeriodicCoefficients.from_samples(
        np.sin(2 * np.pi * t), 0.5 * np.sin(4 * np.pi * t)
    )


@pytest.fixture(scope="session")
def small_c() -> PeriodicCoefficients:
    return PeriodicCoefficients.from_constants(0.5, 0.3, 64)


@pytest.fixture(scope="session")
def coefficient_sets(zero_c, const_c, sin_c) -> list[PeriodicCoefficients]:
    return [zero_c, const_c, sin_c]
