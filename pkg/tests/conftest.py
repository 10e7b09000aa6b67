import numpy as np
import pytest

from descort import PiecewiseConstant, QuadratureConfig, Tabulated

STAIRCASE_STEPS = ((1.5, 1 / 3), (1.0, 1 / 3), (0.5, 1 / 3))


@pytest.fixture
def staircase():
    """Three-step density with heights 3/2, 1, 1/2 on thirds of [0, 1]."""
    return PiecewiseConstant(STAIRCASE_STEPS)


@pytest.fixture
def cfg():
    return QuadratureConfig()


@pytest.fixture
def hump():
    """Tabulated bell-shaped density, strictly positive at the endpoints."""
    xs = np.linspace(-3.0, 3.0, 121)
    vs = np.exp(-0.5 * xs ** 2)
    vs /= np.trapezoid(vs, xs)
    return Tabulated(list(zip(xs, vs)))


def rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)
