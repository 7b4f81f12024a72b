import numpy as np
import pytest

from klefield.grids import uniform_midpoint_1d
from klefield.kernels import Kernel, covariance_matrix


@pytest.fixture(scope="session")
def uniform_grid_64():
    return uniform_midpoint_1d(64, 1.0)


@pytest.fixture(scope="session")
def exp_cov_64(uniform_grid_64):
    return covariance_matrix(Kernel("exponential", 0.2), uniform_grid_64)


def rel_err(approx, exact):
    exact = np.asarray(exact, dtype=np.float64)
    return np.abs(np.asarray(approx) - exact) / np.abs(exact)
