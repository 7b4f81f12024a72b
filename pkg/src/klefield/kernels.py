"""Covariance kernels and dense covariance-matrix assembly."""

from dataclasses import dataclass

import numpy as np

from klefield import _accel
from klefield.errors import InvalidArgumentError
from klefield.geometry import EUCLIDEAN

FAMILIES = ("exponential", "squared_exponential")


@dataclass(frozen=True)
class Kernel:
    """Stationary covariance kernel spec.

    ``exponential``: C(d) = variance * exp(-d / corr_length)
    ``squared_exponential``: C(d) = variance * exp(-d^2 / (2 corr_length^2))
    """

    family: str
    corr_length: float
    variance: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidArgumentError(
                f"unknown kernel family {self.family!r}; expected one of {FAMILIES}"
            )
        if self.corr_length <= 0:
            raise InvalidArgumentError(f"corr_length must be > 0, got {self.corr_length}")
        if self.variance <= 0:
            raise InvalidArgumentError(f"variance must be > 0, got {self.variance}")


def kernel_eval(kernel, d):
    """Evaluate the kernel at distance(s) ``d >= 0``."""
    d = np.asarray(d, dtype=np.float64)
    if np.any(d < 0):
        raise InvalidArgumentError("distances must be non-negative")
    if kernel.family == "exponential":
        out = kernel.variance * np.exp(-d / kernel.corr_length)
    else:
        out = kernel.variance * np.exp(-(d**2) / (2.0 * kernel.corr_length**2))
    return out if out.ndim else float(out)


def covariance_matrix(kernel, grid, field=EUCLIDEAN):
    """Dense covariance matrix K_ij = C(x_i, x_j) on a grid.

    Distances come either from the closed-form Euclidean metric on the grid
    points or from a precomputed symmetric matrix (e.g. SIP geodesics).
    Each unordered pair is evaluated once, so K is symmetric bit-exactly and
    the diagonal equals the kernel variance.
    """
    code = _accel.FAMILY_CODES[kernel.family]
    n = len(grid)
    if field.kind == "euclidean":
        return _accel.pairwise_covariance(
            grid.points, kernel.corr_length, kernel.variance, code
        )
    if field.matrix.shape[0] != n:
        raise InvalidArgumentError(
            f"distance matrix size {field.matrix.shape[0]} != grid size {n}"
        )
    return _accel.covariance_from_distances(
        field.matrix, kernel.corr_length, kernel.variance, code
    )
