"""Karhunen-Loeve expansions of random fields on discretized 1D/2D/3D domains.

Two construction routes are provided: the symmetrized Nystrom discretization
of the covariance eigenproblem (``fredholm``) and the SVD of the
weight-scaled sample matrix (``sampling``), validated against closed-form
spectra for exponential and squared-exponential kernels (``analytic``).
"""

from klefield.errors import (
    DisconnectedGraphError,
    InvalidArgumentError,
    InvalidMeshError,
)
from klefield.grids import Grid
from klefield.kernels import Kernel
from klefield.fredholm import KLSpectrum

__version__ = "0.1.0"

__all__ = [
    "DisconnectedGraphError",
    "Grid",
    "InvalidArgumentError",
    "InvalidMeshError",
    "Kernel",
    "KLSpectrum",
    "__version__",
]
