"""Quadrature grids: nodes and weights discretizing the spatial measure.

A :class:`Grid` carries the quadrature nodes ``x_j`` and weights ``w_j``
used throughout the package. Constructors cover uniform midpoint rules on
an interval, Monte Carlo and Gauss-Hermite rules for a Gaussian spatial
density, triangle-mesh midpoint rules (one node per element centroid),
and voxelized 3D domains.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from klefield.errors import InvalidArgumentError, InvalidMeshError

GH_MAX_ORDER = 200
WEIGHT_UNDERFLOW = 1e-300


@dataclass(frozen=True)
class Grid:
    """Immutable set of quadrature nodes and non-negative weights.

    Attributes
    ----------
    points : ndarray, shape (n, dim)
        Node coordinates, in domain units.
    weights : ndarray, shape (n,)
        Quadrature weights, all >= 0 with at least one positive.
    dim : int
        Spatial dimension.
    label : str
        Free-form provenance string.
    """

    points: np.ndarray
    weights: np.ndarray
    dim: int
    label: str = ""

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        w = np.asarray(self.weights, dtype=np.float64).ravel()
        if pts.shape[0] != w.size or w.size < 1:
            raise InvalidArgumentError(
                f"points ({pts.shape[0]}) and weights ({w.size}) must have "
                "equal positive length"
            )
        if pts.shape[1] != self.dim:
            raise InvalidArgumentError(
                f"points have {pts.shape[1]} coordinates, expected dim={self.dim}"
            )
        if np.any(w < 0) or not np.any(w > 0):
            raise InvalidArgumentError(
                "weights must be non-negative with at least one positive entry"
            )
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.weights.size

    def to_csv(self, path):
        """Write the grid as CSV ``x0[,x1[,x2]],weight`` at 17 sig digits."""
        header = ",".join(f"x{i}" for i in range(self.dim)) + ",weight"
        with open(path, "w") as fh:
            fh.write(header + "\n")
            for row, w in zip(self.points, self.weights):
                cols = [f"{v:.17g}" for v in row] + [f"{w:.17g}"]
                fh.write(",".join(cols) + "\n")


def uniform_midpoint_1d(n, length=1.0):
    """Cell-centered uniform rule on [0, length]: x_i=(i-1/2)h, w_i=h."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if length <= 0:
        raise InvalidArgumentError(f"length must be positive, got {length}")
    h = length / n
    x = (np.arange(n) + 0.5) * h
    w = np.full(n, h)
    return Grid(x[:, None], w, 1, label=f"uniform_midpoint_1d(n={n}, L={length})")


def trapezoid_1d(points):
    """Trapezoidal weights for arbitrary sorted 1D nodes."""
    x = np.asarray(points, dtype=np.float64).ravel()
    if x.size < 2:
        raise InvalidArgumentError("trapezoid rule needs at least 2 nodes")
    if np.any(np.diff(x) <= 0):
        raise InvalidArgumentError("nodes must be strictly increasing")
    w = np.empty_like(x)
    w[0] = 0.5 * (x[1] - x[0])
    w[-1] = 0.5 * (x[-1] - x[-2])
    w[1:-1] = 0.5 * (x[2:] - x[:-2])
    return Grid(x[:, None], w, 1, label="trapezoid_1d")


def mc_gaussian_1d(n, sigma_x=1.0, seed=0):
    """Monte Carlo grid: nodes i.i.d. N(0, sigma_x^2), pdf-proportional weights.

    Nodes are sorted ascending and weights are normalized so they sum to 1,
    matching the unit mass of the spatial density.
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if sigma_x <= 0:
        raise InvalidArgumentError(f"sigma_x must be positive, got {sigma_x}")
    rng = np.random.default_rng(seed)
    x = np.sort(rng.normal(0.0, sigma_x, size=n))
    logphi = -0.5 * (x / sigma_x) ** 2
    w = np.exp(logphi - logphi.max())
    w /= w.sum()
    return Grid(
        x[:, None], w, 1, label=f"mc_gaussian_1d(n={n}, sigma={sigma_x}, seed={seed})"
    )


def gauss_hermite_1d(n, sigma_x=1.0):
    """Gauss-Hermite rule mapped to the density N(0, sigma_x^2).

    Nodes and weights come from the Golub-Welsch eigendecomposition of the
    symmetric tridiagonal Jacobi matrix of the physicists' Hermite
    recurrence, then the affine map ``x = sigma_x * sqrt(2) * t`` with
    weights renormalized by 1/sqrt(pi). Exact for polynomial moments up to
    degree ``2n - 1``. Weights below 1e-300 are clamped to zero (reported
    via a warning); the spread reaches ~55 orders of magnitude near n=200.
    """
    if not 1 <= n <= GH_MAX_ORDER:
        raise InvalidArgumentError(f"n must be in [1, {GH_MAX_ORDER}], got {n}")
    if sigma_x <= 0:
        raise InvalidArgumentError(f"sigma_x must be positive, got {sigma_x}")
    if n == 1:
        t = np.array([0.0])
        w = np.array([1.0])
    else:
        beta = np.sqrt(np.arange(1, n) / 2.0)
        t, v = eigh_tridiagonal(np.zeros(n), beta)
        w = v[0, :] ** 2  # already sums to 1 = weight/sqrt(pi) normalization
        # enforce the exact symmetry of the rule
        t = 0.5 * (t - t[::-1])
        w = 0.5 * (w + w[::-1])
    n_clamped = int(np.count_nonzero((w > 0) & (w < WEIGHT_UNDERFLOW)))
    if n_clamped:
        warnings.warn(
            f"gauss_hermite_1d(n={n}): clamped {n_clamped} weights below "
            f"{WEIGHT_UNDERFLOW} to zero",
            RuntimeWarning,
        )
        w = np.where(w < WEIGHT_UNDERFLOW, 0.0, w)
        w /= w.sum()
    x = sigma_x * math.sqrt(2.0) * t
    return Grid(x[:, None], w, 1, label=f"gauss_hermite_1d(n={n}, sigma={sigma_x})")


def from_triangle_mesh(mesh):
    """Midpoint rule on a triangle mesh: node = centroid, weight = area."""
    areas = mesh.areas()
    bad = np.flatnonzero(areas <= 0)
    if bad.size:
        raise InvalidMeshError(f"degenerate (zero-area) element at index {bad[0]}")
    return Grid(mesh.centroids(), areas, 2, label=f"triangle_mesh({len(areas)} elems)")


def from_voxel_domain(vox):
    """One node per retained voxel cell center; uniform weight dx*dy*dz."""
    m = vox.cell_centers.shape[0]
    if m < 1:
        raise InvalidArgumentError("voxel domain has no retained cells")
    w = np.full(m, float(np.prod(vox.spacing)))
    return Grid(vox.cell_centers, w, 3, label=f"voxel_domain({m} cells)")
