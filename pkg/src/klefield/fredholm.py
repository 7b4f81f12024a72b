"""Nystrom discretization of the covariance eigenproblem.

The weighted eigenproblem K W f = lambda f is not symmetric for
non-uniform weights; substituting h = W^{1/2} f turns it into the
symmetric problem A h = lambda h with A = W^{1/2} K W^{1/2}, solved by a
dense symmetric eigendecomposition. Recovered eigenvectors f = W^{-1/2} h
are orthonormal in the weighted dot product.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from klefield.errors import InvalidArgumentError

DEGENERACY_RTOL = 1e-10


@dataclass(frozen=True)
class KLSpectrum:
    """Eigenvalues (descending) and weight-orthonormal eigenvectors on a grid.

    Column ``k`` of ``eigenvectors`` tabulates the k-th eigenfunction at the
    grid nodes. ``n_clamped`` counts negative eigenvalues clamped to zero;
    ``min_eigenvalue`` records the most negative pre-clamp value.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    grid: object
    provenance: str
    n_clamped: int = 0
    min_eigenvalue: float = 0.0

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=np.float64)
        vec = np.asarray(self.eigenvectors, dtype=np.float64)
        if vec.shape != (len(self.grid), lam.size):
            raise InvalidArgumentError(
                f"eigenvector matrix shape {vec.shape} does not match "
                f"(grid={len(self.grid)}, modes={lam.size})"
            )
        if np.any(np.diff(lam) > 0):
            raise InvalidArgumentError("eigenvalues must be sorted descending")
        lam.setflags(write=False)
        vec.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "eigenvectors", vec)

    @property
    def n_modes(self):
        return self.eigenvalues.size

    def degenerate_modes(self):
        """Indices in degenerate clusters: |l_i - l_j| < 1e-10 * l_1."""
        lam = self.eigenvalues
        if lam.size < 2 or lam[0] <= 0:
            return np.array([], dtype=np.int64)
        close = np.abs(np.diff(lam)) < DEGENERACY_RTOL * lam[0]
        flag = np.zeros(lam.size, dtype=bool)
        flag[:-1] |= close
        flag[1:] |= close
        return np.flatnonzero(flag)

    def spectrum_to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("k,lambda\n")
            for k, lam in enumerate(self.eigenvalues, start=1):
                fh.write(f"{k},{lam:.17g}\n")

    def eigenvectors_to_csv(self, path):
        cols = ["node_index"]
        cols += [f"x{i}" for i in range(self.grid.dim)]
        cols += [f"f_{k}" for k in range(1, self.n_modes + 1)]
        with open(path, "w") as fh:
            fh.write(",".join(cols) + "\n")
            for j in range(len(self.grid)):
                row = [str(j)]
                row += [f"{v:.17g}" for v in self.grid.points[j]]
                row += [f"{v:.17g}" for v in self.eigenvectors[j]]
                fh.write(",".join(row) + "\n")


def _fix_signs(vec):
    # deterministic sign: largest-magnitude entry of each column positive
    idx = np.argmax(np.abs(vec), axis=0)
    signs = np.sign(vec[idx, np.arange(vec.shape[1])])
    signs[signs == 0] = 1.0
    return vec * signs


def solve_fredholm(K, grid, n_modes=None):
    """Solve the symmetrized eigenproblem A h = lambda h on a grid.

    Zero-weight nodes carry no measure: they are excluded from the solve
    and their eigenvector entries are set to zero. Negative eigenvalues
    (possible for SIP-distance kernels or roundoff) are clamped to zero
    with the count reported on the returned spectrum.
    """
    K = np.asarray(K, dtype=np.float64)
    if not np.all(np.isfinite(K)):
        raise InvalidArgumentError("covariance matrix has non-finite entries")
    n = len(grid)
    if K.shape != (n, n):
        raise InvalidArgumentError(f"K shape {K.shape} does not match grid size {n}")
    w = grid.weights
    active = np.flatnonzero(w > 0)
    na = active.size
    if n_modes is None:
        n_modes = na
    elif n_modes < 1:
        raise InvalidArgumentError(f"n_modes must be >= 1, got {n_modes}")
    elif n_modes > na:
        warnings.warn(
            f"n_modes={n_modes} exceeds {na} active nodes; clamping",
            RuntimeWarning,
        )
        n_modes = na

    sw = np.sqrt(w[active])
    A = sw[:, None] * K[np.ix_(active, active)] * sw[None, :]
    if n_modes == na:
        lam, h = scipy.linalg.eigh(A)
    else:
        lam, h = scipy.linalg.eigh(A, subset_by_index=[na - n_modes, na - 1])
    lam = lam[::-1]
    h = h[:, ::-1]

    min_eig = float(lam.min()) if lam.size else 0.0
    neg = lam < 0
    n_clamped = int(neg.sum())
    if n_clamped:
        lam = np.where(neg, 0.0, lam)

    f = np.zeros((n, lam.size))
    f[active, :] = _fix_signs(h / sw[:, None])
    return KLSpectrum(lam, f, grid, "fredholm", n_clamped, min(min_eig, 0.0))


def solve_fredholm_nonsymmetric(K, grid):
    """Cross-check route: eigendecomposition of the unsymmetrized K W.

    Restricted to small problems (N <= 64); eigenvalues are returned
    descending and eigenvectors are weight-normalized. Intended for
    verifying the symmetrized solver, not for production use.
    """
    K = np.asarray(K, dtype=np.float64)
    n = len(grid)
    if n > 64:
        raise InvalidArgumentError("nonsymmetric cross-check is limited to N <= 64")
    if np.any(grid.weights <= 0):
        raise InvalidArgumentError("nonsymmetric route requires positive weights")
    lam, f = scipy.linalg.eig(K @ np.diag(grid.weights))
    if np.abs(lam.imag).max(initial=0.0) > 1e-8 * np.abs(lam.real).max(initial=1.0):
        raise RuntimeError("unexpected complex eigenvalues in cross-check route")
    lam = lam.real
    order = np.argsort(lam)[::-1]
    lam = lam[order]
    f = f[:, order].real
    norms = np.sqrt(np.einsum("j,jk,jk->k", grid.weights, f, f))
    f = _fix_signs(f / norms)
    return lam, f


def mercer_residual(spectrum, K, n_modes):
    """Max-abs entrywise error of K minus its rank-n spectral reconstruction."""
    if n_modes < 0 or n_modes > spectrum.n_modes:
        raise InvalidArgumentError(
            f"n_modes must be in [0, {spectrum.n_modes}], got {n_modes}"
        )
    K = np.asarray(K, dtype=np.float64)
    f = spectrum.eigenvectors[:, :n_modes]
    lam = spectrum.eigenvalues[:n_modes]
    recon = (f * lam[None, :]) @ f.T
    return float(np.abs(K - recon).max())
