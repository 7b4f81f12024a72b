"""Random-field realizations, coefficient projection, and SVD spectra.

Realizations are truncated expansions Y = sum_k xi_k sqrt(lambda_k) f_k
with standard-normal coefficients. The empirical spectrum is recovered
from the SVD of the weight-scaled, centered sample matrix
(1/sqrt(n-1)) W^{1/2} S, whose squared singular values equal the
Nystrom eigenvalues of K = S S^T / (n-1).
"""

import warnings
from dataclasses import dataclass

import numpy as np

from klefield.errors import InvalidArgumentError
from klefield.fredholm import KLSpectrum, _fix_signs

ZERO_LAMBDA_EPS = 1e-14


@dataclass(frozen=True)
class SampleEnsemble:
    """Matrix of field realizations: rows = grid nodes, columns = samples."""

    values: np.ndarray
    grid: object
    seed: int
    n_modes_used: int

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape[0] != len(self.grid):
            raise InvalidArgumentError(
                f"row count {vals.shape[0]} does not match grid size {len(self.grid)}"
            )
        if not np.all(np.isfinite(vals)):
            raise InvalidArgumentError("ensemble has non-finite entries")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n_samples(self):
        return self.values.shape[1]

    def to_csv(self, path):
        n = self.n_samples
        with open(path, "w") as fh:
            fh.write("node_index," + ",".join(f"y_{i + 1}" for i in range(n)) + "\n")
            for j in range(self.values.shape[0]):
                fh.write(
                    f"{j}," + ",".join(f"{v:.17g}" for v in self.values[j]) + "\n"
                )


@dataclass(frozen=True)
class CoefficientSet:
    """Projected KL coefficients; zeta_k = sqrt(lambda_k) * xi_k."""

    xi: np.ndarray
    zeta: np.ndarray
    skipped: tuple = ()

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("mode,sample,xi,zeta\n")
            for k in range(self.xi.shape[0]):
                for p in range(self.xi.shape[1]):
                    fh.write(
                        f"{k + 1},{p + 1},{self.xi[k, p]:.17g},{self.zeta[k, p]:.17g}\n"
                    )


def standard_normal_coefficients(n_modes, n_samples, seed):
    """Seeded xi draws with one RNG substream per mode.

    Spawning a child SeedSequence per mode keeps the draws for existing
    modes unchanged when more modes are added.
    """
    children = np.random.SeedSequence(seed).spawn(n_modes)
    xi = np.empty((n_modes, n_samples))
    for k, child in enumerate(children):
        xi[k] = np.random.default_rng(child).standard_normal(n_samples)
    return xi


def draw_realizations(spectrum, n_modes, n_samples, seed, xi=None):
    """Synthesize realizations from a truncated spectrum.

    ``xi`` is a test hook: when given (shape (n_modes, n_samples)) it
    replaces the seeded standard-normal draws.
    """
    if n_modes < 1 or n_modes > spectrum.n_modes:
        raise InvalidArgumentError(
            f"n_modes must be in [1, {spectrum.n_modes}], got {n_modes}"
        )
    if n_samples < 1:
        raise InvalidArgumentError(f"n_samples must be >= 1, got {n_samples}")
    lam = spectrum.eigenvalues[:n_modes]
    if np.any(lam < 0):
        raise InvalidArgumentError("negative eigenvalues in spectrum")
    if xi is None:
        xi = standard_normal_coefficients(n_modes, n_samples, seed)
    else:
        xi = np.asarray(xi, dtype=np.float64)
        if xi.shape != (n_modes, n_samples):
            raise InvalidArgumentError(
                f"xi shape {xi.shape} != ({n_modes}, {n_samples})"
            )
    values = spectrum.eigenvectors[:, :n_modes] @ (np.sqrt(lam)[:, None] * xi)
    return SampleEnsemble(values, spectrum.grid, seed, n_modes)


def project_coefficients(ensemble, spectrum, n_modes):
    """Weighted projection of realizations onto the leading eigenfunctions.

    zeta_k^(p) = sum_j w_j Y_j^(p) f_kj and xi_k = zeta_k / sqrt(lambda_k).
    Modes with lambda <= eps are reported as skipped (their xi rows are
    zero) rather than emitting NaN.
    """
    if n_modes < 1 or n_modes > spectrum.n_modes:
        raise InvalidArgumentError(
            f"n_modes must be in [1, {spectrum.n_modes}], got {n_modes}"
        )
    w = spectrum.grid.weights
    f = spectrum.eigenvectors[:, :n_modes]
    lam = spectrum.eigenvalues[:n_modes]
    zeta = f.T @ (w[:, None] * ensemble.values)
    ok = lam > ZERO_LAMBDA_EPS
    skipped = tuple(int(k) for k in np.flatnonzero(~ok))
    if skipped:
        warnings.warn(
            f"project_coefficients: skipped modes with lambda <= "
            f"{ZERO_LAMBDA_EPS}: {skipped}",
            RuntimeWarning,
        )
    xi = np.zeros_like(zeta)
    xi[ok] = zeta[ok] / np.sqrt(lam[ok])[:, None]
    return CoefficientSet(xi, zeta, skipped)


def center_rows(values):
    """Subtract the empirical row mean (idempotent)."""
    return values - values.mean(axis=1, keepdims=True)


def svd_spectrum(ensemble, grid=None, n_modes=None):
    """Empirical KL spectrum from the weight-scaled sample matrix.

    The ensemble is centered, scaled by W^{1/2}/sqrt(n-1), and the thin
    SVD taken: lambda_k are the squared singular values and
    f_k = W^{-1/2} u_k the weight-orthonormal eigenvectors. Centering
    bounds the rank by min(m, n-1).
    """
    grid = ensemble.grid if grid is None else grid
    n = ensemble.n_samples
    if n < 2:
        raise InvalidArgumentError(f"need at least 2 samples, got {n}")
    if len(grid) != ensemble.values.shape[0]:
        raise InvalidArgumentError("grid size does not match ensemble rows")
    w = grid.weights
    active = np.flatnonzero(w > 0)
    sw = np.sqrt(w[active])
    centered = center_rows(ensemble.values[active])
    b = sw[:, None] * centered / np.sqrt(n - 1.0)
    u, s, _ = np.linalg.svd(b, full_matrices=False)
    lam = s**2
    if n_modes is not None:
        if n_modes < 1:
            raise InvalidArgumentError(f"n_modes must be >= 1, got {n_modes}")
        n_modes = min(n_modes, lam.size)
        lam = lam[:n_modes]
        u = u[:, :n_modes]
    f = np.zeros((len(grid), lam.size))
    f[active] = _fix_signs(u / sw[:, None])
    return KLSpectrum(lam, f, grid, "svd")
