"""Statistical diagnostics: KDE-based KL divergence, trend fits, alignment."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from klefield import _accel
from klefield.errors import InvalidArgumentError

KDE_WINDOW = 8.0
KDE_POINTS = 4096
KDE_FLOOR = 1e-12
UNALIGNABLE_RTOL = 1e-8


def silverman_bandwidth(samples):
    """Silverman's rule 1.06 * std * n^(-1/5)."""
    n = samples.size
    return 1.06 * float(np.std(samples, ddof=1)) * n ** (-0.2)


def gaussian_kde_density(samples, grid):
    """Gaussian KDE with Silverman bandwidth, evaluated on a 1D grid."""
    return _accel.gaussian_kde_on_grid(samples, grid, silverman_bandwidth(samples))


def _kde_grid():
    h = 2.0 * KDE_WINDOW / KDE_POINTS
    return -KDE_WINDOW + (np.arange(KDE_POINTS) + 0.5) * h, h


def kl_divergence_to_standard_normal(samples):
    """D_KL(N(0,1) || KDE of the samples) by midpoint quadrature on [-8, 8].

    The KDE density is floored at 1e-12 inside the integrand. Small
    negative results from quadrature error are possible and returned raw.
    """
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.size < 8:
        raise InvalidArgumentError(
            f"need at least 8 samples, got {samples.size}"
        )
    grid, h = _kde_grid()
    q = np.maximum(gaussian_kde_density(samples, grid), KDE_FLOOR)
    p = np.exp(-0.5 * grid**2) / math.sqrt(2.0 * math.pi)
    return float(np.sum(p * (np.log(p) - np.log(q))) * h)


def fit_inverse_sqrt_trend(ns, means):
    """Least-squares power-law fit log(mean) = log(c) + slope * log(n).

    A slope near -1/2 corresponds to Monte Carlo convergence.
    Returns ``(c, slope)``.
    """
    ns = np.asarray(ns, dtype=np.float64)
    means = np.asarray(means, dtype=np.float64)
    if ns.size != means.size or np.unique(ns).size < 2:
        raise InvalidArgumentError("need at least 2 distinct sample counts")
    if np.any(means <= 0):
        raise InvalidArgumentError("means must be positive for a log-log fit")
    coeffs = np.polyfit(np.log(ns), np.log(means), 1)
    return float(np.exp(coeffs[1])), float(coeffs[0])


def align_mode_signs(reference, target):
    """Per-mode sign (+1/-1) aligning a target spectrum to a reference.

    For each mode the reference node with the largest |f| is matched to
    the nearest target node (Euclidean, ties by lowest index) and the two
    signs compared. Modes whose matched target value is negligible
    (< 1e-8 of the mode's max |f|) are flagged unalignable with sign 0.
    The target is not mutated; callers apply the signs.
    """
    if reference.n_modes != target.n_modes:
        raise InvalidArgumentError(
            f"mode count mismatch: {reference.n_modes} vs {target.n_modes}"
        )
    tree = cKDTree(target.grid.points)
    signs = np.ones(reference.n_modes, dtype=np.int64)
    for k in range(reference.n_modes):
        fr = reference.eigenvectors[:, k]
        ft = target.eigenvectors[:, k]
        jref = int(np.argmax(np.abs(fr)))
        _, jtgt = tree.query(reference.grid.points[jref])
        if abs(ft[jtgt]) < UNALIGNABLE_RTOL * np.abs(ft).max():
            signs[k] = 0
        elif fr[jref] * ft[jtgt] < 0:
            signs[k] = -1
    return signs


def orthonormality_residual(spectrum):
    """max_{k,l} |sum_j w_j f_kj f_lj - delta_kl| over retained modes."""
    f = spectrum.eigenvectors
    w = spectrum.grid.weights
    gram = f.T @ (w[:, None] * f)
    return float(np.abs(gram - np.eye(f.shape[1])).max())


@dataclass(frozen=True)
class KLDivergenceReport:
    """D_KL values per (mode, seed, sample count), with summary statistics."""

    d_kl: np.ndarray  # shape (n_counts, n_seeds, n_modes)
    n_samples: np.ndarray
    seeds: np.ndarray

    def mean_per_count(self):
        return self.d_kl.mean(axis=(1, 2))

    def std_per_count(self):
        return self.d_kl.std(axis=(1, 2))

    def trend_fit(self):
        return fit_inverse_sqrt_trend(self.n_samples, self.mean_per_count())

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("mode,seed,n_samples,d_kl\n")
            for ci, n in enumerate(self.n_samples):
                for si, seed in enumerate(self.seeds):
                    for k in range(self.d_kl.shape[2]):
                        fh.write(
                            f"{k + 1},{seed},{n},{self.d_kl[ci, si, k]:.17g}\n"
                        )

    def summary_to_csv(self, path):
        c, slope = self.trend_fit()
        means = self.mean_per_count()
        stds = self.std_per_count()
        with open(path, "w") as fh:
            fh.write("n_samples,mean,std,fit_c,fit_slope\n")
            for n, m, s in zip(self.n_samples, means, stds):
                fh.write(f"{n},{m:.17g},{s:.17g},{c:.17g},{slope:.17g}\n")
