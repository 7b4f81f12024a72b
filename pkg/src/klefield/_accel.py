"""Hot numeric kernels: numba-jitted versions with pure-numpy fallbacks.

The jitted path is used when numba imports successfully and the environment
variable ``KLE_NO_NUMBA`` is unset (or "0"). Setting ``KLE_NO_NUMBA=1``
forces the numpy fallbacks; ``benchmarks/bench_accel.py`` compares the two.
``KLE_THREADS`` caps the numba thread pool.

Kernel family codes: 0 = exponential, 1 = squared-exponential.
"""

import math
import os

import numpy as np
from scipy.spatial.distance import pdist, squareform

FAMILY_CODES = {"exponential": 0, "squared_exponential": 1}


def _env_flag(name):
    return os.environ.get(name, "0").strip().lower() in ("1", "true", "yes")


try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _env_flag("KLE_NO_NUMBA")

if USE_NUMBA and os.environ.get("KLE_THREADS"):
    numba.set_num_threads(max(1, int(os.environ["KLE_THREADS"])))


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def pairwise_covariance_np(points, corr_length, variance, family_code):
    """Dense covariance matrix from Euclidean point distances.

    Each unordered pair is evaluated once (pdist) and mirrored, so the
    result is symmetric bit-exactly; the diagonal is set to ``variance``.
    """
    n = points.shape[0]
    if n == 1:
        return np.array([[variance]], dtype=np.float64)
    d = pdist(points)
    if family_code == 0:
        v = variance * np.exp(-d / corr_length)
    else:
        v = variance * np.exp(-(d * d) / (2.0 * corr_length * corr_length))
    k = squareform(v)
    np.fill_diagonal(k, variance)
    return k


def covariance_from_distances_np(dmat, corr_length, variance, family_code):
    """Covariance matrix from a precomputed symmetric distance matrix."""
    if family_code == 0:
        k = variance * np.exp(-dmat / corr_length)
    else:
        k = variance * np.exp(-(dmat * dmat) / (2.0 * corr_length * corr_length))
    np.fill_diagonal(k, variance)
    return k


def gaussian_kde_on_grid_np(samples, grid, bandwidth):
    """Gaussian KDE evaluated on a 1D grid, chunked to bound memory."""
    n = samples.size
    out = np.zeros(grid.size)
    norm = 1.0 / (n * bandwidth * math.sqrt(2.0 * math.pi))
    chunk = 512
    for lo in range(0, n, chunk):
        s = samples[lo:lo + chunk]
        z = (grid[:, None] - s[None, :]) / bandwidth
        out += np.exp(-0.5 * z * z).sum(axis=1)
    return out * norm


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _pairwise_covariance_nb(points, corr_length, variance, family_code):
        n, dim = points.shape
        k = np.empty((n, n), dtype=np.float64)
        for i in prange(n):
            k[i, i] = variance
            for j in range(i + 1, n):
                s = 0.0
                for c in range(dim):
                    t = points[i, c] - points[j, c]
                    s += t * t
                if family_code == 0:
                    v = variance * math.exp(-math.sqrt(s) / corr_length)
                else:
                    v = variance * math.exp(-s / (2.0 * corr_length * corr_length))
                k[i, j] = v
                k[j, i] = v
        return k

    @njit(cache=True, parallel=True)
    def _covariance_from_distances_nb(dmat, corr_length, variance, family_code):
        n = dmat.shape[0]
        k = np.empty((n, n), dtype=np.float64)
        for i in prange(n):
            k[i, i] = variance
            for j in range(i + 1, n):
                d = dmat[i, j]
                if family_code == 0:
                    v = variance * math.exp(-d / corr_length)
                else:
                    v = variance * math.exp(-d * d / (2.0 * corr_length * corr_length))
                k[i, j] = v
                k[j, i] = v
        return k

    @njit(cache=True, parallel=True)
    def _gaussian_kde_on_grid_nb(samples, grid, bandwidth):
        n = samples.size
        m = grid.size
        out = np.empty(m, dtype=np.float64)
        norm = 1.0 / (n * bandwidth * math.sqrt(2.0 * math.pi))
        for i in prange(m):
            acc = 0.0
            for j in range(n):
                z = (grid[i] - samples[j]) / bandwidth
                acc += math.exp(-0.5 * z * z)
            out[i] = acc * norm
        return out


# ---------------------------------------------------------------------------
# dispatchers
# ---------------------------------------------------------------------------

def pairwise_covariance(points, corr_length, variance, family_code):
    points = np.ascontiguousarray(points, dtype=np.float64)
    if USE_NUMBA:
        return _pairwise_covariance_nb(points, corr_length, variance, family_code)
    return pairwise_covariance_np(points, corr_length, variance, family_code)


def covariance_from_distances(dmat, corr_length, variance, family_code):
    dmat = np.ascontiguousarray(dmat, dtype=np.float64)
    if USE_NUMBA:
        return _covariance_from_distances_nb(dmat, corr_length, variance, family_code)
    return covariance_from_distances_np(dmat, corr_length, variance, family_code)


def gaussian_kde_on_grid(samples, grid, bandwidth):
    samples = np.ascontiguousarray(samples, dtype=np.float64)
    grid = np.ascontiguousarray(grid, dtype=np.float64)
    if USE_NUMBA:
        return _gaussian_kde_on_grid_nb(samples, grid, bandwidth)
    return gaussian_kde_on_grid_np(samples, grid, bandwidth)
