"""Closed-form KLE eigen-solutions used as ground-truth oracles.

Two families are covered:

* exponential kernel ``exp(-|x1 - x2| / lc)`` on [0, 1] under a uniform
  density, whose eigenfrequencies solve the transcendental equation
  ``tan(w) = 2 lc w / (lc^2 w^2 - 1)``;
* squared-exponential kernel under a Gaussian spatial density N(0, sx^2),
  whose spectrum decays geometrically with a rate set by the ratio
  ``rho = lc / sx`` and whose eigenfunctions are weighted Hermite
  polynomials.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from klefield.errors import InvalidArgumentError

_ROOT_SCAN_POINTS = 256
_ROOT_XTOL = 1e-13
_LAMBDA_UNDERFLOW = 1e-300


# ---------------------------------------------------------------------------
# exponential kernel on [0, 1]
# ---------------------------------------------------------------------------

def _char(w, lc):
    # singularity-free form of tan(w) (lc^2 w^2 - 1) = 2 lc w
    return np.sin(w) * (lc * lc * w * w - 1.0) - 2.0 * lc * w * np.cos(w)


def exp_kernel_roots(ell_c, n_modes):
    """First ``n_modes`` positive roots of the eigenfrequency equation.

    One root lies in each interval ((k-1)pi, k pi); each interval is
    scanned for the sign change of the continuous characteristic function
    and the root is located by bisection to machine-level tolerance.
    For large k the roots approach k*pi; for small ``ell_c`` they approach
    (2k-1)*pi/2.
    """
    if ell_c <= 0:
        raise InvalidArgumentError(f"ell_c must be positive, got {ell_c}")
    if n_modes < 1:
        raise InvalidArgumentError(f"n_modes must be >= 1, got {n_modes}")
    roots = np.empty(n_modes)
    for k in range(1, n_modes + 1):
        lo, hi = (k - 1) * math.pi, k * math.pi
        grid = np.linspace(lo, hi, _ROOT_SCAN_POINTS)
        vals = _char(grid, ell_c)
        # skip the trivial root at w = 0 and exact zeros at scan points
        sign = np.sign(vals)
        sign[grid == 0.0] = 0.0
        idx = np.flatnonzero((sign[:-1] * sign[1:]) < 0)
        if idx.size == 0:
            raise RuntimeError(
                f"root bracketing failed in (({k - 1})pi, {k}pi) for ell_c={ell_c}"
            )
        a, b = grid[idx[0]], grid[idx[0] + 1]
        roots[k - 1] = bisect(_char, a, b, args=(ell_c,), xtol=_ROOT_XTOL)
    return roots


@dataclass(frozen=True)
class ExpEigenpair:
    """Analytic eigenpair of the exponential kernel on [0, 1]."""

    k: int
    omega: float
    lam: float
    ell_c: float

    def evaluate(self, x):
        """Orthonormal eigenfunction f_k(x) on [0, 1]."""
        x = np.asarray(x, dtype=np.float64)
        lc, w = self.ell_c, self.omega
        norm = math.sqrt(2.0) * lc * w / math.sqrt(lc * lc * w * w + 2.0 * lc + 1.0)
        return norm * (np.cos(w * x) + np.sin(w * x) / (lc * w))


def exp_kernel_eigenpairs(ell_c, n_modes):
    """Analytic eigenpairs: lambda_k = 2 lc / (lc^2 w_k^2 + 1), descending."""
    roots = exp_kernel_roots(ell_c, n_modes)
    lams = 2.0 * ell_c / (ell_c * ell_c * roots**2 + 1.0)
    return [
        ExpEigenpair(k + 1, float(roots[k]), float(lams[k]), ell_c)
        for k in range(n_modes)
    ]


# ---------------------------------------------------------------------------
# squared-exponential kernel under N(0, sigma_x^2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SqExpSpectrum:
    """Parameter block of the Gaussian-measure squared-exponential solution."""

    a: float
    b: float
    c: float
    A: float
    B: float
    sigma_x: float
    ell_c: float


def sqexp_params(sigma_x, ell_c):
    if sigma_x <= 0 or ell_c <= 0:
        raise InvalidArgumentError("sigma_x and ell_c must be positive")
    a = 1.0 / (4.0 * sigma_x * sigma_x)
    b = 1.0 / (2.0 * ell_c * ell_c)
    c = math.sqrt(a * a + 2.0 * a * b)
    A = a + b + c
    return SqExpSpectrum(a, b, c, A, b / A, sigma_x, ell_c)


def sqexp_eigenvalues(sigma_x, ell_c, n_modes):
    """Geometric spectrum lambda_k = sqrt(2a/A) B^(k-1).

    Evaluated in log space; entries below 1e-300 are truncated (with a
    warning), so the returned list may be shorter than requested. The
    spectrum depends only on the ratio rho = ell_c / sigma_x.
    """
    if n_modes < 1:
        raise InvalidArgumentError(f"n_modes must be >= 1, got {n_modes}")
    p = sqexp_params(sigma_x, ell_c)
    k = np.arange(1, n_modes + 1)
    loglam = 0.5 * math.log(2.0 * p.a / p.A) + (k - 1) * math.log(p.B)
    keep = loglam >= math.log(_LAMBDA_UNDERFLOW)
    if not np.all(keep):
        warnings.warn(
            f"sqexp_eigenvalues: truncated to {int(keep.sum())} modes "
            f"(underflow below {_LAMBDA_UNDERFLOW})",
            RuntimeWarning,
        )
    return np.exp(loglam[keep])


def sqexp_eigenvalues_ratio_form(sigma_x, ell_c, n_modes):
    """Same spectrum via the rho-only expression; cross-check of the above."""
    rho = ell_c / sigma_x
    k = np.arange(1, n_modes + 1)
    base = rho * rho + 2.0 + rho * math.sqrt(rho * rho + 4.0)
    loglam = (k - 0.5) * (math.log(2.0) - math.log(base)) + math.log(rho)
    keep = loglam >= math.log(_LAMBDA_UNDERFLOW)
    return np.exp(loglam[keep])


def hermite_physicist(k, x):
    """H_k(x) by the three-term recursion H_{k+1} = 2x H_k - 2k H_{k-1}."""
    if k < 0:
        raise InvalidArgumentError("k must be >= 0")
    x = np.asarray(x, dtype=np.float64)
    h_prev = np.ones_like(x)
    if k == 0:
        return h_prev
    h = 2.0 * x
    for j in range(1, k):
        h, h_prev = 2.0 * x * h - 2.0 * j * h_prev, h
    return h


def _hermite_normalized(k, x):
    # H_k(x) / sqrt(2^k k!), recursion kept in the normalized scale so the
    # 2^k k! prefactor never overflows
    h_prev = np.ones_like(x)
    if k == 0:
        return h_prev
    h = math.sqrt(2.0) * x
    for j in range(1, k):
        h, h_prev = (
            x * math.sqrt(2.0 / (j + 1)) * h - math.sqrt(j / (j + 1)) * h_prev,
            h,
        )
    return h


def sqexp_eigenfunction(sigma_x, ell_c, k, x):
    """Orthonormal (under N(0, sigma_x^2)) eigenfunction f_k evaluated at x.

    f_k(x) = sqrt(2 sigma_x sqrt(c) / (2^(k-1) (k-1)!))
             * exp(-(c - a) x^2) * H_{k-1}(sqrt(2c) x)

    The factorial prefactor is folded into a normalized Hermite recursion,
    so evaluation stays finite for any practical mode index.
    """
    if k < 1:
        raise InvalidArgumentError(f"mode index must be >= 1, got {k}")
    p = sqexp_params(sigma_x, ell_c)
    x = np.asarray(x, dtype=np.float64)
    pref = math.sqrt(2.0 * sigma_x * math.sqrt(p.c))
    y = math.sqrt(2.0 * p.c) * x
    out = pref * np.exp(-(p.c - p.a) * x * x) * _hermite_normalized(k - 1, y)
    return out if out.ndim else float(out)
