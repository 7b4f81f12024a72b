"""One rendering function per figure family.

Every function takes input CSV path(s) and an output image path, reads
the table(s) through :mod:`kleplots.io`, and writes a single PNG/PDF
(chosen by the output extension). Inputs are never modified.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from kleplots.io import SchemaError, mode_columns, read_table


def _finish(fig, out_path):
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def spectrum(spectrum_csv, out_path, analytic_csv=None):
    """Semi-log eigenvalue decay, optionally with an analytic overlay."""
    tab = read_table(spectrum_csv, ["k", "lambda"])
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.semilogy(tab["k"], tab["lambda"], "o", ms=4, label="numerical")
    if analytic_csv is not None:
        ref = read_table(analytic_csv, ["k", "lambda"])
        ax.semilogy(ref["k"], ref["lambda"], "-", lw=1, label="analytic")
        ax.legend()
    ax.set_xlabel("mode index $k$")
    ax.set_ylabel(r"$\lambda_k$")
    _finish(fig, out_path)


def eigenfunctions(eigenvectors_csv, out_path, modes=(1, 2, 3, 4)):
    """1D eigenfunction line plots over the grid coordinate."""
    tab = read_table(eigenvectors_csv, ["x0"])
    available = mode_columns(tab)
    if not available:
        raise SchemaError(f"{eigenvectors_csv}: no f_<k> columns")
    order = np.argsort(tab["x0"])
    fig, ax = plt.subplots(figsize=(6, 4))
    for k in modes:
        col = f"f_{k}"
        if col not in tab:
            raise SchemaError(f"{eigenvectors_csv}: missing column(s) {col}")
        ax.plot(tab["x0"][order], tab[col][order], lw=1, label=f"$f_{{{k}}}$")
    ax.set_xlabel("$x$")
    ax.set_ylabel("$f_k(x)$")
    ax.legend(ncols=2)
    _finish(fig, out_path)


def coefficient_histogram(coefficients_csv, out_path, mode=1, bins=40):
    """Histogram of one mode's coefficients with the N(0,1) density."""
    tab = read_table(coefficients_csv, ["mode", "xi"])
    sel = tab["xi"][tab["mode"] == mode]
    if sel.size == 0:
        raise SchemaError(f"{coefficients_csv}: no rows for mode {mode}")
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.hist(sel, bins=bins, density=True, alpha=0.6, label=rf"$\xi_{{{mode}}}$")
    x = np.linspace(-4, 4, 400)
    ax.plot(
        x,
        np.exp(-0.5 * x**2) / math.sqrt(2 * math.pi),
        "k-",
        lw=1.5,
        label="N(0,1)",
    )
    ax.set_xlabel(r"$\xi$")
    ax.set_ylabel("density")
    ax.legend()
    _finish(fig, out_path)


def kl_convergence(summary_csv, out_path):
    """Mean divergence vs sample count (log-log) with the fitted trend."""
    tab = read_table(summary_csv, ["n_samples", "mean", "std", "fit_c", "fit_slope"])
    n, mean = tab["n_samples"], tab["mean"]
    c, slope = tab["fit_c"][0], tab["fit_slope"][0]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.errorbar(n, mean, yerr=tab["std"], fmt="o", ms=5, capsize=3, label="mean")
    xs = np.geomspace(n.min(), n.max(), 100)
    ax.plot(xs, c * xs**slope, "--", lw=1, label=f"$n^{{{slope:.2f}}}$ fit")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("samples $n$")
    ax.set_ylabel(r"$D_{\mathrm{KL}}$")
    ax.legend()
    _finish(fig, out_path)


def mesh_mode(vertices_csv, out_path, mode=1):
    """2D eigenmode heatmap on mesh vertices (triangulated fill)."""
    tab = read_table(vertices_csv, ["x0", "x1", f"f_{mode}"])
    fig, ax = plt.subplots(figsize=(6, 3.5))
    tpc = ax.tricontourf(tab["x0"], tab["x1"], tab[f"f_{mode}"], levels=30)
    fig.colorbar(tpc, ax=ax, label=f"$f_{{{mode}}}$")
    ax.set_aspect("equal")
    ax.set_xlabel("$x$")
    ax.set_ylabel("$y$")
    _finish(fig, out_path)


def torus_slice(slice_csv, out_path, mode=1):
    """Mid-plane eigenmode scatter for the voxelized torus."""
    tab = read_table(slice_csv, ["x0", "x1", f"f_{mode}"])
    fig, ax = plt.subplots(figsize=(5, 5))
    sc = ax.scatter(tab["x0"], tab["x1"], c=tab[f"f_{mode}"], s=10, marker="s")
    fig.colorbar(sc, ax=ax, label=f"$f_{{{mode}}}$")
    ax.set_aspect("equal")
    ax.set_xlabel("$x$")
    ax.set_ylabel("$y$")
    _finish(fig, out_path)


def distance_histogram(histogram_csv, out_path):
    """Pairwise-distance histogram with the sampled mean marked."""
    tab = read_table(histogram_csv, ["bin_left", "bin_right", "count", "mean"])
    widths = tab["bin_right"] - tab["bin_left"]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.bar(tab["bin_left"], tab["count"], width=widths, align="edge", alpha=0.7)
    ax.axvline(tab["mean"][0], color="k", ls="--", lw=1, label="mean")
    ax.set_xlabel("distance")
    ax.set_ylabel("pair count")
    ax.legend()
    _finish(fig, out_path)
