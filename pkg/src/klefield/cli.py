"""Command-line front end: batch experiments emitting CSV/JSON artifacts.

Subcommands
-----------
spectrum-1d   eigenvalue/eigenvector study on a 1D grid, with analytic
              reference spectra where a closed form exists
svd-study     sample-based SVD spectra vs the direct solve, coefficient
              statistics, and a KL-divergence convergence report
mesh2d        spectra on an unstructured triangle mesh (bundled or user)
torus3d       voxelized torus with Euclidean and shortest-interior-path
              covariance kernels

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 input file
error, 5 resource guard. Every successful run writes a ``manifest.json``
(flags, package versions, seeds, wall time) to the output directory.
"""

import argparse
import importlib.resources
import json
import sys
import time
from pathlib import Path

import numpy as np
import scipy

import klefield
from klefield.analytic import exp_kernel_eigenpairs, sqexp_eigenvalues
from klefield.diagnostics import (
    KLDivergenceReport,
    align_mode_signs,
    kl_divergence_to_standard_normal,
)
from klefield.errors import (
    DisconnectedGraphError,
    InvalidArgumentError,
    InvalidMeshError,
)
from klefield.fredholm import solve_fredholm
from klefield.geometry import (
    EUCLIDEAN,
    TriangleMesh,
    all_pairs_shortest_paths,
    barycentric_to_vertices,
    knn_graph,
    make_torus_domain,
    pairwise_distance_histogram,
    write_distance_matrix,
)
from klefield.grids import (
    from_triangle_mesh,
    from_voxel_domain,
    gauss_hermite_1d,
    mc_gaussian_1d,
    uniform_midpoint_1d,
)
from klefield.kernels import Kernel, covariance_matrix
from klefield.sampling import (
    SampleEnsemble,
    center_rows,
    draw_realizations,
    project_coefficients,
    svd_spectrum,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_INPUT = 4
EXIT_RESOURCE = 5

KERNEL_FAMILIES = {"exp": "exponential", "sqexp": "squared_exponential"}

TORUS_R = 3.0
TORUS_r = 1.0
TORUS_BOX_MIN = (-4.05, -4.05, -1.05)
TORUS_BOX_MAX = (4.05, 4.05, 1.05)
TORUS_NODE_COUNTS = {"low": (21, 21, 21), "paper": (41, 41, 41)}

# dense N x N float64 all-pairs matrix above this footprint requires --force
APSP_GUARD_BYTES = 2 * 1024**3


def bundled_mesh_path(name):
    """Filesystem path of a bundled mesh fixture ('coarse' or 'dense')."""
    ref = importlib.resources.files("klefield").joinpath(
        "assets", f"{name}_mesh.json"
    )
    with importlib.resources.as_file(ref) as p:
        return Path(p)


def _parse_float_list(text):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InvalidArgumentError(f"not a comma-separated float list: {text!r}")
    if not vals:
        raise InvalidArgumentError("empty value list")
    return vals


def _parse_int_list(text):
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InvalidArgumentError(f"not a comma-separated int list: {text!r}")
    if not vals:
        raise InvalidArgumentError("empty value list")
    return vals


def _lc_tag(lc):
    return f"{lc:g}".replace(".", "p")


def _write_manifest(out_dir, command, args, seeds, t_start):
    flags = {
        k: v for k, v in vars(args).items() if k != "func"
    }
    manifest = {
        "command": command,
        "flags": flags,
        "seeds": seeds,
        "versions": {
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "klefield": klefield.__version__,
        },
        "wall_time_s": round(time.perf_counter() - t_start, 3),
    }
    with open(Path(out_dir) / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _make_out_dir(path):
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# spectrum-1d
# ---------------------------------------------------------------------------

def _build_1d_grid(args):
    if args.grid == "uniform":
        return uniform_midpoint_1d(args.nx, 1.0)
    if args.grid == "mc":
        return mc_gaussian_1d(args.nx, args.sigma_x, args.seed)
    return gauss_hermite_1d(args.nx, args.sigma_x)


def _analytic_eigenvalues(args, n_modes):
    """Closed-form spectrum when one exists for the kernel/grid pairing."""
    if args.kernel == "exp" and args.grid == "uniform":
        return np.array([p.lam for p in exp_kernel_eigenpairs(args.lc, n_modes)])
    if args.kernel == "sqexp" and args.grid in ("mc", "gh"):
        return sqexp_eigenvalues(args.sigma_x, args.lc, n_modes)
    return None


def cmd_spectrum_1d(args):
    t0 = time.perf_counter()
    out = _make_out_dir(args.out)
    grid = _build_1d_grid(args)
    kernel = Kernel(KERNEL_FAMILIES[args.kernel], args.lc)
    spectrum = solve_fredholm(covariance_matrix(kernel, grid), grid, args.modes)

    grid.to_csv(out / "grid.csv")
    spectrum.spectrum_to_csv(out / "spectrum.csv")
    spectrum.eigenvectors_to_csv(out / "eigenvectors.csv")

    analytic = _analytic_eigenvalues(args, spectrum.n_modes)
    if analytic is not None:
        m = min(analytic.size, spectrum.n_modes)
        with open(out / "analytic_spectrum.csv", "w") as fh:
            fh.write("k,lambda\n")
            for k in range(m):
                fh.write(f"{k + 1},{analytic[k]:.17g}\n")
        rel = np.abs(spectrum.eigenvalues[:m] - analytic[:m]) / analytic[:m]
        print(f"max relative eigenvalue error vs analytic: {rel.max():.6e}")

    _write_manifest(out, "spectrum-1d", args, [args.seed], t0)
    return EXIT_OK


# ---------------------------------------------------------------------------
# svd-study
# ---------------------------------------------------------------------------

def study_seed(base_seed, seed_index, n_samples):
    """Deterministic per-(seed, sample-count) RNG seed for the SVD study."""
    return base_seed + 1000 * seed_index + n_samples


def run_kl_divergence_study(grid, kernel, n_modes, nspls, n_seeds, base_seed=0):
    """D_KL of SVD-recovered coefficient marginals vs N(0,1).

    For each (sample count, seed): draw realizations from the direct
    spectrum, recover the empirical spectrum by SVD, and project the
    centered ensemble onto it — the coefficients of the SVD expansion
    itself. Returns the reference spectrum, per-seed empirical spectra
    for the largest sample count, and the divergence report.
    """
    reference = solve_fredholm(covariance_matrix(kernel, grid), grid, 30)
    d_kl = np.empty((len(nspls), n_seeds, n_modes))
    last_spectra = {}
    for ci, n in enumerate(nspls):
        for si in range(n_seeds):
            seed = study_seed(base_seed, si, n)
            ens = draw_realizations(reference, reference.n_modes, n, seed)
            emp = svd_spectrum(ens, n_modes=n_modes)
            centered = SampleEnsemble(
                center_rows(ens.values), ens.grid, ens.seed, ens.n_modes_used
            )
            coef = project_coefficients(centered, emp, n_modes)
            for k in range(n_modes):
                d_kl[ci, si, k] = kl_divergence_to_standard_normal(coef.xi[k])
            if ci == len(nspls) - 1:
                last_spectra[si] = (emp, coef)
    report = KLDivergenceReport(
        d_kl, np.asarray(nspls), np.arange(n_seeds, dtype=np.int64)
    )
    return reference, last_spectra, report


def cmd_svd_study(args):
    t0 = time.perf_counter()
    nspls = _parse_int_list(args.nspls)
    if args.seeds < 1:
        raise InvalidArgumentError(f"--seeds must be >= 1, got {args.seeds}")
    if any(n < 2 for n in nspls):
        raise InvalidArgumentError("every sample count must be >= 2")
    out = _make_out_dir(args.out)

    grid = uniform_midpoint_1d(args.nx, 1.0)
    kernel = Kernel("exponential", args.lc)
    reference, last_spectra, report = run_kl_divergence_study(
        grid, kernel, args.modes, nspls, args.seeds, args.seed
    )

    reference.spectrum_to_csv(out / "fredholm_spectrum.csv")
    for si, (emp, coef) in last_spectra.items():
        emp.spectrum_to_csv(out / f"svd_spectrum_n{nspls[-1]}_seed{si}.csv")
        if si == 0:
            coef.to_csv(out / f"coefficients_n{nspls[-1]}_seed0.csv")
    report.to_csv(out / "kl_divergence.csv")
    report.summary_to_csv(out / "kl_divergence_summary.csv")

    c, slope = report.trend_fit()
    print(f"fitted log-log trend: c={c:.4g} slope={slope:.4f}")
    seeds = [
        study_seed(args.seed, si, n) for n in nspls for si in range(args.seeds)
    ]
    _write_manifest(out, "svd-study", args, seeds, t0)
    return EXIT_OK


# ---------------------------------------------------------------------------
# mesh2d
# ---------------------------------------------------------------------------

def _load_mesh(spec_text):
    if spec_text in ("coarse", "dense"):
        path = bundled_mesh_path(spec_text)
    else:
        path = Path(spec_text)
    if not path.is_file():
        raise FileNotFoundError(f"mesh file not found: {path}")
    return TriangleMesh.from_json(path)


def _read_eigenvector_csv(path):
    """Reload an eigenvector table written by eigenvectors_to_csv."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    dim = sum(1 for c in header if c.startswith("x"))
    n_modes = sum(1 for c in header if c.startswith("f_"))
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    points = data[:, 1 : 1 + dim]
    vectors = data[:, 1 + dim : 1 + dim + n_modes]
    return points, vectors


class _LoadedSpectrum:
    """Minimal spectrum view over a reloaded eigenvector table."""

    def __init__(self, points, vectors):
        self.eigenvectors = vectors
        self.n_modes = vectors.shape[1]
        self.grid = type("G", (), {"points": points})()


def cmd_mesh2d(args):
    t0 = time.perf_counter()
    lcs = _parse_float_list(args.lc)
    try:
        mesh = _load_mesh(args.mesh)
    except (FileNotFoundError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvalidMeshError, InvalidArgumentError, KeyError) as exc:
        print(f"error: invalid mesh file: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = _make_out_dir(args.out)

    grid = from_triangle_mesh(mesh)
    print(
        f"mesh: {mesh.triangles.shape[0]} elements, "
        f"{mesh.vertices.shape[0]} vertices"
    )
    for lc in lcs:
        tag = _lc_tag(lc)
        kernel = Kernel("squared_exponential", lc)
        spectrum = solve_fredholm(covariance_matrix(kernel, grid), grid, args.modes)
        spectrum.spectrum_to_csv(out / f"spectrum_lc{tag}.csv")
        spectrum.eigenvectors_to_csv(out / f"eigenvectors_lc{tag}.csv")
        vertex_vals = np.column_stack(
            [
                barycentric_to_vertices(mesh, spectrum.eigenvectors[:, k])
                for k in range(spectrum.n_modes)
            ]
        )
        with open(out / f"eigenvectors_vertices_lc{tag}.csv", "w") as fh:
            cols = ["vertex_index", "x0", "x1"]
            cols += [f"f_{k}" for k in range(1, spectrum.n_modes + 1)]
            fh.write(",".join(cols) + "\n")
            for j in range(mesh.vertices.shape[0]):
                row = [str(j)]
                row += [f"{v:.17g}" for v in mesh.vertices[j]]
                row += [f"{v:.17g}" for v in vertex_vals[j]]
                fh.write(",".join(row) + "\n")

        if args.align_to:
            ref_path = Path(args.align_to) / f"eigenvectors_lc{tag}.csv"
            if not ref_path.is_file():
                print(f"error: reference not found: {ref_path}", file=sys.stderr)
                return EXIT_INPUT
            ref = _LoadedSpectrum(*_read_eigenvector_csv(ref_path))
            m = min(ref.n_modes, spectrum.n_modes)
            ref_view = _LoadedSpectrum(ref.grid.points, ref.eigenvectors[:, :m])
            tgt_view = _LoadedSpectrum(grid.points, spectrum.eigenvectors[:, :m])
            signs = align_mode_signs(ref_view, tgt_view)
            with open(out / f"alignment_signs_lc{tag}.csv", "w") as fh:
                fh.write("k,sign\n")
                for k, s in enumerate(signs, start=1):
                    fh.write(f"{k},{s}\n")

    _write_manifest(out, "mesh2d", args, [], t0)
    return EXIT_OK


# ---------------------------------------------------------------------------
# torus3d
# ---------------------------------------------------------------------------

def _histogram_to_csv(path, edges, counts, mean):
    with open(path, "w") as fh:
        fh.write("bin_left,bin_right,count,mean\n")
        for i in range(counts.size):
            fh.write(f"{edges[i]:.17g},{edges[i + 1]:.17g},{counts[i]},{mean:.17g}\n")


def _z0_slice_csv(path, grid, spectrum):
    """Eigenvector table for the cell layer nearest the z=0 mid-plane."""
    z = np.abs(grid.points[:, 2])
    layer = np.flatnonzero(np.isclose(z, z.min()))
    with open(path, "w") as fh:
        cols = ["node_index", "x0", "x1"]
        cols += [f"f_{k}" for k in range(1, spectrum.n_modes + 1)]
        fh.write(",".join(cols) + "\n")
        for j in layer:
            row = [str(j)]
            row += [f"{v:.17g}" for v in grid.points[j, :2]]
            row += [f"{v:.17g}" for v in spectrum.eigenvectors[j]]
            fh.write(",".join(row) + "\n")


def cmd_torus3d(args):
    t0 = time.perf_counter()
    lcs = _parse_float_list(args.lc)
    out = _make_out_dir(args.out)

    counts = TORUS_NODE_COUNTS[args.resolution]
    vox = make_torus_domain(TORUS_R, TORUS_r, counts, TORUS_BOX_MIN, TORUS_BOX_MAX)
    grid = from_voxel_domain(vox)
    n = len(grid)
    print(f"torus domain: {n} retained cells at resolution {args.resolution!r}")

    metrics = {}
    if args.metric in ("euclid", "both"):
        metrics["euclid"] = EUCLIDEAN
    if args.metric in ("sip", "both"):
        apsp_bytes = 8 * n * n
        if apsp_bytes > APSP_GUARD_BYTES and not args.force:
            print(
                f"error: all-pairs matrix needs {apsp_bytes / 1024**3:.1f} GiB "
                f"for N={n}; rerun with --force to proceed",
                file=sys.stderr,
            )
            return EXIT_RESOURCE
        sip = all_pairs_shortest_paths(knn_graph(grid.points, args.knn))
        write_distance_matrix(sip, out / "sip_distances.bin")
        metrics["sip"] = sip

    grid.to_csv(out / "grid.csv")
    means = {}
    for name, field in metrics.items():
        edges, hist, mean = pairwise_distance_histogram(
            grid.points, field, args.pairs, seed=args.seed
        )
        _histogram_to_csv(out / f"distance_histogram_{name}.csv", edges, hist, mean)
        means[name] = mean
        for lc in lcs:
            kernel = Kernel("squared_exponential", lc)
            spectrum = solve_fredholm(
                covariance_matrix(kernel, grid, field), grid, args.modes
            )
            tag = _lc_tag(lc)
            spectrum.spectrum_to_csv(out / f"spectrum_{name}_lc{tag}.csv")
            _z0_slice_csv(out / f"z0_slice_{name}_lc{tag}.csv", grid, spectrum)
    if "euclid" in means and "sip" in means:
        excess = means["sip"] / means["euclid"] - 1.0
        print(
            f"mean distances: euclid={means['euclid']:.4f} "
            f"sip={means['sip']:.4f} (excess {100 * excess:.1f}%)"
        )

    _write_manifest(out, "torus3d", args, [args.seed], t0)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing / dispatch
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="kle",
        description="Karhunen-Loeve expansion experiments (CSV/JSON artifacts).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum-1d", help="1D grid eigenvalue study")
    p.add_argument("--kernel", choices=("exp", "sqexp"), required=True)
    p.add_argument("--lc", type=float, required=True)
    p.add_argument("--nx", type=int, default=512)
    p.add_argument("--grid", choices=("uniform", "mc", "gh"), default="uniform")
    p.add_argument("--sigma-x", type=float, default=1.0)
    p.add_argument("--modes", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out_spectrum_1d")
    p.set_defaults(func=cmd_spectrum_1d)

    p = sub.add_parser("svd-study", help="sample-based SVD spectra and D_KL")
    p.add_argument("--lc", type=float, default=0.1)
    p.add_argument("--nx", type=int, default=1024)
    p.add_argument("--nspls", default="32,128,512,2048")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--modes", type=int, default=15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out_svd_study")
    p.set_defaults(func=cmd_svd_study)

    p = sub.add_parser("mesh2d", help="triangle-mesh spectra")
    p.add_argument(
        "--mesh",
        required=True,
        help="mesh JSON path, or bundled fixture name 'coarse'/'dense'",
    )
    p.add_argument("--lc", default="0.2,0.5,1,2")
    p.add_argument("--modes", type=int, default=30)
    p.add_argument("--align-to", default=None, help="prior mesh2d output dir")
    p.add_argument("--out", default="out_mesh2d")
    p.set_defaults(func=cmd_mesh2d)

    p = sub.add_parser("torus3d", help="voxelized torus SIP/Euclidean study")
    p.add_argument("--resolution", choices=("low", "paper"), default="low")
    p.add_argument("--lc", default="0.5,1,2")
    p.add_argument("--metric", choices=("euclid", "sip", "both"), default="both")
    p.add_argument("--knn", type=int, default=80)
    p.add_argument("--modes", type=int, default=30)
    p.add_argument("--pairs", type=int, default=200000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force", action="store_true")
    p.add_argument("--out", default="out_torus3d")
    p.set_defaults(func=cmd_torus3d)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DisconnectedGraphError, InvalidMeshError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (RuntimeError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
