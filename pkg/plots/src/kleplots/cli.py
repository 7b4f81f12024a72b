"""`kle-plot` command line: one subcommand per figure family.

Exit codes: 0 success, 2 usage/schema error, 4 missing input file.
On schema errors no output file is created.
"""

import argparse
import sys

from kleplots import render
from kleplots.io import SchemaError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 4


def _parse_int_list(text):
    return tuple(int(t) for t in text.split(",") if t.strip())


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kle-plot", description="Render kle CSV artifacts as figures."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="semi-log eigenvalue decay")
    p.add_argument("--in", dest="spectrum_csv", required=True)
    p.add_argument("--analytic", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(
        func=lambda a: render.spectrum(a.spectrum_csv, a.out, a.analytic)
    )

    p = sub.add_parser("eigenfunctions", help="1D eigenfunction lines")
    p.add_argument("--in", dest="eigenvectors_csv", required=True)
    p.add_argument("--modes", default="1,2,3,4")
    p.add_argument("--out", required=True)
    p.set_defaults(
        func=lambda a: render.eigenfunctions(
            a.eigenvectors_csv, a.out, _parse_int_list(a.modes)
        )
    )

    p = sub.add_parser("coeff-hist", help="coefficient histogram + N(0,1)")
    p.add_argument("--in", dest="coefficients_csv", required=True)
    p.add_argument("--mode", type=int, default=1)
    p.add_argument("--bins", type=int, default=40)
    p.add_argument("--out", required=True)
    p.set_defaults(
        func=lambda a: render.coefficient_histogram(
            a.coefficients_csv, a.out, a.mode, a.bins
        )
    )

    p = sub.add_parser("kl-convergence", help="divergence vs sample count")
    p.add_argument("--in", dest="summary_csv", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=lambda a: render.kl_convergence(a.summary_csv, a.out))

    p = sub.add_parser("mesh-mode", help="2D eigenmode heatmap")
    p.add_argument("--in", dest="vertices_csv", required=True)
    p.add_argument("--mode", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=lambda a: render.mesh_mode(a.vertices_csv, a.out, a.mode))

    p = sub.add_parser("torus-slice", help="torus mid-plane eigenmode")
    p.add_argument("--in", dest="slice_csv", required=True)
    p.add_argument("--mode", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=lambda a: render.torus_slice(a.slice_csv, a.out, a.mode))

    p = sub.add_parser("distance-hist", help="pairwise distance histogram")
    p.add_argument("--in", dest="histogram_csv", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(
        func=lambda a: render.distance_histogram(a.histogram_csv, a.out)
    )

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
