import numpy as np
import pytest


@pytest.fixture()
def fixture_csvs(tmp_path):
    """Small synthetic tables matching the documented CSV schemas."""
    rng = np.random.default_rng(0)
    d = tmp_path / "in"
    d.mkdir()

    k = np.arange(1, 31)
    lam = 0.5 * 0.8**k
    (d / "spectrum.csv").write_text(
        "k,lambda\n" + "".join(f"{i},{v:.17g}\n" for i, v in zip(k, lam))
    )
    (d / "analytic_spectrum.csv").write_text(
        "k,lambda\n" + "".join(f"{i},{1.02 * v:.17g}\n" for i, v in zip(k, lam))
    )

    x = np.linspace(0, 1, 64)
    rows = [
        f"{j},{x[j]:.17g},"
        + ",".join(f"{np.sin((m + 1) * np.pi * x[j]):.17g}" for m in range(4))
        for j in range(64)
    ]
    (d / "eigenvectors.csv").write_text(
        "node_index,x0,f_1,f_2,f_3,f_4\n" + "\n".join(rows) + "\n"
    )

    lines = ["mode,sample,xi,zeta"]
    for m in (1, 2):
        for p, v in enumerate(rng.standard_normal(200), start=1):
            lines.append(f"{m},{p},{v:.17g},{0.5 * v:.17g}")
    (d / "coefficients.csv").write_text("\n".join(lines) + "\n")

    (d / "kl_divergence_summary.csv").write_text(
        "n_samples,mean,std,fit_c,fit_slope\n"
        "32,0.0259,0.01,0.15,-0.57\n"
        "128,0.0128,0.005,0.15,-0.57\n"
        "512,0.0058,0.002,0.15,-0.57\n"
        "2048,0.0024,0.001,0.15,-0.57\n"
    )

    pts = rng.uniform(0, 1, (80, 2))
    rows = [
        f"{j},{p[0]:.17g},{p[1]:.17g},{np.sin(3 * p[0]) * np.cos(2 * p[1]):.17g}"
        for j, p in enumerate(pts)
    ]
    (d / "eigenvectors_vertices.csv").write_text(
        "vertex_index,x0,x1,f_1\n" + "\n".join(rows) + "\n"
    )

    theta = np.linspace(0, 2 * np.pi, 120, endpoint=False)
    rows = [
        f"{j},{3 * np.cos(t):.17g},{3 * np.sin(t):.17g},{np.cos(2 * t):.17g}"
        for j, t in enumerate(theta)
    ]
    (d / "z0_slice.csv").write_text(
        "node_index,x0,x1,f_1\n" + "\n".join(rows) + "\n"
    )

    edges = np.linspace(0, 8, 21)
    counts = rng.integers(10, 500, 20)
    (d / "distance_histogram.csv").write_text(
        "bin_left,bin_right,count,mean\n"
        + "".join(
            f"{edges[i]:.17g},{edges[i + 1]:.17g},{counts[i]},4.91\n"
            for i in range(20)
        )
    )
    return d
