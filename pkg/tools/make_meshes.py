#!/usr/bin/env python3
"""Generate the bundled wavy-top triangle meshes (JSON fixtures).

The domain is a rectangle with a sinusoidal top boundary. Both meshes
cover the same domain; vertical grading and deterministic interior
jitter are tuned so the coarse mesh has 896 elements with a maximum
element area of 0.475 and the dense mesh has 9590 elements with a
maximum area 15x smaller.

Run from the repository root:
    python3 tools/make_meshes.py
"""

import sys
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from klefield.geometry import TriangleMesh  # noqa: E402

LX = 12.7
H = 6.35
AMP = 0.45
WAVES = 2.5

COARSE = dict(nx=32, ny=14, target_max_area=0.475, jitter=0.16, grade_x=5.0, seed=123)
DENSE = dict(nx=137, ny=35, target_max_area=0.475 / 15.0, jitter=0.16, grade_x=3.0, seed=512)


def top_height(x):
    return H * (1.0 + AMP * np.sin(2.0 * np.pi * WAVES * x / LX))


def build(nx, ny, grade, jitter, seed, grade_x=3.0):
    """Structured wavy-top grid, geometric x/y grading, jittered interior."""
    rx = grade_x ** (1.0 / max(nx - 1, 1))
    xsteps = rx ** np.arange(nx)
    xs = LX * np.concatenate([[0.0], np.cumsum(xsteps)]) / xsteps.sum()
    # geometric row spacing: ratio `grade` between top and bottom rows
    r = grade ** (1.0 / max(ny - 1, 1))
    steps = r ** np.arange(ny)
    frac = np.concatenate([[0.0], np.cumsum(steps)]) / steps.sum()

    verts = np.empty(((nx + 1) * (ny + 1), 2))
    for i, x in enumerate(xs):
        h = top_height(x)
        for j in range(ny + 1):
            verts[i * (ny + 1) + j] = (x, frac[j] * h)

    rng = np.random.default_rng(seed)
    for i in range(1, nx):
        h = top_height(xs[i])
        dx = (xs[i + 1] - xs[i - 1]) / 2.0
        for j in range(1, ny):
            dy = (frac[j + 1] - frac[j - 1]) * h / 2.0
            k = i * (ny + 1) + j
            verts[k, 0] += rng.uniform(-jitter, jitter) * dx
            verts[k, 1] += rng.uniform(-jitter, jitter) * dy

    tris = []
    for i in range(nx):
        for j in range(ny):
            v00 = i * (ny + 1) + j
            v10 = (i + 1) * (ny + 1) + j
            v01 = v00 + 1
            v11 = v10 + 1
            if (i + j) % 2 == 0:
                tris.append((v00, v10, v11))
                tris.append((v00, v11, v01))
            else:
                tris.append((v00, v10, v01))
                tris.append((v10, v11, v01))
    return TriangleMesh(verts, np.array(tris))


def tuned_mesh(nx, ny, target_max_area, jitter, grade_x, seed):
    def gap(grade):
        m = build(nx, ny, grade, jitter, seed, grade_x=grade_x)
        return m.areas().max() - target_max_area

    for lo, hi in ((1.0, 200.0), (0.05, 1.0)):
        try:
            grade = brentq(gap, lo, hi, xtol=1e-10)
            break
        except ValueError:
            continue
    else:
        raise RuntimeError("no grading bracket for target max area")
    return build(nx, ny, grade, jitter, seed, grade_x=grade_x), grade


def main():
    out = Path(__file__).resolve().parents[1] / "src" / "klefield" / "assets"
    out.mkdir(parents=True, exist_ok=True)
    for name, cfg in (("coarse_mesh", COARSE), ("dense_mesh", DENSE)):
        mesh, grade = tuned_mesh(**cfg)
        areas = mesh.areas()
        mesh.to_json(out / f"{name}.json")
        print(
            f"{name}: {mesh.triangles.shape[0]} elements, "
            f"{mesh.vertices.shape[0]} vertices, grade={grade:.4f}, "
            f"max area={areas.max():.6f} (sqrt={np.sqrt(areas.max()):.4f}), "
            f"total area={areas.sum():.4f}"
        )


if __name__ == "__main__":
    main()
