"""Domain geometry: triangle meshes, voxelized torus, k-NN graphs, geodesics.

Shortest-interior-path (SIP) distances are approximated by all-pairs
Dijkstra on a sparse k-nearest-neighbor graph built over the cell
centroids of the voxelized domain.
"""

import json
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path
from scipy.spatial import cKDTree

from klefield.errors import (
    DisconnectedGraphError,
    InvalidArgumentError,
    InvalidMeshError,
)

DIST_MAGIC = b"KLEDIST1"


# ---------------------------------------------------------------------------
# triangle meshes
# ---------------------------------------------------------------------------

def _signed_areas(vertices, triangles):
    a = vertices[triangles[:, 0]]
    b = vertices[triangles[:, 1]]
    c = vertices[triangles[:, 2]]
    return 0.5 * (
        (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
        - (c[:, 0] - a[:, 0]) * (b[:, 1] - a[:, 1])
    )


@dataclass(frozen=True)
class TriangleMesh:
    """2D unstructured triangle mesh with canonically oriented elements."""

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        t = np.asarray(self.triangles, dtype=np.int64)
        if v.ndim != 2 or v.shape[1] != 2:
            raise InvalidMeshError("vertices must be an (n, 2) array")
        if t.ndim != 2 or t.shape[1] != 3:
            raise InvalidMeshError("triangles must be an (m, 3) index array")
        if t.min(initial=0) < 0 or t.max(initial=-1) >= v.shape[0]:
            raise InvalidMeshError("triangle vertex index out of range")
        keys = {tuple(sorted(tri)) for tri in t.tolist()}
        if len(keys) != t.shape[0]:
            raise InvalidMeshError("duplicate triangles present")
        # canonical orientation: counter-clockwise (positive signed area)
        sa = _signed_areas(v, t)
        zero = np.flatnonzero(sa == 0)
        if zero.size:
            raise InvalidMeshError(
                f"degenerate (zero-area) element at index {zero[0]}"
            )
        flip = sa < 0
        t = t.copy()
        t[flip] = t[flip][:, [0, 2, 1]]
        v.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)

    def areas(self):
        return _signed_areas(self.vertices, self.triangles)

    def centroids(self):
        return self.vertices[self.triangles].mean(axis=1)

    @classmethod
    def from_json(cls, path):
        try:
            with open(path) as fh:
                data = json.load(fh)
            return cls(np.asarray(data["vertices"]), np.asarray(data["triangles"]))
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise InvalidMeshError(f"cannot read mesh file {path}: {exc}") from exc

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(
                {
                    "vertices": self.vertices.tolist(),
                    "triangles": self.triangles.tolist(),
                },
                fh,
            )


def barycentric_to_vertices(mesh, centroid_values):
    """Area-weighted average of incident element values at each vertex."""
    vals = np.asarray(centroid_values, dtype=np.float64).ravel()
    if vals.size != mesh.triangles.shape[0]:
        raise InvalidArgumentError(
            f"expected one value per element ({mesh.triangles.shape[0]}), "
            f"got {vals.size}"
        )
    areas = mesh.areas()
    nv = mesh.vertices.shape[0]
    num = np.zeros(nv)
    den = np.zeros(nv)
    for c in range(3):
        idx = mesh.triangles[:, c]
        np.add.at(num, idx, areas * vals)
        np.add.at(den, idx, areas)
    isolated = np.flatnonzero(den == 0)
    if isolated.size:
        raise InvalidMeshError(f"isolated vertex at index {isolated[0]}")
    return num / den


# ---------------------------------------------------------------------------
# voxel domains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VoxelDomain:
    """Cells of a uniform Cartesian box retained by a domain predicate."""

    box_min: np.ndarray
    box_max: np.ndarray
    counts: np.ndarray
    retained: np.ndarray
    cell_centers: np.ndarray
    spacing: np.ndarray


def make_torus_domain(R, r, counts, box_min, box_max):
    """Voxelize the solid torus (sqrt(x^2+y^2) - R)^2 + z^2 <= r^2.

    ``counts`` gives the number of Cartesian grid nodes per axis, so each
    axis has ``counts - 1`` cells. A cell is retained iff all 8 of its
    corners satisfy the torus inequality, which keeps every retained
    cell fully inside the material.
    """
    if not 0 < r < R:
        raise InvalidArgumentError(f"need 0 < r < R, got R={R}, r={r}")
    counts = np.asarray(counts, dtype=np.int64)
    box_min = np.asarray(box_min, dtype=np.float64)
    box_max = np.asarray(box_max, dtype=np.float64)
    if counts.shape != (3,) or np.any(counts < 2):
        raise InvalidArgumentError("counts must be 3 integers >= 2 (grid nodes)")
    if np.any(box_max <= box_min):
        raise InvalidArgumentError("box_max must exceed box_min componentwise")
    cells = counts - 1
    spacing = (box_max - box_min) / cells

    corners = [box_min[i] + spacing[i] * np.arange(counts[i]) for i in range(3)]
    cx, cy, cz = np.meshgrid(*corners, indexing="ij")
    inside = (np.sqrt(cx**2 + cy**2) - R) ** 2 + cz**2 <= r**2

    # cell retained only if all 8 corners are inside
    keep = np.ones(tuple(cells), dtype=bool)
    for dx in (0, 1):
        for dy in (0, 1):
            for dz in (0, 1):
                keep &= inside[
                    dx : cells[0] + dx, dy : cells[1] + dy, dz : cells[2] + dz
                ]
    retained = np.argwhere(keep)
    if retained.shape[0] == 0:
        raise InvalidArgumentError("torus retention set is empty for this box/grid")
    centers = box_min[None, :] + (retained + 0.5) * spacing[None, :]
    return VoxelDomain(box_min, box_max, cells, retained, centers, spacing)


# ---------------------------------------------------------------------------
# distance fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistanceField:
    """Pairwise distance provider: closed-form Euclidean or a dense matrix."""

    kind: str
    matrix: np.ndarray = None

    def __post_init__(self):
        if self.kind not in ("euclidean", "matrix"):
            raise InvalidArgumentError(f"unknown distance field kind {self.kind!r}")
        if self.kind == "matrix":
            d = np.asarray(self.matrix, dtype=np.float64)
            if d.ndim != 2 or d.shape[0] != d.shape[1]:
                raise InvalidArgumentError("distance matrix must be square")
            if np.any(d < 0):
                raise InvalidArgumentError("distance matrix has negative entries")
            if np.abs(d - d.T).max() > 1e-12:
                raise InvalidArgumentError("distance matrix is not symmetric")
            d = 0.5 * (d + d.T)
            np.fill_diagonal(d, 0.0)
            d.setflags(write=False)
            object.__setattr__(self, "matrix", d)
        elif self.matrix is not None:
            raise InvalidArgumentError("euclidean field takes no matrix")


EUCLIDEAN = DistanceField("euclidean")


def write_distance_matrix(field, path):
    """Binary export: 8-byte magic + uint64 N (little-endian), then rows."""
    if field.kind != "matrix":
        raise InvalidArgumentError("only matrix distance fields can be exported")
    n = field.matrix.shape[0]
    with open(path, "wb") as fh:
        fh.write(DIST_MAGIC)
        fh.write(np.uint64(n).tobytes())
        fh.write(np.ascontiguousarray(field.matrix, dtype="<f8").tobytes())


def read_distance_matrix(path):
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != DIST_MAGIC:
            raise InvalidArgumentError(f"bad distance-matrix magic {magic!r}")
        n = int(np.frombuffer(fh.read(8), dtype="<u8")[0])
        data = np.frombuffer(fh.read(n * n * 8), dtype="<f8").reshape(n, n)
    return DistanceField("matrix", data.copy())


# ---------------------------------------------------------------------------
# graphs and shortest paths
# ---------------------------------------------------------------------------

def knn_graph(points, k):
    """Symmetrized k-nearest-neighbor graph with Euclidean edge weights.

    An edge is kept if either endpoint selects it. Raises
    DisconnectedGraphError (reporting the component count) when the result
    is not a single component; callers may retry with a larger k.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    n = pts.shape[0]
    if n < 2:
        raise InvalidArgumentError("need at least 2 points")
    if not 1 <= k < n:
        raise InvalidArgumentError(f"need 1 <= k < {n}, got k={k}")
    tree = cKDTree(pts)
    dist, idx = tree.query(pts, k=k + 1)
    # drop the self match in column 0; ties are resolved by index (cKDTree
    # returns equidistant neighbors in index order)
    rows = np.repeat(np.arange(n), k)
    cols = idx[:, 1:].ravel()
    vals = dist[:, 1:].ravel()
    g = csr_matrix((vals, (rows, cols)), shape=(n, n))
    g = g.maximum(g.T)  # union symmetrization; weights equal on both sides
    ncomp, _ = connected_components(g, directed=False)
    if ncomp != 1:
        raise DisconnectedGraphError(
            f"k-NN graph with k={k} has {ncomp} connected components"
        )
    return g


def all_pairs_shortest_paths(graph):
    """All-pairs Dijkstra on a non-negative sparse graph -> DistanceField."""
    d = shortest_path(graph, method="D", directed=False)
    if not np.all(np.isfinite(d)):
        raise DisconnectedGraphError("graph is disconnected: infinite path lengths")
    d = np.minimum(d, d.T)  # exact symmetry; both entries are valid path lengths
    np.fill_diagonal(d, 0.0)
    return DistanceField("matrix", d)


def pairwise_distance_histogram(points, field, n_pairs, seed=0, bins=100):
    """Histogram of distances over uniformly sampled unordered pairs (i != j).

    Returns ``(bin_edges, counts, mean)``; deterministic per seed.
    """
    if n_pairs < 1:
        raise InvalidArgumentError(f"n_pairs must be >= 1, got {n_pairs}")
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    n = pts.shape[0]
    if n < 2:
        raise InvalidArgumentError("need at least 2 points")
    rng = np.random.default_rng(seed)
    i = rng.integers(0, n, size=n_pairs)
    j = rng.integers(0, n, size=n_pairs)
    clash = i == j
    while np.any(clash):
        j[clash] = rng.integers(0, n, size=int(clash.sum()))
        clash = i == j
    if field.kind == "euclidean":
        d = np.linalg.norm(pts[i] - pts[j], axis=1)
    else:
        d = field.matrix[i, j]
    counts, edges = np.histogram(d, bins=bins)
    return edges, counts, float(d.mean())
