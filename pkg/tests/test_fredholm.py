import numpy as np
import pytest

from klefield.analytic import exp_kernel_eigenpairs
from klefield.errors import InvalidArgumentError
from klefield.fredholm import (
    KLSpectrum,
    mercer_residual,
    solve_fredholm,
    solve_fredholm_nonsymmetric,
)
from klefield.grids import Grid, mc_gaussian_1d, uniform_midpoint_1d
from klefield.kernels import Kernel, covariance_matrix


def random_weighted_instance(rng, n=24):
    pts = np.sort(rng.uniform(0, 1, n))[:, None]
    w = rng.uniform(0.1, 2.0, n)
    grid = Grid(pts, w, 1, "random")
    K = covariance_matrix(Kernel("exponential", 0.3), grid)
    return grid, K


class TestSolveFredholm:
    def test_one_point_system(self):
        grid = Grid(np.array([[0.0]]), np.array([0.25]), 1, "pt")
        spec = solve_fredholm(np.array([[2.0]]), grid)
        assert spec.eigenvalues[0] == pytest.approx(0.25 * 2.0, rel=1e-14)
        assert spec.eigenvectors[0, 0] == pytest.approx(1.0 / np.sqrt(0.25), rel=1e-14)

    def test_weight_orthonormality(self):
        rng = np.random.default_rng(0)
        grid, K = random_weighted_instance(rng)
        spec = solve_fredholm(K, grid)
        f, w = spec.eigenvectors, grid.weights
        gram = f.T @ (w[:, None] * f)
        assert np.abs(gram - np.eye(f.shape[1])).max() < 1e-10

    def test_weighted_trace_conserved(self):
        rng = np.random.default_rng(1)
        grid, K = random_weighted_instance(rng)
        spec = solve_fredholm(K, grid)
        trace = np.sum(grid.weights * np.diag(K))
        assert abs(spec.eigenvalues.sum() - trace) < 1e-10 * trace

    def test_uniform_scaling_multiplies_eigenvalues(self):
        rng = np.random.default_rng(2)
        grid, K = random_weighted_instance(rng)
        base = solve_fredholm(K, grid)
        scaled = solve_fredholm(4.0 * K, grid)
        keep = base.eigenvalues > 1e-12
        ratio = scaled.eigenvalues[keep] / base.eigenvalues[keep]
        assert np.abs(ratio - 4.0).max() < 1e-12 * 4.0
        assert np.array_equal(
            np.argsort(scaled.eigenvalues), np.argsort(base.eigenvalues)
        )
        # same eigenvectors up to sign for non-degenerate modes
        for k in np.setdiff1d(np.arange(base.n_modes), base.degenerate_modes()):
            dots = np.abs(base.eigenvectors[:, k] @ scaled.eigenvectors[:, k])
            norms = np.linalg.norm(base.eigenvectors[:, k]) * np.linalg.norm(
                scaled.eigenvectors[:, k]
            )
            assert dots == pytest.approx(norms, rel=1e-9)

    def test_grid_refinement_improves_every_mode(self):
        analytic = np.array([p.lam for p in exp_kernel_eigenpairs(0.2, 10)])
        errs = {}
        for n in (32, 512):
            g = uniform_midpoint_1d(n, 1.0)
            spec = solve_fredholm(
                covariance_matrix(Kernel("exponential", 0.2), g), g, 10
            )
            errs[n] = np.abs(spec.eigenvalues - analytic) / analytic
        assert np.all(errs[512] < errs[32])

    def test_zero_weight_nodes_excluded(self):
        pts = np.linspace(0, 1, 5)[:, None]
        w = np.array([0.25, 0.0, 0.25, 0.25, 0.25])
        grid = Grid(pts, w, 1, "holes")
        K = covariance_matrix(Kernel("exponential", 0.5), grid)
        spec = solve_fredholm(K, grid)
        assert spec.n_modes == 4
        assert np.all(spec.eigenvectors[1] == 0.0)

    def test_matches_nonsymmetric_route(self):
        rng = np.random.default_rng(3)
        grid, K = random_weighted_instance(rng, n=20)
        sym = solve_fredholm(K, grid)
        lam, f = solve_fredholm_nonsymmetric(K, grid)
        assert np.abs(sym.eigenvalues - lam).max() < 1e-10 * lam[0]
        for k in range(5):
            dot = np.sum(grid.weights * sym.eigenvectors[:, k] * f[:, k])
            assert abs(abs(dot) - 1.0) < 1e-8

    def test_partial_solve_matches_full(self):
        rng = np.random.default_rng(4)
        grid, K = random_weighted_instance(rng)
        full = solve_fredholm(K, grid)
        part = solve_fredholm(K, grid, 5)
        assert np.allclose(part.eigenvalues, full.eigenvalues[:5], rtol=1e-12)

    def test_mode_request_clamped_with_warning(self):
        grid = uniform_midpoint_1d(8, 1.0)
        K = covariance_matrix(Kernel("exponential", 0.5), grid)
        with pytest.warns(RuntimeWarning):
            spec = solve_fredholm(K, grid, 20)
        assert spec.n_modes == 8

    def test_nonfinite_matrix_rejected(self):
        grid = uniform_midpoint_1d(3, 1.0)
        K = np.full((3, 3), np.nan)
        with pytest.raises(InvalidArgumentError):
            solve_fredholm(K, grid)

    def test_negative_eigenvalues_clamped_and_reported(self):
        # an indefinite symmetric "covariance" exercises the clamp path
        grid = uniform_midpoint_1d(4, 1.0)
        K = np.eye(4)
        K[0, 1] = K[1, 0] = 2.0  # makes one eigenvalue negative
        spec = solve_fredholm(K, grid)
        assert spec.n_clamped >= 1
        assert spec.min_eigenvalue < 0
        assert np.all(spec.eigenvalues >= 0)


class TestKLSpectrumType:
    def test_descending_order_enforced(self):
        grid = uniform_midpoint_1d(2, 1.0)
        with pytest.raises(InvalidArgumentError):
            KLSpectrum(np.array([1.0, 2.0]), np.ones((2, 2)), grid, "fredholm")

    def test_degenerate_mode_flagging(self):
        grid = uniform_midpoint_1d(3, 1.0)
        lam = np.array([2.0, 1.0, 1.0 - 1e-12])
        spec = KLSpectrum(lam, np.ones((3, 3)), grid, "fredholm")
        assert set(spec.degenerate_modes()) == {1, 2}

    def test_csv_exports(self, tmp_path):
        grid = uniform_midpoint_1d(4, 1.0)
        K = covariance_matrix(Kernel("exponential", 0.5), grid)
        spec = solve_fredholm(K, grid, 2)
        spec.spectrum_to_csv(tmp_path / "s.csv")
        spec.eigenvectors_to_csv(tmp_path / "v.csv")
        s_lines = (tmp_path / "s.csv").read_text().splitlines()
        v_lines = (tmp_path / "v.csv").read_text().splitlines()
        assert s_lines[0] == "k,lambda" and len(s_lines) == 3
        assert v_lines[0] == "node_index,x0,f_1,f_2" and len(v_lines) == 5

    def test_sign_convention_deterministic(self):
        grid = uniform_midpoint_1d(16, 1.0)
        K = covariance_matrix(Kernel("exponential", 0.5), grid)
        a = solve_fredholm(K, grid, 4)
        b = solve_fredholm(K, grid, 4)
        assert np.array_equal(a.eigenvectors, b.eigenvectors)
        peak = np.argmax(np.abs(a.eigenvectors), axis=0)
        assert np.all(a.eigenvectors[peak, np.arange(4)] > 0)


class TestMercerResidual:
    def test_full_spectrum_reconstructs(self):
        grid = mc_gaussian_1d(128, 1.0, seed=0)
        K = covariance_matrix(Kernel("squared_exponential", 0.5), grid)
        spec = solve_fredholm(K, grid)
        assert mercer_residual(spec, K, spec.n_modes) < 1e-8

    def test_zero_modes_gives_max_entry(self):
        grid = uniform_midpoint_1d(8, 1.0)
        K = covariance_matrix(Kernel("exponential", 0.5, variance=2.0), grid)
        spec = solve_fredholm(K, grid)
        assert mercer_residual(spec, K, 0) == pytest.approx(2.0)

    def test_monotone_in_mode_count(self):
        grid = uniform_midpoint_1d(128, 1.0)
        K = covariance_matrix(Kernel("exponential", 0.2), grid)
        spec = solve_fredholm(K, grid)
        assert mercer_residual(spec, K, 30) < mercer_residual(spec, K, 10)
