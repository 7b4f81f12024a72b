import math

import numpy as np
import pytest

from klefield.errors import InvalidArgumentError
from klefield.geometry import all_pairs_shortest_paths, knn_graph, make_torus_domain
from klefield.grids import from_voxel_domain, uniform_midpoint_1d
from klefield.kernels import Kernel, covariance_matrix, kernel_eval

TORUS_BOX = ((-4.05, -4.05, -1.05), (4.05, 4.05, 1.05))


class TestKernelValidation:
    def test_unknown_family(self):
        with pytest.raises(InvalidArgumentError):
            Kernel("matern", 1.0)

    def test_nonpositive_parameters(self):
        with pytest.raises(InvalidArgumentError):
            Kernel("exponential", 0.0)
        with pytest.raises(InvalidArgumentError):
            Kernel("exponential", 1.0, variance=-1.0)


class TestKernelEval:
    def test_zero_distance(self):
        assert kernel_eval(Kernel("exponential", 0.5), 0.0) == 1.0

    def test_exponential_at_one_corr_length(self):
        got = kernel_eval(Kernel("exponential", 0.5), 0.5)
        assert got == pytest.approx(math.exp(-1.0), abs=1e-12)

    def test_squared_exponential_scaled(self):
        got = kernel_eval(Kernel("squared_exponential", 1.0, variance=4.0), 1.0)
        assert got == pytest.approx(4.0 * math.exp(-0.5), abs=1e-10)

    def test_negative_distance_rejected(self):
        with pytest.raises(InvalidArgumentError):
            kernel_eval(Kernel("exponential", 1.0), -0.1)

    @pytest.mark.parametrize("family", ["exponential", "squared_exponential"])
    def test_strictly_decreasing(self, family):
        k = Kernel(family, 0.7)
        d = np.linspace(0.0, 5.0, 200)
        vals = np.array([kernel_eval(k, x) for x in d])
        assert np.all(np.diff(vals) < 0)


class TestCovarianceMatrix:
    def test_one_point(self):
        g = uniform_midpoint_1d(1, 1.0)
        K = covariance_matrix(Kernel("exponential", 1.0, variance=2.5), g)
        assert K.shape == (1, 1) and K[0, 0] == 2.5

    def test_two_points_one_corr_length_apart(self):
        g = uniform_midpoint_1d(2, 1.0)  # nodes 0.25, 0.75
        K = covariance_matrix(Kernel("exponential", 0.5), g)
        assert K[0, 1] == pytest.approx(math.exp(-1.0), abs=1e-12)

    def test_symmetry_bit_exact_and_diag(self):
        g = uniform_midpoint_1d(64, 1.0)
        K = covariance_matrix(Kernel("squared_exponential", 0.3, variance=1.7), g)
        assert np.array_equal(K, K.T)
        assert np.all(np.diag(K) == 1.7)

    def test_entrywise_bounds(self):
        g = uniform_midpoint_1d(32, 1.0)
        K = covariance_matrix(Kernel("exponential", 0.1, variance=2.0), g)
        assert np.all(K > 0) and np.all(K <= 2.0)

    def test_geodesic_kernel_attenuates_cross_hole_pairs(self):
        vox = make_torus_domain(3.0, 1.0, (11, 11, 11), *TORUS_BOX)
        g = from_voxel_domain(vox)
        sip = all_pairs_shortest_paths(knn_graph(g.points, 26))
        kern = Kernel("squared_exponential", 1.0)
        k_euclid = covariance_matrix(kern, g)
        k_sip = covariance_matrix(kern, g, sip)
        assert np.all(k_sip <= k_euclid + 1e-12)
        assert np.any(k_sip < k_euclid - 1e-6)

    def test_distance_field_size_mismatch(self):
        from klefield.geometry import DistanceField

        g = uniform_midpoint_1d(3, 1.0)
        m = np.zeros((2, 2))
        with pytest.raises(InvalidArgumentError):
            covariance_matrix(Kernel("exponential", 1.0), g, DistanceField("matrix", m))
