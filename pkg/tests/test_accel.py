import numpy as np
import pytest

from klefield import _accel


@pytest.fixture(scope="module")
def points():
    return np.random.default_rng(0).uniform(-2, 2, (150, 3))


@pytest.fixture(scope="module")
def dmat():
    a = np.abs(np.random.default_rng(1).standard_normal((120, 120)))
    m = a + a.T
    np.fill_diagonal(m, 0.0)
    return m


class TestBackendsAgree:
    @pytest.mark.parametrize("code", [0, 1])
    def test_pairwise_covariance(self, points, code):
        a = _accel.pairwise_covariance_np(points, 0.7, 1.3, code)
        b = _accel.pairwise_covariance(points, 0.7, 1.3, code)
        assert np.abs(a - b).max() < 1e-13

    @pytest.mark.parametrize("code", [0, 1])
    def test_covariance_from_distances(self, dmat, code):
        a = _accel.covariance_from_distances_np(dmat, 0.7, 1.3, code)
        b = _accel.covariance_from_distances(dmat, 0.7, 1.3, code)
        assert np.abs(a - b).max() < 1e-13

    def test_kde_on_grid(self):
        samples = np.random.default_rng(2).standard_normal(3000)
        grid = np.linspace(-8, 8, 1024)
        a = _accel.gaussian_kde_on_grid_np(samples, grid, 0.3)
        b = _accel.gaussian_kde_on_grid(samples, grid, 0.3)
        assert np.abs(a - b).max() < 1e-13 * a.max()


class TestInvariants:
    def test_pairwise_symmetric_bit_exact(self, points):
        k = _accel.pairwise_covariance(points, 0.5, 1.0, 1)
        assert np.array_equal(k, k.T)
        assert np.all(np.diag(k) == 1.0)

    def test_from_distances_symmetric_bit_exact(self, dmat):
        k = _accel.covariance_from_distances(dmat, 0.5, 2.0, 0)
        assert np.array_equal(k, k.T)
        assert np.all(np.diag(k) == 2.0)

    def test_single_point(self):
        k = _accel.pairwise_covariance(np.zeros((1, 2)), 1.0, 3.0, 0)
        assert k.shape == (1, 1) and k[0, 0] == 3.0


class TestConfig:
    def test_family_codes(self):
        assert _accel.FAMILY_CODES == {"exponential": 0, "squared_exponential": 1}

    def test_env_flag_parsing(self, monkeypatch):
        for val, expect in (
            ("1", True), ("true", True), ("YES", True),
            ("0", False), ("", False), ("no", False),
        ):
            monkeypatch.setenv("KLE_TEST_FLAG", val)
            assert _accel._env_flag("KLE_TEST_FLAG") is expect
        monkeypatch.delenv("KLE_TEST_FLAG")
        assert _accel._env_flag("KLE_TEST_FLAG") is False
