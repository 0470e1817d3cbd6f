"""
Unit tests for pooling kernels

Hand examples plus randomized property suites (1000 cases each).
"""

import math

import numpy as np
import pytest

from milnet.domain.enums import PoolKind
from milnet.domain.errors import EmptyDatasetError, ShapeMismatchError
from milnet.utils.pooling import argmax_per_column, pool_backward, pool_forward


CASES = 1000


def random_values(rng, max_instances=8, max_width=5):
    n = int(rng.integers(1, max_instances + 1))
    m = int(rng.integers(1, max_width + 1))
    return rng.normal(0.0, 3.0, size=(n, m))


@pytest.mark.unit
class TestPoolForward:
    """Tests for pool_forward."""

    def test_mean(self):
        np.testing.assert_array_equal(pool_forward([[1.0, 2.0], [3.0, 4.0]], PoolKind.MEAN), [2.0, 3.0])

    def test_max(self):
        np.testing.assert_array_equal(pool_forward([[1.0, 2.0], [3.0, 4.0]], PoolKind.MAX), [3.0, 4.0])

    def test_smooth_max_of_two(self):
        pooled = pool_forward([[0.0], [0.0]], PoolKind.SMOOTH_MAX)

        assert pooled[0] == pytest.approx(math.log(2.0) / 2.0)

    def test_smooth_max_large_values_do_not_overflow(self):
        pooled = pool_forward([[1000.0], [1000.0]], PoolKind.SMOOTH_MAX)

        assert pooled[0] == pytest.approx((1000.0 + math.log(2.0)) / 2.0)

    @pytest.mark.parametrize("kind", list(PoolKind))
    def test_empty_bag(self, kind):
        with pytest.raises(EmptyDatasetError):
            pool_forward(np.zeros((0, 3)), kind)

    def test_rejects_vector(self):
        with pytest.raises(ShapeMismatchError):
            pool_forward([1.0, 2.0], PoolKind.MEAN)


@pytest.mark.unit
class TestPoolBackward:
    """Tests for pool_backward."""

    def test_mean_spreads_evenly(self):
        grad = pool_backward(np.zeros((4, 3)), PoolKind.MEAN, np.ones(3))

        np.testing.assert_array_equal(grad, np.full((4, 3), 0.25))

    def test_max_routes_to_argmax(self):
        values = np.array([[1.0, 5.0], [3.0, 2.0], [0.0, 4.0]])

        grad = pool_backward(values, PoolKind.MAX, np.array([2.0, -1.0]))

        np.testing.assert_array_equal(grad, [[0.0, -1.0], [2.0, 0.0], [0.0, 0.0]])

    def test_max_tie_goes_to_lowest_index(self):
        values = np.array([[1.0], [3.0], [3.0]])

        grad = pool_backward(values, PoolKind.MAX, np.array([1.0]))

        np.testing.assert_array_equal(grad, [[0.0], [1.0], [0.0]])
        assert argmax_per_column(values)[0] == 1

    def test_smooth_max_matches_finite_differences(self):
        rng = np.random.default_rng(0)
        values = rng.standard_normal((3, 4))
        upstream = rng.standard_normal(4)
        step = 1e-6

        analytic = pool_backward(values, PoolKind.SMOOTH_MAX, upstream)

        for i, j in np.ndindex(values.shape):
            plus, minus = values.copy(), values.copy()
            plus[i, j] += step
            minus[i, j] -= step
            numeric = (upstream @ pool_forward(plus, PoolKind.SMOOTH_MAX)
                       - upstream @ pool_forward(minus, PoolKind.SMOOTH_MAX)) / (2 * step)
            scale = max(abs(analytic[i, j]), abs(numeric), 1e-2)
            assert abs(analytic[i, j] - numeric) / scale < 1e-6

    def test_smooth_max_weights_include_bag_size(self):
        grad = pool_backward(np.zeros((4, 1)), PoolKind.SMOOTH_MAX, np.array([1.0]))

        np.testing.assert_allclose(grad, np.full((4, 1), 1.0 / 16.0))

    def test_rejects_wrong_upstream_shape(self):
        with pytest.raises(ShapeMismatchError):
            pool_backward(np.zeros((2, 3)), PoolKind.MEAN, np.ones(2))


@pytest.mark.unit
class TestPoolingProperties:
    """Randomized properties of the pooling functions."""

    @pytest.mark.parametrize("kind", list(PoolKind))
    def test_permutation_invariance(self, kind):
        rng = np.random.default_rng(100)
        for _ in range(CASES):
            values = random_values(rng)
            shuffled = values[rng.permutation(values.shape[0])]

            assert np.array_equal(pool_forward(values, kind), pool_forward(shuffled, kind))

    def test_mean_replication_invariance(self):
        rng = np.random.default_rng(101)
        for _ in range(CASES):
            values = random_values(rng)
            k = int(rng.integers(2, 5))

            replicated = np.repeat(values, k, axis=0)

            np.testing.assert_allclose(
                pool_forward(replicated, PoolKind.MEAN), pool_forward(values, PoolKind.MEAN),
                rtol=0.0, atol=1e-12,
            )

    def test_max_monotonicity(self):
        rng = np.random.default_rng(102)
        for _ in range(CASES):
            values = random_values(rng)
            extra = rng.normal(0.0, 3.0, size=(1, values.shape[1]))

            grown = np.vstack([values, extra])

            assert np.all(pool_forward(grown, PoolKind.MAX) >= pool_forward(values, PoolKind.MAX))

    def test_smooth_max_single_instance_identity(self):
        rng = np.random.default_rng(103)
        for _ in range(CASES):
            vector = rng.normal(0.0, 3.0, size=(1, int(rng.integers(1, 6))))

            assert np.array_equal(pool_forward(vector, PoolKind.SMOOTH_MAX), vector[0])

    def test_smooth_max_upper_bounds_max(self):
        rng = np.random.default_rng(104)
        for _ in range(CASES):
            values = random_values(rng)
            n = values.shape[0]

            scaled = n * pool_forward(values, PoolKind.SMOOTH_MAX)

            assert np.all(scaled >= pool_forward(values, PoolKind.MAX) - 1e-12)
