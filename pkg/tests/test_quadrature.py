import math

import numpy as np
import pytest

from bickley.quadrature import (
    level_nodes,
    map_nodes,
    integrate,
    integrate_batch,
    tensor_integrate,
)


class TestNodes:

    def test_level_zero(self):
        u, h = level_nodes(0)
        assert h == 0.5
        assert u.size == 17
        assert u[0] == -4.0 and u[-1] == 4.0

    def test_refinement_adds_odd_nodes(self):
        u, h = level_nodes(1)
        assert h == 0.25
        assert u.size == 16
        np.testing.assert_allclose(np.mod(u / h, 2.0), 1.0)

    def test_map_is_symmetric(self):
        u = np.linspace(-4.0, 4.0, 33)
        s, sc, ds = map_nodes(u)
        np.testing.assert_allclose(s + sc, 1.0, rtol=0, atol=1e-15)
        np.testing.assert_allclose(s, sc[::-1], rtol=1e-14)
        assert np.all(ds > 0)


class TestIntegrate:

    def test_exponential(self):
        value, err, ok = integrate(lambda t: np.exp(-t), 40.0)
        assert ok
        assert value == pytest.approx(1.0 - math.exp(-40.0), rel=1e-13)
        assert err < 1e-10

    def test_polynomial(self):
        value, _, ok = integrate(lambda t: t * t, 3.0)
        assert ok
        assert value == pytest.approx(9.0, rel=1e-13)

    def test_endpoint_singularity(self):
        value, _, ok = integrate(lambda t: 1.0 / np.sqrt(t), 1.0, rel_tol=1e-12)
        assert ok
        assert value == pytest.approx(2.0, rel=1e-10)

    def test_refinement_limit_reported(self):
        _, _, ok = integrate(lambda t: np.cos(200.0 * t), 10.0, rel_tol=1e-14, max_refinements=2)
        assert not ok


class TestBatch:

    def test_rows_independent(self):
        lengths = np.array([1.0, 2.0, 5.0])

        def func(rows, t):
            return np.exp(-t)

        res = integrate_batch(func, lengths, 1e-13, 0.0, 12)
        assert res.all_converged
        np.testing.assert_allclose(res.value, 1.0 - np.exp(-lengths), rtol=1e-13)

    def test_per_row_abs_tol(self):
        def func(rows, t):
            return np.ones_like(t)

        res = integrate_batch(func, np.array([1.0, 2.0]), 1e-12, np.array([1e-3, 1e-3]), 12)
        assert res.all_converged
        np.testing.assert_allclose(res.value, [1.0, 2.0], rtol=1e-10)


class TestTensor:

    def test_product_exponential(self):
        value, err, ok, level = tensor_integrate(
            lambda t, s: np.exp(-t - s), 40.0, 1e-12, 0.0, 6)
        assert ok
        assert level <= 6
        assert value == pytest.approx((1.0 - math.exp(-40.0)) ** 2, rel=1e-11)
