import math

import numpy as np
import pytest

from bickley.config import McConfig
from bickley.determinants import (
    det_ki,
    det_oracle_2x2,
    det_oracle_mc,
    det_cm_probe,
    cm_probe_values,
    grid_step,
    leading_minors,
    pool_mc_estimates,
    sample_cosh_minus_one,
)
from bickley.engine import ki
from bickley.models import BickleyDomainError, HankelSpec, KiValue, McEstimate
from tests.conftest import K0_1, K1_1


class TestHankelSpec:

    def test_orders(self):
        spec = HankelSpec(alpha=2.0, n=1, x=1.0)
        assert spec.size == 2
        assert spec.orders() == [[2.0, 1.0], [1.0, 0.0]]

    @pytest.mark.parametrize("n", [-1, 5, 1.0])
    def test_bad_size(self, n):
        with pytest.raises(BickleyDomainError):
            HankelSpec(alpha=1.0, n=n, x=1.0)

    def test_bad_argument(self):
        with pytest.raises(BickleyDomainError):
            HankelSpec(alpha=1.0, n=1, x=0.0)


class TestDetKi:

    def test_order_zero_is_ki(self):
        assert det_ki(HankelSpec(alpha=1.0, n=0, x=1.0)) == ki(1.0, 1.0)

    def test_explicit_two_by_two(self):
        a, x = 1.0, 1.0
        expected = ki(a, x).value * K1_1 - K0_1 ** 2
        assert det_ki(HankelSpec(alpha=a, n=1, x=x)).value == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("alpha", [-2.0, 0.0, 2.0, 4.0])
    @pytest.mark.parametrize("n", [1, 2])
    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
    def test_positive(self, alpha, n, x):
        det = det_ki(HankelSpec(alpha=alpha, n=n, x=x))
        assert det.value > 0
        assert det.abs_err_est < det.value

    def test_leading_minors(self):
        spec = HankelSpec(alpha=3.0, n=2, x=1.0)
        minors = leading_minors(spec)
        assert len(minors) == 3
        assert minors[0] == ki(3.0, 1.0)
        assert minors[-1].value == pytest.approx(det_ki(spec).value, rel=1e-12)
        assert all(m.value > 0 for m in minors)


class TestQuadratureOracle:

    @pytest.mark.parametrize("alpha", [0.0, 2.0, 4.0])
    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
    def test_matches_det_ki(self, alpha, x):
        oracle = det_oracle_2x2(alpha, x)
        direct = det_ki(HankelSpec(alpha=alpha, n=1, x=x))
        assert oracle.value == pytest.approx(direct.value, rel=1e-8)


class TestMonteCarlo:

    def test_sampler_mean(self):
        rng = np.random.default_rng(3)
        cm1, proposals = sample_cosh_minus_one(rng, 1.0, 100_000)
        assert cm1.shape == (100_000,)
        assert np.all(cm1 >= 0)
        assert proposals >= 100_000
        assert float(np.mean(cm1)) == pytest.approx(K1_1 / K0_1 - 1.0, abs=0.01)

    def test_deterministic(self):
        spec = HankelSpec(alpha=2.0, n=1, x=1.0)
        mc = McConfig(samples=3000, seed=5, batch=1000)
        first = det_oracle_mc(spec, mc)
        assert det_oracle_mc(spec, mc) == first
        assert det_oracle_mc(spec, mc, workers=3) == first
        assert first.samples == 3000
        assert 0.0 < first.acceptance_rate <= 1.0

    def test_seed_changes_estimate(self):
        spec = HankelSpec(alpha=2.0, n=1, x=1.0)
        a = det_oracle_mc(spec, McConfig(samples=2000, seed=1, batch=1000))
        b = det_oracle_mc(spec, McConfig(samples=2000, seed=2, batch=1000))
        assert a.value != b.value

    def test_requires_positive_size(self):
        with pytest.raises(BickleyDomainError):
            det_oracle_mc(HankelSpec(alpha=1.0, n=0, x=1.0), McConfig(samples=10, batch=10))

    @pytest.mark.slow
    @pytest.mark.parametrize("alpha, n, x", [(2.0, 1, 1.0), (0.0, 1, 0.5), (4.0, 2, 1.0), (2.0, 2, 2.0)])
    def test_agrees_with_det_ki(self, alpha, n, x):
        spec = HankelSpec(alpha=alpha, n=n, x=x)
        estimate = det_oracle_mc(spec, McConfig(samples=400_000, seed=42, batch=100_000), workers=2)
        direct = det_ki(spec).value
        assert not estimate.variance_exploded
        assert abs(estimate.value - direct) <= 4 * estimate.standard_error

    def test_pooling(self):
        a = McEstimate(value=1.0, abs_err_est=0.1, samples=100, acceptance_rate=0.5)
        b = McEstimate(value=2.0, abs_err_est=0.1, samples=100, acceptance_rate=0.7)
        pooled = pool_mc_estimates([a, b])
        assert pooled.value == pytest.approx(1.5)
        assert pooled.abs_err_est == pytest.approx(math.sqrt(0.02) / 2)
        assert pooled.samples == 200
        assert pooled.acceptance_rate == pytest.approx(0.6)

    def test_pooling_empty(self):
        with pytest.raises(ValueError):
            pool_mc_estimates([])


class TestCompleteMonotoneProbe:

    def test_zero_sequence(self):
        verdict = cm_probe_values([KiValue.exact(0.0)] * 5, 3)
        assert verdict.holds
        assert verdict.order_margins == [0.0, 0.0, 0.0, 0.0]

    def test_exponential(self):
        values = [KiValue.exact(math.exp(-0.5 * i)) for i in range(8)]
        verdict = cm_probe_values(values, 3)
        assert verdict.holds
        assert all(m > 0 for m in verdict.order_margins)

    def test_increasing_fails(self):
        values = [KiValue.exact(v) for v in (1.0, 2.0, 3.0)]
        verdict = cm_probe_values(values, 1)
        assert not verdict.holds
        assert verdict.order_margins[1] == pytest.approx(-1.0 / 3.0)

    def test_short_sequence(self):
        verdict = cm_probe_values([KiValue.exact(1.0), KiValue.exact(0.5)], 3)
        assert verdict.holds
        assert len(verdict.order_margins) == 4

    @pytest.mark.parametrize("order", [-1, 4, 1.5])
    def test_bad_order(self, order):
        with pytest.raises(BickleyDomainError):
            cm_probe_values([KiValue.exact(1.0)], order)

    def test_grid_step(self):
        assert grid_step([2.0, 1.0, 1.5]) == pytest.approx(0.5)
        assert grid_step([1.0]) == 0.0
        with pytest.raises(BickleyDomainError):
            grid_step([1.0, 1.5, 2.5])

    def test_determinant_probe(self):
        verdict = det_cm_probe(2.0, 1, [0.5, 1.0, 1.5, 2.0], order=2)
        assert verdict.holds
        assert verdict.params['h'] == pytest.approx(0.5)
        assert len(verdict.values) == 4

    def test_determinant_probe_uneven_grid(self):
        with pytest.raises(BickleyDomainError):
            det_cm_probe(2.0, 1, [0.5, 1.0, 3.0])
