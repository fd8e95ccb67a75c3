import math
import threading

import numpy as np
import pytest

from bickley.models import (
    KiValue,
    Bracket,
    McEstimate,
    KiCache,
    SweepReport,
    BickleyConvergenceError,
    make_verdict,
)


class TestKiValue:

    def test_product_error(self):
        a = KiValue(2.0, 0.1)
        b = KiValue(3.0, 0.2)
        product = a * b
        assert product.value == 6.0
        assert product.abs_err_est == pytest.approx(2.0 * 0.2 + 3.0 * 0.1)

    def test_sum_and_scalars(self):
        a = KiValue(1.0, 0.1)
        assert (a + 1).value == 2.0
        assert (2 * a).abs_err_est == pytest.approx(0.2)
        assert (1 - a).value == 0.0
        assert (1 - a).abs_err_est == pytest.approx(0.1)

    def test_quotient(self):
        q = KiValue(1.0, 0.01) / KiValue(2.0, 0.02)
        assert q.value == 0.5
        assert q.abs_err_est == pytest.approx((0.01 + 0.5 * 0.02) / 2.0)
        with pytest.raises(ZeroDivisionError):
            KiValue(1.0) / KiValue(0.0)

    def test_power(self):
        v = KiValue(4.0, 0.4) ** 0.5
        assert v.value == 2.0
        assert v.abs_err_est == pytest.approx(0.1)
        assert KiValue(4.0, 0.4).sqrt() == v

    def test_power_of_zero(self):
        assert (KiValue(0.0, 1e-4) ** 0.5).abs_err_est == pytest.approx(1e-2)
        assert (KiValue(0.0, 1e-4) ** 3).abs_err_est == 0.0
        with pytest.raises(ZeroDivisionError):
            KiValue(0.0, 1e-4) ** -1

    @pytest.mark.parametrize("err", [-1.0, math.inf, math.nan])
    def test_invalid_error(self, err):
        with pytest.raises(ValueError):
            KiValue(1.0, err)

    def test_numpy_scalars(self):
        product = KiValue(2.0, 0.1) * np.float32(2.0)
        assert product.value == 4.0
        assert product.abs_err_est == pytest.approx(0.2)
        assert (KiValue(1.0) + np.int64(3)).value == 4.0
        assert (KiValue(1.0, 0.2) / np.float64(2.0)).abs_err_est == pytest.approx(0.1)

    def test_unsupported_operand(self):
        with pytest.raises(TypeError):
            KiValue(1.0) + "1"

    def test_to_dict(self):
        assert KiValue(1.0, 0.5).to_dict() == {'value': 1.0, 'abs_err_est': 0.5}

    def test_estimate_dict(self):
        estimate = McEstimate(value=1.0, abs_err_est=0.1, samples=10, acceptance_rate=0.9)
        assert estimate.standard_error == 0.1
        assert estimate.to_dict()['samples'] == 10


class TestBracket:

    def test_contains(self):
        bracket = Bracket(lower=1.0, upper=2.0)
        assert bracket.contains(1.5)
        assert not bracket.contains(2.1)
        assert bracket.contains(2.1, slack=0.2)
        assert bracket.width == 1.0

    def test_inverted(self):
        with pytest.raises(ValueError):
            Bracket(lower=2.0, upper=1.0)


class TestSweepReport:

    def test_aggregation(self):
        report = SweepReport(tolerance=1e-9)
        entry = report.entry('t')
        entry.add(make_verdict('t', {'x': 1.0}, KiValue.exact(1.0), KiValue.exact(2.0), 1e-9))
        entry.add(make_verdict('t', {'x': 2.0}, KiValue.exact(1.0), KiValue.exact(1.5), 1e-9))
        entry.add(make_verdict('t', {'x': 3.0}, KiValue.exact(2.0), KiValue.exact(1.0), 1e-9,
                               asserted=False))
        assert entry.count == 3
        assert entry.asserted == 2
        assert entry.min_margin == pytest.approx(1.0 / 3.0)
        assert entry.argmin == {'x': 2.0}
        assert entry.report_only_violations == 1
        assert report.passed

    def test_failure(self):
        report = SweepReport(tolerance=1e-9)
        report.entry('t').add(make_verdict('t', {}, KiValue.exact(2.0), KiValue.exact(1.0), 1e-9))
        assert report.failure_count == 1
        assert not report.to_dict()['passed']


class TestKiCache:

    def test_lru_eviction(self):
        cache = KiCache(max_items=2)
        cache.set(('ki', 1.0, 1.0, 0), KiValue(1.0))
        cache.set(('ki', 2.0, 1.0, 0), KiValue(2.0))
        cache.get(('ki', 1.0, 1.0, 0))
        cache.set(('ki', 3.0, 1.0, 0), KiValue(3.0))
        assert cache.get(('ki', 2.0, 1.0, 0)) is None
        assert cache.get(('ki', 1.0, 1.0, 0)) == KiValue(1.0)
        assert len(cache) == 2

    def test_threads(self):
        cache = KiCache()

        def fill(offset):
            for i in range(200):
                cache.set(('ki', float(offset), float(i), 0), KiValue(float(i)))

        threads = [threading.Thread(target=fill, args=(k,)) for k in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(cache) == 800
        cache.clear()
        assert cache.stats() == {'items': 0, 'hits': 0, 'misses': 0}


class TestMakeVerdict:

    def test_infinite_rhs_holds(self):
        verdict = make_verdict('t', {}, KiValue(1.0, 1e-3), KiValue.exact(math.inf), 1e-9)
        assert verdict.holds
        assert verdict.margin == 1.0
        assert verdict.err_budget == 0.0

    def test_infinite_lhs_fails(self):
        verdict = make_verdict('t', {}, KiValue.exact(math.inf), KiValue(1.0, 1e-3), 1e-9)
        assert not verdict.holds
        assert verdict.margin == -1.0

    def test_both_infinite_is_tie(self):
        verdict = make_verdict('t', {}, KiValue.exact(math.inf), KiValue.exact(math.inf), 1e-9)
        assert verdict.holds
        assert verdict.margin == 0.0


def test_convergence_error_partial():
    error = BickleyConvergenceError("no convergence", partial=KiValue(1.0, 0.5))
    assert error.partial.abs_err_est == 0.5
    assert "no convergence" in str(error)
