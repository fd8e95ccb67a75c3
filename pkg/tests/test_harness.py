import numpy as np
import pytest

from bickley.config import GridSpec, get_grid
from bickley.harness import (
    KiEvaluator,
    check_turan,
    check_turan_chain,
    check_geom_concavity_chain,
    check_joint_logconvex,
    check_joint_holder,
    chebyshev_direction,
    check_chebyshev,
    check_gruss,
    check_pair_mean,
    check_pair_product,
    check_order_convexity,
    check_relative_convexity,
    check_kimberling_chain,
    check_kimberling_normalization,
    check_vasic,
    check_order_chain,
    check_bound_gamma_quarter,
    check_bound_power_exponential,
    check_bound_partial_alpha,
    check_bound_carlson,
    check_bound_holder,
    gram_psd_in_x,
    gram_psd_in_alpha,
    monotone_verdict,
    probe_log_convexity_x,
    probe_geom_concavity_x,
    probe_log_convexity_alpha,
    probe_ratio_over_x,
    probe_ratio_over_alpha,
    resolve_suite_names,
    sweep,
    SUITES,
)
from bickley.models import BickleyDomainError, KiCache, KiValue, make_verdict


class TestVerdicts:

    def test_margin_is_normalised(self):
        verdict = make_verdict('t', {}, KiValue.exact(1.0), KiValue.exact(2.0), 1e-9)
        assert verdict.margin == pytest.approx(0.5)
        assert verdict.holds

    def test_violation(self):
        verdict = make_verdict('t', {}, KiValue.exact(2.0), KiValue.exact(1.0), 1e-9)
        assert verdict.margin == pytest.approx(-0.5)
        assert not verdict.holds
        assert verdict.failed

    def test_error_budget_absorbs_small_violation(self):
        verdict = make_verdict('t', {}, KiValue(1.0 + 1e-8, 1e-7), KiValue.exact(1.0), 1e-12)
        assert verdict.margin < 0
        assert verdict.holds

    def test_scale_invariance(self):
        a = make_verdict('t', {}, KiValue.exact(3.0), KiValue.exact(4.0), 1e-9)
        b = make_verdict('t', {}, KiValue.exact(3e-200), KiValue.exact(4e-200), 1e-9)
        assert a.margin == pytest.approx(b.margin, rel=1e-12)


class TestOrderChecks:

    @pytest.mark.parametrize("a1, a2", [(-2.0, 3.0), (0.0, 1.0), (0.5, 4.5), (-1.5, -0.5)])
    @pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
    def test_turan(self, ev, a1, a2, x):
        verdict = check_turan(a1, a2, x, ev=ev)
        assert verdict.holds
        assert verdict.margin >= 0.0

    def test_turan_equal_orders_is_equality(self, ev):
        verdict = check_turan(1.5, 1.5, 0.7, ev=ev)
        assert abs(verdict.margin) <= 4 * verdict.err_budget + 1e-15

    def test_turan_symmetric(self, ev):
        assert check_turan(0.0, 2.0, 1.0, ev=ev).margin == check_turan(2.0, 0.0, 1.0, ev=ev).margin

    @pytest.mark.parametrize("alpha", [-1.0, 0.0, 1.0, 2.0, 3.0])
    @pytest.mark.parametrize("x", [0.2, 1.0, 5.0])
    def test_turan_chain_integer_orders(self, ev, alpha, x):
        lower, upper = check_turan_chain(alpha, x, ev=ev)
        assert lower.holds and upper.holds
        assert upper.asserted

    def test_turan_chain_upper_report_only(self, ev):
        lower, upper = check_turan_chain(0.5, 1.0, ev=ev)
        assert lower.asserted and lower.holds
        assert not upper.asserted
        assert upper.note

    def test_pair_mean_and_product(self, ev):
        assert check_pair_mean(1.0, 0.5, 1.0, ev=ev).holds
        assert check_pair_product(1.0, 0.5, -0.3, 2.0, ev=ev).holds

    def test_order_convexity(self, ev):
        assert check_order_convexity(-1.0, 3.0, 0.25, 1.0, ev=ev).holds
        with pytest.raises(BickleyDomainError):
            check_order_convexity(-1.0, 3.0, 1.5, 1.0, ev=ev)

    def test_relative_convexity(self, ev):
        assert check_relative_convexity(3.0, 1.0, ev=ev).holds
        with pytest.raises(BickleyDomainError):
            check_relative_convexity(1.0, 1.0, ev=ev)


class TestArgumentChecks:

    def test_geometric_chain(self, ev):
        left, right = check_geom_concavity_chain(1.0, 0.5, 2.0, ev=ev)
        assert left.asserted and left.holds
        assert right.holds

    def test_geometric_chain_report_only(self, ev):
        left, _ = check_geom_concavity_chain(1.5, 0.5, 2.0, ev=ev)
        assert not left.asserted

    def test_joint_logconvex(self, ev):
        assert check_joint_logconvex(1.0, 1.0, 0.5, 0.5, ev=ev).holds
        with pytest.raises(BickleyDomainError):
            check_joint_logconvex(1.0, 1.0, 1.0, 0.5, ev=ev)

    def test_joint_holder(self, ev):
        assert check_joint_holder(0.0, 2.0, 0.5, 3.0, 0.25, ev=ev).holds
        with pytest.raises(BickleyDomainError):
            check_joint_holder(0.0, 2.0, 0.5, 3.0, -0.1, ev=ev)


EQUALITY_CASES = {
    'pair_mean_zero_beta': lambda ev: check_pair_mean(1.5, 0.0, 0.8, ev=ev),
    'pair_mean_zero_beta_negative_order': lambda ev: check_pair_mean(-2.0, 0.0, 3.0, ev=ev),
    'pair_product_zero_shifts': lambda ev: check_pair_product(1.0, 0.0, 0.0, 2.0, ev=ev),
    'joint_logconvex_zero_shifts': lambda ev: check_joint_logconvex(2.5, 0.4, 0.0, 0.0, ev=ev),
    'relative_convexity_order_two': lambda ev: check_relative_convexity(2.0, 1.3, ev=ev),
    'geom_concavity_left_x_equals_y': lambda ev: check_geom_concavity_chain(1.0, 0.5, 0.5, ev=ev)[0],
    'geom_concavity_right_x_equals_y': lambda ev: check_geom_concavity_chain(0.0, 1.0, 1.0, ev=ev)[1],
    'geom_concavity_large_x_equals_y': lambda ev: check_geom_concavity_chain(2.0, 2.0, 2.0, ev=ev)[0],
}


class TestEqualityCases:

    @pytest.mark.parametrize("case", sorted(EQUALITY_CASES))
    def test_margin_within_error_budget(self, ev, case):
        verdict = EQUALITY_CASES[case](ev)
        assert verdict.holds
        assert abs(verdict.margin) <= 4 * verdict.err_budget

    @pytest.mark.parametrize("nu, mu", [(0.5, -0.3), (1.0, 2.0), (-0.7, 0.25)])
    def test_pair_product_symmetric_in_shifts(self, ev, nu, mu):
        forward = check_pair_product(1.0, nu, mu, 1.5, ev=ev)
        swapped = check_pair_product(1.0, mu, nu, 1.5, ev=ev)
        assert forward.margin == swapped.margin
        assert forward.err_budget == swapped.err_budget


class TestProductChecks:

    @pytest.mark.parametrize("alpha, beta, expected", [
        (1.0, -1.0, 'forward'),
        (2.0, -1.0, 'forward'),
        (-2.0, 1.0, 'forward'),
        (1.0, 1.0, 'reversed'),
        (-1.0, -1.0, 'reversed'),
    ])
    def test_direction(self, alpha, beta, expected):
        assert chebyshev_direction(alpha, beta) == expected

    @pytest.mark.parametrize("alpha, beta", [(1.0, -1.0), (2.0, -1.0), (1.0, 1.0), (-1.0, -1.0), (3.0, -0.5)])
    def test_chebyshev(self, ev, alpha, beta):
        verdict = check_chebyshev(alpha, beta, 1.0, ev=ev)
        assert verdict.holds
        assert verdict.params['direction'] == chebyshev_direction(alpha, beta)

    def test_chebyshev_equality(self, ev):
        verdict = check_chebyshev(2.0, 0.0, 1.0, ev=ev)
        assert verdict.note == 'equality'
        assert abs(verdict.margin) <= 4 * verdict.err_budget + 1e-15

    def test_gruss(self, ev):
        assert check_gruss(2.0, -1.0, 1.0, ev=ev).holds
        with pytest.raises(BickleyDomainError):
            check_gruss(1.0, 1.0, 1.0, ev=ev)
        with pytest.raises(BickleyDomainError):
            check_gruss(0.5, -1.0, 1.0, ev=ev)


class TestAdditivityChecks:

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 3.0])
    def test_kimberling_chain(self, ev, alpha):
        for verdict in check_kimberling_chain(alpha, 0.5, 1.5, ev=ev):
            assert verdict.holds, verdict.name
        assert check_kimberling_normalization(alpha, 0.5, ev=ev).holds

    def test_kimberling_chain_small_x_is_tight(self, ev):
        # Ki_2(0) = 1, so product and shifted links meet as x, y -> 0
        product, subadditive, shifted = check_kimberling_chain(2.0, 1e-6, 1e-6, ev=ev)
        assert product.holds and subadditive.holds and shifted.holds
        assert abs(product.margin) < 1e-5
        assert abs(shifted.margin) < 1e-5
        assert subadditive.margin == pytest.approx(0.5, abs=1e-3)

    def test_kimberling_requires_positive_order(self, ev):
        with pytest.raises(BickleyDomainError):
            check_kimberling_chain(0.0, 1.0, 1.0, ev=ev)

    def test_vasic(self, ev):
        assert check_vasic(2.0, 0.5, 1.0, 2.5, 1.5, ev=ev).holds
        with pytest.raises(BickleyDomainError):
            check_vasic(2.0, 0.5, 1.0, 0.5, 1.5, ev=ev)

    def test_order_chain(self, ev):
        names = [v.name for v in check_order_chain(1.0, 2.0, 1.0, ev=ev)]
        assert names == ['order_product', 'order_subadditive', 'order_shifted']
        assert all(v.holds for v in check_order_chain(1.0, 2.0, 1.0, ev=ev))
        with pytest.raises(BickleyDomainError):
            check_order_chain(1.0, 0.0, 1.0, ev=ev)


class TestBoundChecks:

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 3.0])
    @pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
    def test_closed_bounds(self, ev, alpha, x):
        assert check_bound_gamma_quarter(alpha, x, ev=ev).holds
        assert check_bound_power_exponential(alpha, x, ev=ev).holds

    def test_partial_alpha(self, ev):
        lower, upper = check_bound_partial_alpha(1.0, 1.0, ev=ev)
        assert lower.holds and upper.holds
        assert lower.margin > 0 and upper.margin > 0

    def test_carlson(self, ev):
        assert check_bound_carlson(1.0, 1.0, ev=ev).holds

    def test_holder(self, ev):
        verdicts = check_bound_holder(2.0, 0.5, 2.0, ev=ev)
        assert [v.name for v in verdicts] == ['holder_lower', 'holder_mixed', 'holder_upper', 'k0_gaussian']
        assert all(v.holds for v in verdicts)


class TestGram:

    def test_points_in_x(self, ev):
        verdict = gram_psd_in_x(1.0, [0.5, 1.0, 2.0, 3.0], ev=ev)
        assert verdict.holds
        assert len(verdict.leading_minors) == 4
        assert verdict.trace > 0

    def test_orders(self, ev):
        assert gram_psd_in_alpha(1.0, [0.0, 0.5, 1.0, 1.5], ev=ev).holds

    def test_seeded_random_sets(self, ev):
        rng = np.random.default_rng(7)
        for _ in range(5):
            points = sorted(rng.uniform(0.1, 3.0, size=4))
            assert gram_psd_in_x(1.0, points, ev=ev).holds
            alphas = sorted(rng.uniform(-2.0, 3.0, size=4))
            assert gram_psd_in_alpha(0.8, alphas, ev=ev).holds

    def test_size_limits(self, ev):
        with pytest.raises(BickleyDomainError):
            gram_psd_in_x(1.0, [], ev=ev)
        with pytest.raises(BickleyDomainError):
            gram_psd_in_alpha(1.0, [0.1 * k for k in range(9)], ev=ev)


class TestProbes:
    grid = [0.1, 0.3, 1.0, 3.0, 8.0]

    def test_log_convexity_x(self, ev):
        verdict = probe_log_convexity_x(1.0, self.grid, ev=ev)
        assert verdict.holds
        assert verdict.direction == 'non-decreasing'
        assert len(verdict.values) == len(self.grid)

    def test_geometric_concavity_x(self, ev):
        assert probe_geom_concavity_x(0.0, self.grid, ev=ev).holds
        assert not probe_geom_concavity_x(0.5, self.grid, ev=ev).asserted

    def test_log_convexity_alpha(self, ev):
        assert probe_log_convexity_alpha(1.0, [-1.0, 0.0, 1.0, 2.0], ev=ev).holds

    def test_ratios(self, ev):
        assert probe_ratio_over_x(0.5, self.grid, ev=ev).holds
        assert probe_ratio_over_alpha(1.0, [0.5, 1.0, 2.0], ev=ev).holds
        with pytest.raises(BickleyDomainError):
            probe_ratio_over_alpha(1.0, [0.0, 1.0], ev=ev)

    def test_monotone_verdict_detects_violation(self):
        values = [KiValue.exact(v) for v in (1.0, 2.0, 1.5)]
        verdict = monotone_verdict('probe', {}, values, 'non-decreasing', 1e-9)
        assert not verdict.holds
        assert verdict.margin == pytest.approx(-0.25)

    def test_monotone_verdict_direction(self):
        with pytest.raises(ValueError):
            monotone_verdict('probe', {}, [], 'sideways', 1e-9)


class TestSweep:

    def test_resolve_all(self):
        assert resolve_suite_names(['all']) == list(SUITES)
        assert resolve_suite_names(['gruss', 'turan']) == ['turan', 'gruss']

    def test_unknown_suite(self, tiny_grid):
        with pytest.raises(ValueError):
            sweep(tiny_grid, ['turan', 'nonsense'])

    def test_empty_names(self, tiny_grid):
        report = sweep(tiny_grid, [])
        assert report.entries == {}
        assert report.passed

    def test_single_order_turan_is_equality(self):
        grid = GridSpec(name='one', alpha_values=[1.0], x_values=[0.5, 1.0])
        entry = sweep(grid, ['turan']).entries['turan']
        assert entry.count == 2
        assert entry.min_margin == 0.0

    def test_workers_do_not_change_result(self, tiny_grid):
        names = ['turan', 'chebyshev', 'gram_x']
        serial = sweep(tiny_grid, names, workers=1).to_dict()
        threaded = sweep(tiny_grid, names, workers=4).to_dict()
        assert serial == threaded

    def test_shared_cache(self, tiny_grid):
        cache = KiCache()
        sweep(tiny_grid, ['turan'], cache=cache)
        misses = cache.misses
        sweep(tiny_grid, ['turan'], cache=cache)
        assert cache.misses == misses

    def test_tiny_grid_all(self, tiny_grid):
        report = sweep(tiny_grid, ['all'], workers=2)
        assert report.passed, report.to_dict()['entries']
        assert 'turan_chain_upper' in report.entries
        assert report.entries['turan_chain_upper'].asserted < report.entries['turan_chain_upper'].count

    @pytest.mark.slow
    def test_default_grid_all(self):
        report = sweep(get_grid('default'), ['all'], workers=4)
        assert report.passed, report.failure_count
