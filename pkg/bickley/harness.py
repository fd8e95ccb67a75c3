# bickley/harness.py
"""
Inequality harness for the Bickley function

Each check evaluates one instance of an inequality and returns a verdict
with a signed, normalised margin and a propagated error budget. Checks
outside the domain on which the inequality is known to hold still run but
carry asserted=False, so they are reported and never counted as failures.

Checks:
- order log-convexity: check_turan, check_turan_chain
- argument geometry: check_geom_concavity_chain, check_joint_logconvex,
  check_joint_holder
- products of orders: check_chebyshev, check_gruss, check_pair_mean,
  check_pair_product, check_order_convexity, check_relative_convexity
- additivity: check_kimberling_chain, check_kimberling_normalization,
  check_vasic, check_order_chain
- closed-form bounds: check_bound_* (see bickley.bounds)

Matrix and sequence probes:
- gram_psd_in_x / gram_psd_in_alpha: smallest eigenvalue of Gram matrices
- probe_*: monotonicity of sampled ratios

Sweeps:
- sweep(grid, names, tol): runs named suites over a GridSpec with shared
  value cache, optional thread pool, deterministic aggregation order
"""

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .bounds import (
    bound_gamma_quarter,
    bound_power_exponential,
    bound_holder,
    bracket_partial_alpha,
    kimberling_constant,
)
from .config import EvalConfig, GridSpec
from .engine import ki, ki_at_zero, ki_alpha_derivative, MAX_ALPHA
from .models import (
    KiValue,
    KiCache,
    Verdict,
    GramVerdict,
    MonotoneVerdict,
    SweepReport,
    BickleyDomainError,
    BickleyConvergenceError,
    make_verdict,
    MARGIN_FLOOR,
)

logger = logging.getLogger(__name__)

VERDICT_TOL = 1e-9
GRAM_TOL = 1e-10
MAX_GRAM_SIZE = 8


# =============================================================================
# Evaluator
# =============================================================================

class KiEvaluator:
    """
    Memoising front end to the engine for one verification run.

    The same (alpha, x) pair shows up in many checks; values are computed
    once and shared through a KiCache. Safe to use from several threads.
    """

    def __init__(self, cfg: Optional[EvalConfig] = None, cache: Optional[KiCache] = None):
        self.cfg = cfg or EvalConfig()
        self.cache = cache if cache is not None else KiCache()

    def ki(self, alpha: float, x: float) -> KiValue:
        key = ('ki', float(alpha) + 0.0, float(x), 0)
        cached = self.cache.get(key)
        if cached is not None:
            return cached
        value = ki(alpha, x, self.cfg)
        self.cache.set(key, value)
        return value

    def alpha_derivative(self, alpha: float, x: float, m: int = 1) -> KiValue:
        key = ('dalpha', float(alpha) + 0.0, float(x), m)
        cached = self.cache.get(key)
        if cached is not None:
            return cached
        value = ki_alpha_derivative(alpha, x, m, self.cfg)
        self.cache.set(key, value)
        return value

    @staticmethod
    def at_zero(alpha: float) -> KiValue:
        return KiValue.exact(ki_at_zero(alpha))


def _ev(ev: Optional[KiEvaluator]) -> KiEvaluator:
    return ev if ev is not None else KiEvaluator()


def _is_integer_from(alpha: float, start: int) -> bool:
    return float(alpha).is_integer() and alpha >= start


# =============================================================================
# Order log-convexity
# =============================================================================

def check_turan(alpha1: float, alpha2: float, x: float,
                tol: float = VERDICT_TOL, ev: Optional[KiEvaluator] = None) -> Verdict:
    """[Ki_{(a1+a2)/2}(x)]^2 <= Ki_{a1}(x) Ki_{a2}(x)."""
    ev = _ev(ev)
    mid = ev.ki(0.5 * (alpha1 + alpha2), x)
    lhs = mid ** 2
    rhs = ev.ki(alpha1, x) * ev.ki(alpha2, x)
    return make_verdict('turan', {'alpha1': alpha1, 'alpha2': alpha2, 'x': x}, lhs, rhs, tol)


def check_turan_chain(alpha: float, x: float, tol: float = VERDICT_TOL,
                      ev: Optional[KiEvaluator] = None) -> Tuple[Verdict, Verdict]:
    """
    1 <= Ki_a Ki_{a-2} / Ki_{a-1}^2 <= 1 + Ki_a / (x Ki_{a-1}).

    The left link holds for every real alpha; the right link is asserted
    only for alpha in {-1, 0, 1, 2, ...}.
    """
    ev = _ev(ev)
    k0 = ev.ki(alpha, x)
    k1 = ev.ki(alpha - 1.0, x)
    k2 = ev.ki(alpha - 2.0, x)
    ratio = k0 * k2 / (k1 ** 2)
    params = {'alpha': alpha, 'x': x}
    left = make_verdict('turan_chain_lower', params, KiValue.exact(1.0), ratio, tol)
    upper = 1.0 + k0 / (x * k1)
    asserted = _is_integer_from(alpha, -1)
    right = make_verdict('turan_chain_upper', params, ratio, upper, tol, asserted=asserted,
                         note='' if asserted else 'report-only: non-integer order')
    return left, right


# =============================================================================
# Argument geometry
# =============================================================================

def check_geom_concavity_chain(alpha: float, x: float, y: float, tol: float = VERDICT_TOL,
                               ev: Optional[KiEvaluator] = None) -> Tuple[Verdict, Verdict]:
    """
    Ki(sqrt(xy)) >= sqrt(Ki(x) Ki(y)) >= Ki((x+y)/2).

    Left link asserted for alpha in {-1, 0, 1, ...}; right link (log-convexity
    in x) for every alpha.
    """
    ev = _ev(ev)
    geo = (ev.ki(alpha, x) * ev.ki(alpha, y)).sqrt()
    params = {'alpha': alpha, 'x': x, 'y': y}
    asserted = _is_integer_from(alpha, -1)
    left = make_verdict('geometric_concavity', params, geo, ev.ki(alpha, math.sqrt(x * y)), tol,
                        asserted=asserted, note='' if asserted else 'report-only: non-integer order')
    right = make_verdict('log_convexity', params, ev.ki(alpha, 0.5 * (x + y)), geo, tol)
    return left, right


def check_joint_logconvex(alpha: float, x: float, nu: float, mu: float,
                          tol: float = VERDICT_TOL, ev: Optional[KiEvaluator] = None) -> Verdict:
    """[Ki_a(x)]^2 <= Ki_{a(1+mu)}((1+nu)x) Ki_{a(1-mu)}((1-nu)x), |nu| < 1."""
    if not abs(nu) < 1.0:
        raise BickleyDomainError(f"check_joint_logconvex requires |nu| < 1, got {nu}")
    ev = _ev(ev)
    lhs = ev.ki(alpha, x) ** 2
    rhs = ev.ki(alpha * (1.0 + mu), (1.0 + nu) * x) * ev.ki(alpha * (1.0 - mu), (1.0 - nu) * x)
    return make_verdict('joint_logconvex', {'alpha': alpha, 'x': x, 'nu': nu, 'mu': mu}, lhs, rhs, tol)


def check_joint_holder(alpha: float, beta: float, x: float, y: float, lam: float,
                       tol: float = VERDICT_TOL, ev: Optional[KiEvaluator] = None) -> Verdict:
    """Ki_{l a + (1-l) b}(l x + (1-l) y) <= Ki_a(x)^l Ki_b(y)^(1-l), l in [0, 1]."""
    if not 0.0 <= lam <= 1.0:
        raise BickleyDomainError(f"check_joint_holder requires lam in [0, 1], got {lam}")
    ev = _ev(ev)
    lhs = ev.ki(lam * alpha + (1.0 - lam) * beta, lam * x + (1.0 - lam) * y)
    rhs = ev.ki(alpha, x) ** lam * ev.ki(beta, y) ** (1.0 - lam)
    params = {'alpha': alpha, 'beta': beta, 'x': x, 'y': y, 'lam': lam}
    return make_verdict('joint_holder', params, lhs, rhs, tol)


# =============================================================================
# Products and combinations of orders
# =============================================================================

def chebyshev_direction(alpha: float, beta: float) -> str:
    """
    'forward' when (cosh t)^beta and (cosh t)^-(alpha+beta) are monotone in
    the same direction, 'reversed' otherwise.
    """
    s = alpha + beta
    if (beta >= 0.0 and s <= 0.0) or (beta <= 0.0 and s >= 0.0):
        return 'forward'
    return 'reversed'


def check_chebyshev(alpha: float, beta: float, x: float, tol: float = VERDICT_TOL,
                    ev: Optional[KiEvaluator] = None) -> Verdict:
    """
    forward:  Ki_{-b} Ki_{a+b} <= Ki_0 Ki_a
    reversed: Ki_0 Ki_a <= Ki_{-b} Ki_{a+b}

    b = 0 or a + b = 0 makes one factor constant; both sides coincide.
    """
    ev = _ev(ev)
    mixed = ev.ki(-beta, x) * ev.ki(alpha + beta, x)
    plain = ev.ki(0.0, x) * ev.ki(alpha, x)
    direction = chebyshev_direction(alpha, beta)
    params = {'alpha': alpha, 'beta': beta, 'x': x, 'direction': direction}
    note = 'equality' if beta == 0.0 or alpha + beta == 0.0 else ''
    if direction == 'forward':
        return make_verdict('chebyshev', params, mixed, plain, tol, note=note)
    return make_verdict('chebyshev', params, plain, mixed, tol, note=note)


def check_gruss(alpha: float, beta: float, x: float, tol: float = VERDICT_TOL,
                ev: Optional[KiEvaluator] = None) -> Verdict:
    """|Ki_0 Ki_a - Ki_{-b} Ki_{a+b}| <= Ki_0^2 / 4 for b <= 0 <= a + b."""
    if beta > 0.0 or alpha + beta < 0.0:
        raise BickleyDomainError(
            f"check_gruss requires beta <= 0 and alpha + beta >= 0, got alpha={alpha}, beta={beta}")
    ev = _ev(ev)
    k0 = ev.ki(0.0, x)
    lhs = abs(k0 * ev.ki(alpha, x) - ev.ki(-beta, x) * ev.ki(alpha + beta, x))
    rhs = k0 ** 2 / 4.0
    return make_verdict('gruss', {'alpha': alpha, 'beta': beta, 'x': x}, lhs, rhs, tol)


def check_pair_mean(alpha: float, beta: float, x: float, tol: float = VERDICT_TOL,
                    ev: Optional[KiEvaluator] = None) -> Verdict:
    """Ki_{a+b} + Ki_{a-b} >= 2 Ki_a."""
    ev = _ev(ev)
    lhs = 2.0 * ev.ki(alpha, x)
    rhs = ev.ki(alpha + beta, x) + ev.ki(alpha - beta, x)
    return make_verdict('pair_mean', {'alpha': alpha, 'beta': beta, 'x': x}, lhs, rhs, tol)


def check_pair_product(alpha: float, nu: float, mu: float, x: float, tol: float = VERDICT_TOL,
                       ev: Optional[KiEvaluator] = None) -> Verdict:
    """Ki_{a+nu} Ki_{a-mu} + Ki_{a-nu} Ki_{a+mu} >= 2 Ki_a^2."""
    ev = _ev(ev)
    lhs = 2.0 * ev.ki(alpha, x) ** 2
    rhs = (ev.ki(alpha + nu, x) * ev.ki(alpha - mu, x)
           + ev.ki(alpha - nu, x) * ev.ki(alpha + mu, x))
    return make_verdict('pair_product', {'alpha': alpha, 'nu': nu, 'mu': mu, 'x': x}, lhs, rhs, tol)


def check_order_convexity(nu: float, mu: float, lam: float, x: float, tol: float = VERDICT_TOL,
                          ev: Optional[KiEvaluator] = None) -> Verdict:
    """Ki_{l nu + (1-l) mu}(x) <= l Ki_nu(x) + (1-l) Ki_mu(x)."""
    if not 0.0 <= lam <= 1.0:
        raise BickleyDomainError(f"check_order_convexity requires lam in [0, 1], got {lam}")
    ev = _ev(ev)
    lhs = ev.ki(lam * nu + (1.0 - lam) * mu, x)
    rhs = lam * ev.ki(nu, x) + (1.0 - lam) * ev.ki(mu, x)
    return make_verdict('order_convexity', {'nu': nu, 'mu': mu, 'lam': lam, 'x': x}, lhs, rhs, tol)


def check_relative_convexity(alpha: float, x: float, tol: float = VERDICT_TOL,
                             ev: Optional[KiEvaluator] = None) -> Verdict:
    """Ki_{a-2}/Ki_{a-1} <= Ki_0/Ki_1 for a >= 2."""
    if alpha < 2.0:
        raise BickleyDomainError(f"check_relative_convexity requires alpha >= 2, got {alpha}")
    ev = _ev(ev)
    lhs = ev.ki(alpha - 2.0, x) / ev.ki(alpha - 1.0, x)
    rhs = ev.ki(0.0, x) / ev.ki(1.0, x)
    return make_verdict('relative_convexity', {'alpha': alpha, 'x': x}, lhs, rhs, tol)


# =============================================================================
# Additivity
# =============================================================================

def _require_positive_order(alpha: float, op: str):
    if not alpha > 0.0:
        raise BickleyDomainError(f"{op} requires alpha > 0, got {alpha}")


def check_kimberling_chain(alpha: float, x: float, y: float, tol: float = VERDICT_TOL,
                           ev: Optional[KiEvaluator] = None) -> Tuple[Verdict, Verdict, Verdict]:
    """
    c Ki(x) Ki(y) <= Ki(x+y) <= Ki(x) + Ki(y) <= Ki(x+y) + Ki(0),
    with c = 1/Ki_alpha(0).
    """
    _require_positive_order(alpha, "check_kimberling_chain")
    ev = _ev(ev)
    kx = ev.ki(alpha, x)
    ky = ev.ki(alpha, y)
    kxy = ev.ki(alpha, x + y)
    c = kimberling_constant(alpha)
    params = {'alpha': alpha, 'x': x, 'y': y}
    return (
        make_verdict('kimberling_product', params, c * kx * ky, kxy, tol),
        make_verdict('kimberling_subadditive', params, kxy, kx + ky, tol),
        make_verdict('kimberling_shifted', params, kx + ky, kxy + ev.at_zero(alpha), tol),
    )


def check_kimberling_normalization(alpha: float, x: float, tol: float = VERDICT_TOL,
                                   ev: Optional[KiEvaluator] = None) -> Verdict:
    """Ki_alpha(x) / Ki_alpha(0) <= 1 for alpha > 0."""
    _require_positive_order(alpha, "check_kimberling_normalization")
    ev = _ev(ev)
    ratio = ev.ki(alpha, x) / ev.at_zero(alpha)
    return make_verdict('kimberling_normalized', {'alpha': alpha, 'x': x},
                        ratio, KiValue.exact(1.0), tol)


def check_vasic(alpha: float, x: float, y: float, r: float, s: float,
                tol: float = VERDICT_TOL, ev: Optional[KiEvaluator] = None) -> Verdict:
    """r Ki(x) + s Ki(y) <= Ki(rx + sy) + (r + s - 1) Ki(0), r, s >= 1."""
    _require_positive_order(alpha, "check_vasic")
    if r < 1.0 or s < 1.0:
        raise BickleyDomainError(f"check_vasic requires r, s >= 1, got r={r}, s={s}")
    ev = _ev(ev)
    lhs = r * ev.ki(alpha, x) + s * ev.ki(alpha, y)
    rhs = ev.ki(alpha, r * x + s * y) + (r + s - 1.0) * ev.at_zero(alpha)
    return make_verdict('vasic', {'alpha': alpha, 'x': x, 'y': y, 'r': r, 's': s}, lhs, rhs, tol)


def check_order_chain(alpha: float, beta: float, x: float, tol: float = VERDICT_TOL,
                      ev: Optional[KiEvaluator] = None) -> Tuple[Verdict, Verdict, Verdict]:
    """Ki_a Ki_b / Ki_0 <= Ki_{a+b} <= Ki_a + Ki_b <= Ki_0 + Ki_{a+b}, a, b > 0."""
    if not (alpha > 0.0 and beta > 0.0):
        raise BickleyDomainError(f"check_order_chain requires alpha, beta > 0, got {alpha}, {beta}")
    ev = _ev(ev)
    ka = ev.ki(alpha, x)
    kb = ev.ki(beta, x)
    k0 = ev.ki(0.0, x)
    kab = ev.ki(alpha + beta, x)
    params = {'alpha': alpha, 'beta': beta, 'x': x}
    return (
        make_verdict('order_product', params, ka * kb / k0, kab, tol),
        make_verdict('order_subadditive', params, kab, ka + kb, tol),
        make_verdict('order_shifted', params, ka + kb, k0 + kab, tol),
    )


# =============================================================================
# Closed-form bounds as verdicts
# =============================================================================

def check_bound_gamma_quarter(alpha: float, x: float, tol: float = VERDICT_TOL,
                              ev: Optional[KiEvaluator] = None) -> Verdict:
    ev = _ev(ev)
    bound = KiValue.exact(bound_gamma_quarter(alpha, x))
    return make_verdict('bound_gamma_quarter', {'alpha': alpha, 'x': x}, ev.ki(alpha, x), bound, tol)


def check_bound_power_exponential(alpha: float, x: float, tol: float = VERDICT_TOL,
                                  ev: Optional[KiEvaluator] = None) -> Verdict:
    ev = _ev(ev)
    bound = KiValue.exact(bound_power_exponential(alpha, x))
    return make_verdict('bound_power_exponential', {'alpha': alpha, 'x': x},
                        ev.ki(alpha, x), bound, tol)


def check_bound_partial_alpha(alpha: float, x: float, tol: float = VERDICT_TOL,
                              ev: Optional[KiEvaluator] = None) -> Tuple[Verdict, Verdict]:
    """Both ends of the alpha-derivative bracket; strict only up to the error budget."""
    ev = _ev(ev)
    bracket = bracket_partial_alpha(alpha, x, ev.cfg)
    derivative = ev.alpha_derivative(alpha, x, 1)
    params = {'alpha': alpha, 'x': x}
    return (
        make_verdict('partial_alpha_lower', params, bracket.lower_value(), derivative, tol),
        make_verdict('partial_alpha_upper', params, derivative, bracket.upper_value(), tol),
    )


def check_bound_carlson(alpha: float, x: float, tol: float = VERDICT_TOL,
                        ev: Optional[KiEvaluator] = None) -> Verdict:
    """Ki_a(x)^4 <= (pi^2/2) Ki_{2a}(2x) Ki_{2a-2}(2x)."""
    ev = _ev(ev)
    lhs = ev.ki(alpha, x) ** 4
    rhs = 0.5 * math.pi ** 2 * ev.ki(2.0 * alpha, 2.0 * x) * ev.ki(2.0 * alpha - 2.0, 2.0 * x)
    return make_verdict('bound_carlson', {'alpha': alpha, 'x': x}, lhs, rhs, tol)


def check_bound_holder(alpha: float, x: float, p: float, tol: float = VERDICT_TOL,
                       ev: Optional[KiEvaluator] = None) -> Tuple[Verdict, ...]:
    """lower <= Ki <= mixed <= upper, with the Gaussian K_0 step checked on its own."""
    ev = _ev(ev)
    bracket = bound_holder(alpha, x, p)
    value = ev.ki(alpha, x)
    k0 = ev.ki(0.0, x * p)
    mixed = k0 ** (1.0 / p) * ki_at_zero(alpha * bracket.q) ** (1.0 / bracket.q)
    params = {'alpha': alpha, 'x': x, 'p': p}
    return (
        make_verdict('holder_lower', params, bracket.lower_value(), value, tol),
        make_verdict('holder_mixed', params, value, mixed, tol),
        make_verdict('holder_upper', params, mixed, bracket.upper_value(), tol),
        make_verdict('k0_gaussian', {'x': x * p}, k0, KiValue.exact(bracket.k0_gaussian), tol),
    )


# =============================================================================
# Gram matrices
# =============================================================================

def _gram_verdict(name: str, params: Dict[str, Any], entries: List[List[KiValue]],
                  tol: float) -> GramVerdict:
    values = np.array([[e.value for e in row] for row in entries])
    errors = np.array([[e.abs_err_est for e in row] for row in entries])
    sym = 0.5 * (values + values.T)
    try:
        eigenvalues = np.linalg.eigvalsh(sym)
    except np.linalg.LinAlgError as e:
        raise BickleyConvergenceError(f"{name}: eigenvalue iteration did not converge: {e}")
    lam_min = float(eigenvalues[0])
    trace = float(np.trace(sym))
    scale = max(abs(trace), MARGIN_FLOOR)
    margin = lam_min / scale
    # Weyl: |delta lambda| <= ||E||_2 <= ||E||_F
    err_budget = float(np.linalg.norm(errors)) / scale
    minors = [float(np.linalg.det(sym[:k, :k])) for k in range(1, sym.shape[0] + 1)]
    return GramVerdict(
        name=name,
        params=params,
        margin=margin,
        holds=bool(margin >= -(tol + err_budget)),
        err_budget=err_budget,
        min_eigenvalue=lam_min,
        trace=trace,
        leading_minors=minors,
    )


def _check_gram_size(n: int, op: str):
    if n < 1 or n > MAX_GRAM_SIZE:
        raise BickleyDomainError(f"{op}: between 1 and {MAX_GRAM_SIZE} points required, got {n}")


def gram_psd_in_x(alpha: float, points: Sequence[float], tol: float = GRAM_TOL,
                  ev: Optional[KiEvaluator] = None) -> GramVerdict:
    """H[j][k] = Ki_alpha(x_j + x_k) is positive semidefinite."""
    points = [float(p) for p in points]
    _check_gram_size(len(points), "gram_psd_in_x")
    ev = _ev(ev)
    entries = [[ev.ki(alpha, a + b) for b in points] for a in points]
    return _gram_verdict('gram_x', {'alpha': alpha, 'points': points}, entries, tol)


def gram_psd_in_alpha(x: float, alphas: Sequence[float], tol: float = GRAM_TOL,
                      ev: Optional[KiEvaluator] = None) -> GramVerdict:
    """H[j][k] = Ki_{alpha_j + alpha_k}(x) is positive semidefinite."""
    alphas = [float(a) for a in alphas]
    _check_gram_size(len(alphas), "gram_psd_in_alpha")
    ev = _ev(ev)
    entries = [[ev.ki(a + b, x) for b in alphas] for a in alphas]
    return _gram_verdict('gram_alpha', {'x': x, 'alphas': alphas}, entries, tol)


# =============================================================================
# Monotone probes
# =============================================================================

def monotone_verdict(name: str, params: Dict[str, Any], values: Sequence[KiValue],
                     direction: str, tol: float, asserted: bool = True,
                     note: str = '') -> MonotoneVerdict:
    """
    Verdict that a sampled sequence is non-decreasing or non-increasing.

    Each step is normalised like an inequality verdict; the reported margin
    is the worst step and err_budget is that step's budget.
    """
    if direction not in ('non-decreasing', 'non-increasing'):
        raise ValueError(f"Unknown direction: {direction}")
    sign = 1.0 if direction == 'non-decreasing' else -1.0
    margin, err_budget, holds = 0.0, 0.0, True
    worst = None
    for a, b in zip(values, values[1:]):
        scale = max(abs(a.value), abs(b.value), MARGIN_FLOOR)
        step = sign * (b.value - a.value) / scale
        step_err = (a.abs_err_est + b.abs_err_est) / scale
        if step < -(tol + step_err):
            holds = False
        if worst is None or step < worst:
            worst = step
            margin, err_budget = step, step_err
    return MonotoneVerdict(
        name=name,
        params=params,
        margin=margin,
        holds=holds,
        err_budget=err_budget,
        asserted=asserted,
        note=note,
        direction=direction,
        values=[v.value for v in values],
    )


def probe_log_convexity_x(alpha: float, grid: Sequence[float], tol: float = VERDICT_TOL,
                          ev: Optional[KiEvaluator] = None) -> MonotoneVerdict:
    """x -> -Ki_{a-1}(x) / Ki_a(x), the logarithmic derivative, is non-decreasing."""
    ev = _ev(ev)
    xs = sorted(float(x) for x in grid)
    ratios = [-(ev.ki(alpha - 1.0, x) / ev.ki(alpha, x)) for x in xs]
    return monotone_verdict('log_convexity_x', {'alpha': alpha, 'grid': xs},
                            ratios, 'non-decreasing', tol)


def probe_geom_concavity_x(alpha: float, grid: Sequence[float], tol: float = VERDICT_TOL,
                           ev: Optional[KiEvaluator] = None) -> MonotoneVerdict:
    """x -> -x Ki_{a-1}(x) / Ki_a(x) is non-increasing; asserted for a in {-1, 0, 1, ...}."""
    ev = _ev(ev)
    xs = sorted(float(x) for x in grid)
    ratios = [-(x * ev.ki(alpha - 1.0, x) / ev.ki(alpha, x)) for x in xs]
    asserted = _is_integer_from(alpha, -1)
    return monotone_verdict('geometric_concavity_x', {'alpha': alpha, 'grid': xs},
                            ratios, 'non-increasing', tol, asserted=asserted,
                            note='' if asserted else 'report-only: non-integer order')


def probe_log_convexity_alpha(x: float, alphas: Sequence[float], tol: float = VERDICT_TOL,
                              ev: Optional[KiEvaluator] = None) -> MonotoneVerdict:
    """alpha -> (d/dalpha Ki_alpha(x)) / Ki_alpha(x) is non-decreasing."""
    ev = _ev(ev)
    orders = sorted(float(a) for a in alphas)
    ratios = [ev.alpha_derivative(a, x, 1) / ev.ki(a, x) for a in orders]
    return monotone_verdict('log_convexity_alpha', {'x': x, 'alphas': orders},
                            ratios, 'non-decreasing', tol)


def probe_ratio_over_x(alpha: float, grid: Sequence[float], tol: float = VERDICT_TOL,
                       ev: Optional[KiEvaluator] = None) -> MonotoneVerdict:
    """x -> Ki_alpha(x) / x is non-increasing."""
    ev = _ev(ev)
    xs = sorted(float(x) for x in grid)
    ratios = [ev.ki(alpha, x) / x for x in xs]
    return monotone_verdict('ratio_over_x', {'alpha': alpha, 'grid': xs},
                            ratios, 'non-increasing', tol)


def probe_ratio_over_alpha(x: float, alphas: Sequence[float], tol: float = VERDICT_TOL,
                           ev: Optional[KiEvaluator] = None) -> MonotoneVerdict:
    """alpha -> Ki_alpha(x) / alpha is non-increasing on alpha > 0."""
    orders = sorted(float(a) for a in alphas)
    if any(a <= 0.0 for a in orders):
        raise BickleyDomainError(f"probe_ratio_over_alpha requires alpha > 0, got {orders}")
    ev = _ev(ev)
    ratios = [ev.ki(a, x) / a for a in orders]
    return monotone_verdict('ratio_over_alpha', {'x': x, 'alphas': orders},
                            ratios, 'non-increasing', tol)


# =============================================================================
# Suites
# =============================================================================

# (check function, keyword arguments) executed with tol and ev added
Task = Tuple[Callable[..., Any], Dict[str, Any]]


def _within_orders(*orders: float) -> bool:
    return all(abs(a) <= MAX_ALPHA for a in orders)


def _suite_turan(grid: GridSpec) -> List[Task]:
    alphas = grid.alpha_values
    return [(check_turan, {'alpha1': a1, 'alpha2': alphas[j], 'x': x})
            for i, a1 in enumerate(alphas) for j in range(i, len(alphas))
            for x in grid.x_values]


def _suite_turan_chain(grid: GridSpec) -> List[Task]:
    return [(check_turan_chain, {'alpha': a, 'x': x})
            for a in grid.alpha_values for x in grid.x_values
            if _within_orders(a - 2.0)]


def _suite_geometric_concavity(grid: GridSpec) -> List[Task]:
    return [(check_geom_concavity_chain, {'alpha': a, 'x': x, 'y': y})
            for a in grid.alpha_values for x in grid.x_values
            for y in grid.aux_values('y')]


def _suite_chebyshev(grid: GridSpec) -> List[Task]:
    return [(check_chebyshev, {'alpha': a, 'beta': b, 'x': x})
            for a in grid.alpha_values for b in grid.aux_values('beta')
            for x in grid.x_values if _within_orders(a + b, b)]


def _suite_gruss(grid: GridSpec) -> List[Task]:
    return [(check_gruss, {'alpha': a, 'beta': b, 'x': x})
            for a in grid.alpha_values for b in grid.aux_values('beta')
            if b <= 0.0 and a + b >= 0.0
            for x in grid.x_values]


def _suite_kimberling(grid: GridSpec) -> List[Task]:
    positive = [a for a in grid.alpha_values if a > 0.0]
    tasks: List[Task] = [(check_kimberling_chain, {'alpha': a, 'x': x, 'y': y})
                         for a in positive for x in grid.x_values
                         for y in grid.aux_values('y')]
    tasks += [(check_kimberling_normalization, {'alpha': a, 'x': x})
              for a in positive for x in grid.x_values]
    return tasks


def _suite_vasic(grid: GridSpec) -> List[Task]:
    return [(check_vasic, {'alpha': a, 'x': x, 'y': y, 'r': r, 's': s})
            for a in grid.alpha_values if a > 0.0
            for x in grid.x_values for y in grid.aux_values('y')
            for r in grid.aux_values('r') if r >= 1.0
            for s in grid.aux_values('s') if s >= 1.0]


def _suite_order_chain(grid: GridSpec) -> List[Task]:
    return [(check_order_chain, {'alpha': a, 'beta': b, 'x': x})
            for a in grid.alpha_values if a > 0.0
            for b in grid.aux_values('beta') if b > 0.0
            for x in grid.x_values if _within_orders(a + b)]


def _suite_pair_mean(grid: GridSpec) -> List[Task]:
    return [(check_pair_mean, {'alpha': a, 'beta': b, 'x': x})
            for a in grid.alpha_values for b in grid.aux_values('beta')
            for x in grid.x_values if _within_orders(a + b, a - b)]


def _suite_pair_product(grid: GridSpec) -> List[Task]:
    return [(check_pair_product, {'alpha': a, 'nu': nu, 'mu': mu, 'x': x})
            for a in grid.alpha_values for nu in grid.aux_values('nu')
            for mu in grid.aux_values('mu') for x in grid.x_values
            if _within_orders(a + nu, a - nu, a + mu, a - mu)]


def _suite_joint_logconvex(grid: GridSpec) -> List[Task]:
    return [(check_joint_logconvex, {'alpha': a, 'x': x, 'nu': nu, 'mu': mu})
            for a in grid.alpha_values for x in grid.x_values
            for nu in grid.aux_values('nu') if abs(nu) < 1.0
            for mu in grid.aux_values('mu')
            if _within_orders(a * (1.0 + mu), a * (1.0 - mu))]


def _suite_relative_convexity(grid: GridSpec) -> List[Task]:
    return [(check_relative_convexity, {'alpha': a, 'x': x})
            for a in grid.alpha_values if a >= 2.0 for x in grid.x_values]


def _suite_bound_gamma_quarter(grid: GridSpec) -> List[Task]:
    return [(check_bound_gamma_quarter, {'alpha': a, 'x': x})
            for a in grid.alpha_values if a > 0.25 for x in grid.x_values]


def _suite_bound_partial_alpha(grid: GridSpec) -> List[Task]:
    return [(check_bound_partial_alpha, {'alpha': a, 'x': x})
            for a in grid.alpha_values if _within_orders(a - 1.0, a + 2.0)
            for x in grid.x_values]


def _suite_bound_carlson(grid: GridSpec) -> List[Task]:
    return [(check_bound_carlson, {'alpha': a, 'x': x})
            for a in grid.alpha_values if _within_orders(2.0 * a, 2.0 * a - 2.0)
            for x in grid.x_values]


def _suite_bound_power_exponential(grid: GridSpec) -> List[Task]:
    return [(check_bound_power_exponential, {'alpha': a, 'x': x})
            for a in grid.alpha_values if a > 0.0 for x in grid.x_values]


def _suite_bound_holder(grid: GridSpec) -> List[Task]:
    return [(check_bound_holder, {'alpha': a, 'x': x, 'p': p})
            for a in grid.alpha_values if a > 0.0
            for x in grid.x_values for p in grid.aux_values('p') if p > 1.0]


def _suite_log_convexity_x(grid: GridSpec) -> List[Task]:
    return [(probe_log_convexity_x, {'alpha': a, 'grid': list(grid.x_values)})
            for a in grid.alpha_values]


def _suite_geometric_concavity_x(grid: GridSpec) -> List[Task]:
    return [(probe_geom_concavity_x, {'alpha': a, 'grid': list(grid.x_values)})
            for a in grid.alpha_values]


def _windows(values: Sequence[float], width: int) -> List[List[float]]:
    values = list(values)
    if len(values) <= width:
        return [values]
    return [values[i:i + width] for i in range(len(values) - width + 1)]


def _suite_gram_x(grid: GridSpec) -> List[Task]:
    return [(gram_psd_in_x, {'alpha': a, 'points': w})
            for a in grid.alpha_values if a > 0.0
            for w in _windows(grid.x_values, 4)]


def _suite_gram_alpha(grid: GridSpec) -> List[Task]:
    return [(gram_psd_in_alpha, {'x': x, 'alphas': w})
            for x in grid.x_values
            for w in _windows(grid.alpha_values, 4)
            if _within_orders(2.0 * min(w), 2.0 * max(w))]


def _suite_order_convexity(grid: GridSpec) -> List[Task]:
    alphas = grid.alpha_values
    return [(check_order_convexity, {'nu': nu, 'mu': alphas[j], 'lam': lam, 'x': x})
            for i, nu in enumerate(alphas) for j in range(i + 1, len(alphas))
            for lam in grid.aux_values('lam') if 0.0 <= lam <= 1.0
            for x in grid.x_values]


def _suite_joint_holder(grid: GridSpec) -> List[Task]:
    alphas = grid.alpha_values
    pairs = list(zip(alphas, alphas[1:])) or [(alphas[0], alphas[0])]
    return [(check_joint_holder, {'alpha': a, 'beta': b, 'x': x, 'y': y, 'lam': lam})
            for a, b in pairs for x in grid.x_values for y in grid.aux_values('y')
            for lam in grid.aux_values('lam') if 0.0 <= lam <= 1.0]


def _suite_log_convexity_alpha(grid: GridSpec) -> List[Task]:
    return [(probe_log_convexity_alpha, {'x': x, 'alphas': list(grid.alpha_values)})
            for x in grid.x_values]


def _suite_ratio_over_x(grid: GridSpec) -> List[Task]:
    return [(probe_ratio_over_x, {'alpha': a, 'grid': list(grid.x_values)})
            for a in grid.alpha_values]


def _suite_ratio_over_alpha(grid: GridSpec) -> List[Task]:
    positive = [a for a in grid.alpha_values if a > 0.0]
    if not positive:
        return []
    return [(probe_ratio_over_alpha, {'x': x, 'alphas': positive}) for x in grid.x_values]


SUITES: Dict[str, Callable[[GridSpec], List[Task]]] = {
    'turan': _suite_turan,
    'turan_chain': _suite_turan_chain,
    'geometric_concavity': _suite_geometric_concavity,
    'chebyshev': _suite_chebyshev,
    'gruss': _suite_gruss,
    'kimberling': _suite_kimberling,
    'vasic': _suite_vasic,
    'order_chain': _suite_order_chain,
    'pair_mean': _suite_pair_mean,
    'pair_product': _suite_pair_product,
    'joint_logconvex': _suite_joint_logconvex,
    'relative_convexity': _suite_relative_convexity,
    'bound_gamma_quarter': _suite_bound_gamma_quarter,
    'bound_partial_alpha': _suite_bound_partial_alpha,
    'bound_carlson': _suite_bound_carlson,
    'bound_power_exponential': _suite_bound_power_exponential,
    'bound_holder': _suite_bound_holder,
    'log_convexity_x': _suite_log_convexity_x,
    'geometric_concavity_x': _suite_geometric_concavity_x,
    'gram_x': _suite_gram_x,
    'gram_alpha': _suite_gram_alpha,
    'order_convexity': _suite_order_convexity,
    'joint_holder': _suite_joint_holder,
    'log_convexity_alpha': _suite_log_convexity_alpha,
    'ratio_over_x': _suite_ratio_over_x,
    'ratio_over_alpha': _suite_ratio_over_alpha,
}


def resolve_suite_names(names: Iterable[str]) -> List[str]:
    """Expand 'all' and validate names; order follows the registry."""
    requested = set()
    for name in names:
        name = name.strip()
        if not name:
            continue
        if name == 'all':
            requested.update(SUITES)
        elif name in SUITES:
            requested.add(name)
        else:
            raise ValueError(f"Unknown suite: {name}. Available: {['all'] + list(SUITES)}")
    return [name for name in SUITES if name in requested]


def _run_task(task: Task, tol: float, ev: KiEvaluator) -> List[Verdict]:
    func, kwargs = task
    result = func(tol=tol, ev=ev, **kwargs)
    if isinstance(result, Verdict):
        return [result]
    return list(result)


def sweep(grid: GridSpec, names: Iterable[str], tol: float = VERDICT_TOL,
          cfg: Optional[EvalConfig] = None, workers: int = 1,
          cache: Optional[KiCache] = None) -> SweepReport:
    """
    Run the named suites over a grid.

    Args:
        grid: sweep domain
        names: suite identifiers, or 'all'
        tol: verdict tolerance
        cfg: evaluation settings shared by every check
        workers: thread count; results are merged in task order regardless
        cache: value cache to share across sweeps

    Returns:
        SweepReport keyed by verdict name

    Raises:
        ValueError: unknown suite name (before anything is evaluated)
    """
    selected = resolve_suite_names(names)
    report = SweepReport(tolerance=tol)
    if not selected:
        return report

    ev = KiEvaluator(cfg, cache)
    tasks: List[Task] = []
    for name in selected:
        suite_tasks = SUITES[name](grid)
        logger.info(f"Suite {name}: {len(suite_tasks)} checks on grid '{grid.name}'")
        tasks.extend(suite_tasks)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: _run_task(t, tol, ev), tasks))
    else:
        results = [_run_task(t, tol, ev) for t in tasks]

    for verdicts in results:
        for verdict in verdicts:
            report.entry(verdict.name).add(verdict)

    logger.info(f"Sweep finished: {len(tasks)} checks, {report.failure_count} failures, "
                f"cache {ev.cache.stats()}")
    return report
