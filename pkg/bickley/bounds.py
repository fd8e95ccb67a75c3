# bickley/bounds.py
"""
Closed-form bounds for the Bickley function

Upper bounds (closed form, no quadrature):
- bound_gamma_quarter: sqrt(pi) e^-x Gamma(alpha - 1/4) / (2 Gamma(alpha) x^(1/4)), alpha > 1/4
- bound_power_exponential: sqrt(pi) alpha^alpha Gamma(alpha) / (2 (e x)^alpha Gamma(alpha + 1/2)), alpha > 0
- bound_holder: two-sided Hölder bracket with conjugate exponents p, q
- bound_k0_gaussian: K_0(x) <= sqrt(pi) e^-x / sqrt(2x)

Bounds that need Bickley values (return KiValue / Bracket with errors):
- bound_holder_mixed: [K_0(xp)]^(1/p) [Ki_{alpha q}(0)]^(1/q)
- bracket_partial_alpha: bracket for the first alpha-derivative
- bound_carlson: (pi^2/2) Ki_{2alpha}(2x) Ki_{2alpha-2}(2x) >= Ki_alpha(x)^4

Every Gamma ratio is taken in log space; Gamma alone overflows near 171.
"""

import sys
import math
import logging
from typing import Optional

from .config import EvalConfig
from .engine import ki, ki_at_zero, HALF_LOG_PI, LOG_TWO
from .models import KiValue, Bracket, HolderBracket, BickleyDomainError
from .special import log_gamma, log_gamma_ratio

logger = logging.getLogger(__name__)

HALF_PI_SQUARED = 0.5 * math.pi ** 2
LOG_FLOAT_MAX = math.log(sys.float_info.max)


def _require_x(x: float, op: str) -> float:
    x = float(x)
    if not (x > 0.0) or not math.isfinite(x):
        raise BickleyDomainError(f"{op}: x must be positive and finite, got {x}")
    return x


def _require_alpha_above(alpha: float, floor: float, op: str) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= floor:
        raise BickleyDomainError(f"{op}: alpha must be finite and > {floor}, got {alpha}")
    return alpha


def _exp_bound(log_bound: float) -> float:
    """e^log_bound, or inf when the bound exceeds the largest double."""
    if log_bound > LOG_FLOAT_MAX:
        return math.inf
    return math.exp(log_bound)


# =============================================================================
# Closed forms
# =============================================================================

def bound_gamma_quarter(alpha: float, x: float) -> float:
    """
    Upper bound from cosh t >= 1 + t^2/2 and the AM-GM inequality.

    Grows without limit as alpha -> 1/4+ (pole of Gamma(alpha - 1/4)).
    """
    alpha = _require_alpha_above(alpha, 0.25, "bound_gamma_quarter")
    x = _require_x(x, "bound_gamma_quarter")
    log_bound = (HALF_LOG_PI - LOG_TWO - x - 0.25 * math.log(x)
                 + log_gamma_ratio(alpha - 0.25, alpha))
    return _exp_bound(log_bound)


def bound_power_exponential(alpha: float, x: float) -> float:
    """Upper bound from y^a e^-y <= a^a e^-a with y = x cosh t."""
    alpha = _require_alpha_above(alpha, 0.0, "bound_power_exponential")
    x = _require_x(x, "bound_power_exponential")
    log_bound = (HALF_LOG_PI - LOG_TWO + alpha * math.log(alpha)
                 - alpha * (1.0 + math.log(x))
                 + log_gamma_ratio(alpha, alpha + 0.5))
    return _exp_bound(log_bound)


def bound_k0_gaussian(x: float) -> float:
    """K_0(x) <= sqrt(pi) e^-x / sqrt(2x)."""
    x = _require_x(x, "bound_k0_gaussian")
    return _exp_bound(HALF_LOG_PI - x - 0.5 * math.log(2.0 * x))


def _conjugate(p: float, op: str) -> float:
    p = float(p)
    if not math.isfinite(p) or p <= 1.0:
        raise BickleyDomainError(f"{op}: Hölder exponent p must be finite and > 1, got {p}")
    return p / (p - 1.0)


def bound_holder(alpha: float, x: float, p: float) -> HolderBracket:
    """
    Two-sided bound with Hölder conjugates p, q = p/(p-1).

    lower = max(Ki_alpha(0) - x Ki_{alpha-1}(0), 0), and 0 when alpha <= 1
    because Ki_{alpha-1}(0) diverges there.

    upper = sqrt(pi) / (2^(1/q + 1/(2p)) p^(1/(2p)))
            * [Gamma(alpha q/2) / Gamma((alpha q + 1)/2)]^(1/q) * e^-x / x^(1/(2p))

    The bracket also carries the Gaussian K_0(xp) step used between the
    mixed and the closed upper bound.
    """
    alpha = _require_alpha_above(alpha, 0.0, "bound_holder")
    x = _require_x(x, "bound_holder")
    q = _conjugate(p, "bound_holder")
    p = float(p)

    if alpha > 1.0:
        lower = max(ki_at_zero(alpha) - x * ki_at_zero(alpha - 1.0), 0.0)
    else:
        lower = 0.0

    aq = alpha * q
    log_upper = (HALF_LOG_PI
                 - (1.0 / q + 1.0 / (2.0 * p)) * LOG_TWO
                 - math.log(p) / (2.0 * p)
                 + log_gamma_ratio(0.5 * aq, 0.5 * (aq + 1.0)) / q
                 - x - math.log(x) / (2.0 * p))
    upper = _exp_bound(log_upper)

    return HolderBracket(
        lower=lower,
        upper=upper,
        k0_gaussian=bound_k0_gaussian(x * p),
        p=p,
        q=q,
    )


def bound_holder_mixed(alpha: float, x: float, p: float,
                       cfg: Optional[EvalConfig] = None) -> KiValue:
    """Middle term of the Hölder bracket: [K_0(xp)]^(1/p) [Ki_{alpha q}(0)]^(1/q)."""
    alpha = _require_alpha_above(alpha, 0.0, "bound_holder_mixed")
    x = _require_x(x, "bound_holder_mixed")
    q = _conjugate(p, "bound_holder_mixed")
    p = float(p)
    k0 = ki(0.0, x * p, cfg)
    at_zero = ki_at_zero(alpha * q)
    return k0 ** (1.0 / p) * (at_zero ** (1.0 / q))


def kimberling_constant(alpha: float) -> float:
    """2 Gamma((alpha+1)/2) / (sqrt(pi) Gamma(alpha/2)), the reciprocal of Ki_alpha(0)."""
    alpha = _require_alpha_above(alpha, 0.0, "kimberling_constant")
    return _exp_bound(LOG_TWO - HALF_LOG_PI
                    + log_gamma(0.5 * (alpha + 1.0)) - log_gamma(0.5 * alpha))


# =============================================================================
# Bounds through Bickley values
# =============================================================================

def bracket_partial_alpha(alpha: float, x: float,
                          cfg: Optional[EvalConfig] = None) -> Bracket:
    """
    Bracket for d/dalpha Ki_alpha(x):

        (Ki_{alpha+1} - Ki_{alpha-1}) / 2  <  d/dalpha Ki_alpha  <  (Ki_{alpha+2} - Ki_alpha) / 2

    from (1 - 1/u^2)/2 <= ln u <= (u - 1/u)/2 for u = cosh t >= 1.
    Both ends are negative.
    """
    lower = 0.5 * (ki(alpha + 1.0, x, cfg) - ki(alpha - 1.0, x, cfg))
    upper = 0.5 * (ki(alpha + 2.0, x, cfg) - ki(alpha, x, cfg))
    return Bracket(
        lower=lower.value,
        upper=upper.value,
        lower_err=lower.abs_err_est,
        upper_err=upper.abs_err_est,
    )


def bound_carlson(alpha: float, x: float, cfg: Optional[EvalConfig] = None) -> KiValue:
    """(pi^2/2) Ki_{2alpha}(2x) Ki_{2alpha-2}(2x), an upper bound for Ki_alpha(x)^4."""
    alpha = float(alpha)
    x = _require_x(x, "bound_carlson")
    return HALF_PI_SQUARED * ki(2.0 * alpha, 2.0 * x, cfg) * ki(2.0 * alpha - 2.0, 2.0 * x, cfg)
